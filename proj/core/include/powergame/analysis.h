// Copyright 2026 The powergame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POWERGAME_ANALYSIS_H_
#define POWERGAME_ANALYSIS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "powergame/channels.h"
#include "powergame/engine.h"
#include "powergame/geometry.h"
#include "powergame/oneshot.h"
#include "powergame/strategies.h"

namespace powergame {

// Exact stationary expectation of each player's stage utility when every
// player follows `kinds` (no deviation), by enumerating the joint states.
std::vector<double> ExpectedStageUtility(const GameParams& params,
                                         const ChannelModel& model,
                                         std::span<const StrategyKind> kinds);
std::vector<double> ExpectedStageUtility(const GameParams& params,
                                         const ChannelModel& model,
                                         const StrategyKind& kind);

// Player i's best stage utility when every opponent transmits at its cap:
// SINR beta* when the required power fits under the cap, the cap otherwise.
double JammedBestUtility(const GameParams& params, std::span<const double> eta,
                         int i);

// Limit min-max level: stationary expectation of JammedBestUtility. Requires
// equal rates and an enumerable joint space.
double MinmaxLevel(const GameParams& params, const ChannelModel& model, int i);
std::vector<double> MinmaxLevels(const GameParams& params,
                                 const ChannelModel& model);

struct RegionMarker {
  std::string name;
  Point2 point;
};

struct RegionResult {
  // Counter-clockwise vertices of the feasible expected-utility set.
  std::vector<Point2> hull;
  std::vector<double> minmax;
  // hull intersected with {x >= minmax}.
  std::vector<Point2> fstar_vertices;
  // Exact expected utilities of nash, op, bus and ts.
  std::vector<RegionMarker> markers;
};

// Per-player action grid used for one state of the region computation:
// 0, the Nash power, the one- and two-player operating-point powers, padded
// with log-spaced powers up to `grid_size` entries. The required powers are
// always kept, so the grid can exceed grid_size when it is tiny.
std::vector<double> RegionActionGrid(const GameParams& params,
                                     std::span<const double> eta, int i,
                                     int grid_size);

// Feasible set of expected utilities over stationary Markov strategies with
// public randomization, as the Minkowski sum over joint states s of
// mu(s) * hull(utility cloud of s). Two players and an IID law only; throws
// UnsupportedError otherwise.
RegionResult FeasibleRegion2p(const GameParams& params,
                              const ChannelModel& model, int grid_size);

// Same, with the per-state action set of each player supplied by the caller.
using ActionGridFn =
    std::function<std::vector<double>(std::span<const double> eta, int i)>;
RegionResult FeasibleRegion2p(const GameParams& params,
                              const ChannelModel& model,
                              const ActionGridFn& action_grid);

// R eta_max f(beta*) / (sigma^2 beta*): the most a player can collect in one
// stage, which bounds what a one-stage deviation gains.
double DeviationPenalty(const GameParams& params, double eta_max);

// delta / (penalty + delta), or 0 when delta <= 0.
double LambdaMaxFormula(double delta, double penalty);

struct LambdaBound {
  std::vector<double> per_player;
  std::vector<double> per_player_error;
  // Minimum over players.
  double scheme = 0.0;
  double scheme_error = 0.0;
  std::vector<MeanAndError> expected_bus;
  std::vector<MeanAndError> expected_nash;
  std::vector<MeanAndError> delta;
  double penalty = 0.0;
  // Set when E[u_bus] < E[u_nash] beyond two standard errors for a player.
  bool hypothesis_violated = false;
  std::string warning;
};

// Largest discount factor for which BUS with grim-trigger Nash punishment is
// an equilibrium, per player, from Monte Carlo expectations with common
// random numbers. Requires equal rates.
LambdaBound LambdaMax(const GameParams& params, const ChannelModel& model,
                      std::int64_t horizon, std::uint64_t seed, int replicates);

struct DominanceRow {
  // Sweep coordinate (player count, gain ratio, ...).
  double sweep_value = 0.0;
  std::string strategy;
  MeanAndError estimate;
};

struct DominanceFinding {
  double sweep_value = 0.0;
  std::string versus;
  // Player index, or -1 for the player average.
  int player = -1;
  // E[u_bus] - E[u_versus], paired across replicates.
  MeanAndError difference;
  bool holds = true;
};

struct DominanceReport {
  std::vector<DominanceRow> rows;
  std::vector<DominanceFinding> findings;
  bool all_hold = true;
};

// Estimates every strategy in `strategies` on one game with common random
// numbers and checks E[u_bus] >= E[u_x] within two standard errors for
// x in {nash, op, ts} (when present). A failed check is a finding, not an
// exception.
void AppendDominance(const GameParams& params, const ChannelModel& model,
                     std::span<const StrategyKind> strategies,
                     std::int64_t horizon, std::uint64_t seed, int replicates,
                     double sweep_value, DominanceReport& report);

struct PartitionTable {
  int player = 0;
  std::int64_t stages = 0;
  // h1[k-1]: frequency of stages where k players are recommended and the
  // player is one of them; h2[k-1]: k recommended, player not among them.
  std::vector<double> h1;
  std::vector<double> h2;
};

// Empirical BUS configuration frequencies of one player over `stages`
// stages drawn from the model.
PartitionTable ConfigPartition(const GameParams& params,
                               const ChannelModel& model, std::int64_t stages,
                               std::uint64_t seed, int player = 0);

}  // namespace powergame

#endif  // POWERGAME_ANALYSIS_H_
