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

#ifndef POWERGAME_STRATEGIES_H_
#define POWERGAME_STRATEGIES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powergame/oneshot.h"

namespace powergame {

enum class StrategyType {
  kOneShotNash,
  kOperatingPoint,
  kPureTimeSharing,
  kThresholdUserSelection,  // T-US
  kBestUserSelection,       // BUS
  kSocialOptimum,
};

struct StrategyKind {
  StrategyType type = StrategyType::kBestUserSelection;
  // T-US threshold in [0, 1].
  double alpha = 0.5;
  // Per-player power grid of the social-optimum search.
  int grid_size = 48;

  static StrategyKind OneShotNash() { return {StrategyType::kOneShotNash}; }
  static StrategyKind OperatingPoint() {
    return {StrategyType::kOperatingPoint};
  }
  static StrategyKind PureTimeSharing() {
    return {StrategyType::kPureTimeSharing};
  }
  // Throws DomainError unless alpha is in [0, 1].
  static StrategyKind ThresholdUserSelection(double alpha);
  static StrategyKind BestUserSelection() {
    return {StrategyType::kBestUserSelection};
  }
  static StrategyKind SocialOptimum(int grid_size = 48);

  // Short machine name: nash, op, ts, tus, bus, social.
  std::string Name() const;
  // Name with parameters, e.g. "tus(0.5)".
  std::string Label() const;
  // Whether play follows a receiver recommendation.
  bool UsesRecommendation() const;

  bool operator==(const StrategyKind&) const = default;
};

// Parses Name() output back. Throws DomainError on unknown names.
StrategyType ParseStrategyType(const std::string& name);

// What a player observes before choosing its power at one stage.
struct SignalProfile {
  // Private CSI.
  double own_gain = 0.0;
  // Receiver recommendation and the number of recommended players.
  std::optional<bool> recommended;
  std::optional<int> k_active;
  // Realized SINR of the previous stage (deviation alarm input).
  double own_sinr_prev = 0.0;
  // Full gain vector; only the social optimum is allowed to see it.
  std::optional<std::vector<double>> global_state;
};

// Grim trigger: once triggered, it stays triggered.
struct PunishmentState {
  bool triggered = false;
  std::optional<std::int64_t> trigger_stage;

  // No-op when already triggered.
  void Trigger(std::int64_t stage);
};

// Top-k gain set maximizing welfare at the k-player operating point, over
// k = 1..K. Ties in gain go to the lower player index; candidates whose
// operating point breaks a power cap are skipped. Requires equal rates.
// Returns ascending player indices.
std::vector<int> BusSelect(const GameParams& params, std::span<const double> eta);

// { i : eta_i >= alpha * max_j eta_j }, ascending. Never empty.
std::vector<int> TusSelect(double alpha, std::span<const double> eta);

// Player with the largest gain, lowest index on ties.
int BestGainPlayer(std::span<const double> eta);

// Active set the receiver recommends to a player using `kind`, or nullopt
// for kinds that do not use a recommendation.
std::optional<std::vector<int>> RecommendedSet(const StrategyKind& kind,
                                               const GameParams& params,
                                               std::span<const double> eta);

// Memoized social-optimum profiles keyed by the gain vector. Not
// thread-safe; one per run.
class SocialOptimumPlanner {
 public:
  const std::vector<double>& Profile(const GameParams& params,
                                     std::span<const double> eta,
                                     int grid_size);

 private:
  std::map<std::pair<int, std::vector<double>>, std::vector<double>> cache_;
};

// Power chosen by player i. Under punishment this is the K-player Nash
// power. Throws InformationError when the signal lacks a field the kind
// needs, or carries global CSI the kind is not entitled to.
double StageAction(const StrategyKind& kind, const GameParams& params,
                   const SignalProfile& signal, const PunishmentState& punish,
                   int i, SocialOptimumPlanner* planner = nullptr);

// Powers every player plays at one stage when all follow `kinds`: the
// receiver recommendation is computed per distinct kind, each player then
// acts on its own signals. `recommended` (optional) receives 1 for players
// told to transmit or whose kind ignores recommendations.
std::vector<double> CompliantProfile(const GameParams& params,
                                     std::span<const StrategyKind> kinds,
                                     std::span<const double> eta,
                                     std::span<const PunishmentState> punish,
                                     std::span<const double> sinr_prev,
                                     SocialOptimumPlanner* planner,
                                     std::vector<char>* recommended = nullptr);

// Absolute floor applied to the relative deviation tolerance.
inline constexpr double kDeviationFloor = 1e-12;

// |observed - expected| > tol * max(expected, kDeviationFloor).
// Throws DomainError for tol <= 0.
bool DetectDeviation(double expected_sinr, double observed_sinr, double tol);

}  // namespace powergame

#endif  // POWERGAME_STRATEGIES_H_
