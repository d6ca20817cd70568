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

#include "powergame/analysis.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "powergame/errors.h"

namespace powergame {
namespace {

constexpr double kGridDedupTolerance = 1e-12;
constexpr double kGridSpan = 20.0;
constexpr double kDominanceSigmas = 2.0;

void AddUnique(std::vector<double>& grid, double p) {
  for (double q : grid) {
    if (std::abs(q - p) <= kGridDedupTolerance * std::max(q, p)) return;
  }
  grid.push_back(p);
}

}  // namespace

std::vector<double> ExpectedStageUtility(const GameParams& params,
                                         const ChannelModel& model,
                                         std::span<const StrategyKind> kinds) {
  const auto n = static_cast<std::size_t>(params.num_players());
  if (kinds.size() != n || model.num_players() != params.num_players()) {
    throw DomainError("game, model and strategy profile disagree on K");
  }
  std::vector<double> expected(n, 0.0);
  SocialOptimumPlanner planner;
  for (const auto& [state, mu] : model.EnumerateStationary()) {
    const std::vector<double> eta = model.space().GainsOf(state);
    const std::vector<double> power =
        CompliantProfile(params, kinds, eta, {}, {}, &planner);
    for (std::size_t i = 0; i < n; ++i) {
      expected[i] += mu * Utility(params, eta, power, static_cast<int>(i));
    }
  }
  return expected;
}

std::vector<double> ExpectedStageUtility(const GameParams& params,
                                         const ChannelModel& model,
                                         const StrategyKind& kind) {
  const std::vector<StrategyKind> kinds(
      static_cast<std::size_t>(params.num_players()), kind);
  return ExpectedStageUtility(params, model, kinds);
}

double JammedBestUtility(const GameParams& params, std::span<const double> eta,
                         int i) {
  double jamming = 0.0;
  for (int j = 0; j < params.num_players(); ++j) {
    if (j != i) jamming += params.max_power(j) * eta[j];
  }
  const double floor = jamming + params.noise_power();
  const double beta = params.beta_star();
  const double required = beta * floor / eta[i];
  if (required <= params.max_power(i)) {
    return params.rate(i) * eta[i] * params.efficiency().Value(beta) /
           (beta * floor);
  }
  const double cap = params.max_power(i);
  return params.rate(i) * params.efficiency().Value(cap * eta[i] / floor) / cap;
}

double MinmaxLevel(const GameParams& params, const ChannelModel& model, int i) {
  params.RequireEqualRates();
  if (i < 0 || i >= params.num_players()) {
    throw DomainError("player index out of range");
  }
  double level = 0.0;
  for (const auto& [state, mu] : model.EnumerateStationary()) {
    const std::vector<double> eta = model.space().GainsOf(state);
    level += mu * JammedBestUtility(params, eta, i);
  }
  return level;
}

std::vector<double> MinmaxLevels(const GameParams& params,
                                 const ChannelModel& model) {
  std::vector<double> levels;
  for (int i = 0; i < params.num_players(); ++i) {
    levels.push_back(MinmaxLevel(params, model, i));
  }
  return levels;
}

std::vector<double> RegionActionGrid(const GameParams& params,
                                     std::span<const double> eta, int i,
                                     int grid_size) {
  const double cap = params.max_power(i);
  std::vector<double> required;
  if (params.nash_non_saturated()) {
    const double p = params.noise_power() / eta[i] * params.beta_star() /
                     (1.0 - (params.num_players() - 1) * params.beta_star());
    if (p <= cap) AddUnique(required, p);
  }
  for (int k = 1; k <= std::min(2, params.num_players()); ++k) {
    const double p = OperatingPointPower(params, eta[i], k);
    if (p <= cap) AddUnique(required, p);
  }
  std::vector<double> grid = {0.0};
  for (double p : required) AddUnique(grid, p);
  const int extra = grid_size - static_cast<int>(grid.size());
  if (extra > 0) {
    double lo = cap;
    double hi = 0.0;
    for (double p : required) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (required.empty()) hi = cap;
    lo = std::min(lo / kGridSpan, cap);
    hi = std::min(hi * kGridSpan, cap);
    for (int g = 0; g < extra; ++g) {
      const double t = extra == 1 ? 0.5 : static_cast<double>(g) / (extra - 1);
      AddUnique(grid, lo * std::pow(hi / lo, t));
    }
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

RegionResult FeasibleRegion2p(const GameParams& params,
                              const ChannelModel& model, int grid_size) {
  if (grid_size < 2) throw DomainError("region grid size must be >= 2");
  return FeasibleRegion2p(
      params, model, [&](std::span<const double> eta, int i) {
        return RegionActionGrid(params, eta, i, grid_size);
      });
}

RegionResult FeasibleRegion2p(const GameParams& params,
                              const ChannelModel& model,
                              const ActionGridFn& action_grid) {
  if (params.num_players() != 2) {
    throw UnsupportedError("exact feasible region is limited to 2 players");
  }
  if (!model.law().is_iid()) {
    throw UnsupportedError("exact feasible region requires an IID channel law");
  }

  RegionResult result;
  for (const auto& [state, mu] : model.EnumerateStationary()) {
    const std::vector<double> eta = model.space().GainsOf(state);
    const auto grid0 = action_grid(eta, 0);
    const auto grid1 = action_grid(eta, 1);
    std::vector<Point2> cloud;
    cloud.reserve(grid0.size() * grid1.size());
    for (double p0 : grid0) {
      for (double p1 : grid1) {
        const double power[2] = {p0, p1};
        cloud.push_back(mu * Point2{Utility(params, eta, power, 0),
                                    Utility(params, eta, power, 1)});
      }
    }
    result.hull = MinkowskiSum(result.hull, ConvexHull(std::move(cloud)));
  }

  result.minmax = MinmaxLevels(params, model);
  result.fstar_vertices =
      ClipToQuadrant(result.hull, result.minmax[0], result.minmax[1]);

  const std::pair<const char*, StrategyKind> named[] = {
      {"nash", StrategyKind::OneShotNash()},
      {"op", StrategyKind::OperatingPoint()},
      {"bus", StrategyKind::BestUserSelection()},
      {"ts", StrategyKind::PureTimeSharing()},
  };
  for (const auto& [name, kind] : named) {
    const auto u = ExpectedStageUtility(params, model, kind);
    result.markers.push_back({name, Point2{u[0], u[1]}});
  }
  return result;
}

double DeviationPenalty(const GameParams& params, double eta_max) {
  const double beta = params.beta_star();
  return params.rate(0) * eta_max * params.efficiency().Value(beta) /
         (params.noise_power() * beta);
}

double LambdaMaxFormula(double delta, double penalty) {
  if (!(penalty > 0.0)) throw DomainError("deviation penalty must be > 0");
  if (!(delta > 0.0)) return 0.0;
  return delta / (penalty + delta);
}

LambdaBound LambdaMax(const GameParams& params, const ChannelModel& model,
                      std::int64_t horizon, std::uint64_t seed,
                      int replicates) {
  params.RequireEqualRates();
  const auto bus = EstimateExpectedUtility(
      params, model, StrategyKind::BestUserSelection(), horizon, seed,
      replicates);
  const auto nash = EstimateExpectedUtility(
      params, model, StrategyKind::OneShotNash(), horizon, seed, replicates);

  LambdaBound bound;
  bound.penalty = DeviationPenalty(params, model.space().max_gain());
  bound.expected_bus = bus.player;
  bound.expected_nash = nash.player;
  bound.scheme = 1.0;
  std::ostringstream warning;
  for (int i = 0; i < params.num_players(); ++i) {
    const MeanAndError delta = PairedDifference(bus, nash, i);
    bound.delta.push_back(delta);
    const double lambda = LambdaMaxFormula(delta.mean, bound.penalty);
    const double slope =
        delta.mean > 0.0 ? bound.penalty / std::pow(bound.penalty + delta.mean, 2)
                         : 0.0;
    bound.per_player.push_back(lambda);
    bound.per_player_error.push_back(slope * delta.std_error);
    if (lambda < bound.scheme) {
      bound.scheme = lambda;
      bound.scheme_error = bound.per_player_error.back();
    }
    if (delta.mean < -kDominanceSigmas * delta.std_error) {
      bound.hypothesis_violated = true;
      warning << "player " << i << ": E[u_bus] < E[u_nash] (delta "
              << delta.mean << " +- " << delta.std_error << "); ";
    }
  }
  bound.warning = warning.str();
  return bound;
}

void AppendDominance(const GameParams& params, const ChannelModel& model,
                     std::span<const StrategyKind> strategies,
                     std::int64_t horizon, std::uint64_t seed, int replicates,
                     double sweep_value, DominanceReport& report) {
  std::vector<UtilityEstimate> estimates;
  const UtilityEstimate* bus = nullptr;
  for (const auto& kind : strategies) {
    estimates.push_back(
        EstimateExpectedUtility(params, model, kind, horizon, seed, replicates));
    report.rows.push_back(
        {sweep_value, kind.Label(), estimates.back().player_average});
  }
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    if (strategies[s].type == StrategyType::kBestUserSelection) {
      bus = &estimates[s];
    }
  }
  if (bus == nullptr) return;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const StrategyType type = strategies[s].type;
    if (type != StrategyType::kOneShotNash &&
        type != StrategyType::kOperatingPoint &&
        type != StrategyType::kPureTimeSharing) {
      continue;
    }
    for (int player = -1; player < params.num_players(); ++player) {
      DominanceFinding finding;
      finding.sweep_value = sweep_value;
      finding.versus = strategies[s].Label();
      finding.player = player;
      finding.difference = PairedDifference(*bus, estimates[s], player);
      finding.holds = finding.difference.mean >=
                      -kDominanceSigmas * finding.difference.std_error;
      report.all_hold = report.all_hold && finding.holds;
      report.findings.push_back(finding);
    }
  }
}

PartitionTable ConfigPartition(const GameParams& params,
                               const ChannelModel& model, std::int64_t stages,
                               std::uint64_t seed, int player) {
  if (stages < 1) throw DomainError("partition needs at least one stage");
  if (player < 0 || player >= params.num_players()) {
    throw DomainError("player index out of range");
  }
  const auto k = static_cast<std::size_t>(params.num_players());
  std::vector<std::int64_t> in_set(k, 0);
  std::vector<std::int64_t> out_set(k, 0);
  Rng rng(seed);
  JointState state = model.SampleInitial(rng);
  JointState next;
  std::vector<double> eta(k);
  for (std::int64_t t = 0; t < stages; ++t) {
    if (t > 0) {
      model.SampleNext(state, next, rng);
      std::swap(state, next);
    }
    model.space().FillGains(state, eta);
    const std::vector<int> active = BusSelect(params, eta);
    const bool member = std::binary_search(active.begin(), active.end(), player);
    (member ? in_set : out_set)[active.size() - 1]++;
  }
  PartitionTable table;
  table.player = player;
  table.stages = stages;
  for (std::size_t j = 0; j < k; ++j) {
    table.h1.push_back(static_cast<double>(in_set[j]) / stages);
    table.h2.push_back(static_cast<double>(out_set[j]) / stages);
  }
  return table;
}

}  // namespace powergame
