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

#include "powergame/strategies.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "powergame/errors.h"

namespace powergame {
namespace {

std::vector<int> OrderByGain(std::span<const double> eta) {
  std::vector<int> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return eta[x] > eta[y]; });
  return order;
}

const char* NameOf(StrategyType type) {
  switch (type) {
    case StrategyType::kOneShotNash:
      return "nash";
    case StrategyType::kOperatingPoint:
      return "op";
    case StrategyType::kPureTimeSharing:
      return "ts";
    case StrategyType::kThresholdUserSelection:
      return "tus";
    case StrategyType::kBestUserSelection:
      return "bus";
    case StrategyType::kSocialOptimum:
      return "social";
  }
  return "?";
}

bool RequireRecommended(const SignalProfile& signal, const char* who) {
  if (!signal.recommended.has_value()) {
    throw InformationError(std::string(who) +
                           " needs the receiver recommendation signal");
  }
  return *signal.recommended;
}

}  // namespace

StrategyKind StrategyKind::ThresholdUserSelection(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("T-US threshold alpha must lie in [0, 1]");
  }
  StrategyKind kind{StrategyType::kThresholdUserSelection};
  kind.alpha = alpha;
  return kind;
}

StrategyKind StrategyKind::SocialOptimum(int grid_size) {
  if (grid_size < 2) throw DomainError("social optimum grid_size must be >= 2");
  StrategyKind kind{StrategyType::kSocialOptimum};
  kind.grid_size = grid_size;
  return kind;
}

std::string StrategyKind::Name() const { return NameOf(type); }

std::string StrategyKind::Label() const {
  if (type == StrategyType::kThresholdUserSelection) {
    std::string a = std::to_string(alpha);
    a.erase(a.find_last_not_of('0') + 1);
    if (a.back() == '.') a.pop_back();
    return "tus(" + a + ")";
  }
  return Name();
}

bool StrategyKind::UsesRecommendation() const {
  return type == StrategyType::kPureTimeSharing ||
         type == StrategyType::kThresholdUserSelection ||
         type == StrategyType::kBestUserSelection;
}

StrategyType ParseStrategyType(const std::string& name) {
  for (auto type :
       {StrategyType::kOneShotNash, StrategyType::kOperatingPoint,
        StrategyType::kPureTimeSharing, StrategyType::kThresholdUserSelection,
        StrategyType::kBestUserSelection, StrategyType::kSocialOptimum}) {
    if (name == NameOf(type)) return type;
  }
  throw DomainError("unknown strategy \"" + name +
                    "\" (expected nash, op, ts, tus, bus or social)");
}

void PunishmentState::Trigger(std::int64_t stage) {
  if (triggered) return;
  triggered = true;
  trigger_stage = stage;
}

std::vector<int> BusSelect(const GameParams& params,
                           std::span<const double> eta) {
  params.RequireEqualRates();
  const int k_max = params.num_players();
  if (eta.size() != static_cast<std::size_t>(k_max)) {
    throw DomainError("need one gain per player");
  }
  const std::vector<int> order = OrderByGain(eta);
  // With equal received powers every active SINR is gamma_k, so the top-k
  // welfare is R f(gamma_k) (1 - (k-1) gamma_k) / (sigma^2 gamma_k) times
  // the sum of the k best gains.
  const double rate = params.rate(0);
  double gain_sum = 0.0;
  double best_welfare = -1.0;
  int best_k = 0;
  for (int k = 1; k <= k_max; ++k) {
    const int player = order[k - 1];
    gain_sum += eta[player];
    const double gamma = params.gamma_tilde(k);
    const double scale = gamma / (1.0 - (k - 1) * gamma);
    bool feasible = true;
    for (int n = 0; n < k && feasible; ++n) {
      const int j = order[n];
      feasible = params.noise_power() / eta[j] * scale <= params.max_power(j);
    }
    if (!feasible) continue;
    const double welfare = rate * params.efficiency().Value(gamma) /
                           (params.noise_power() * scale) * gain_sum;
    if (welfare > best_welfare) {
      best_welfare = welfare;
      best_k = k;
    }
  }
  if (best_k == 0) {
    throw PowerCapError("no top-k operating point fits the power caps");
  }
  std::vector<int> active(order.begin(), order.begin() + best_k);
  std::sort(active.begin(), active.end());
  return active;
}

std::vector<int> TusSelect(double alpha, std::span<const double> eta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("T-US threshold alpha must lie in [0, 1]");
  }
  if (eta.empty()) throw DomainError("need at least one gain");
  const double best = *std::max_element(eta.begin(), eta.end());
  std::vector<int> active;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] >= alpha * best) active.push_back(static_cast<int>(i));
  }
  return active;
}

int BestGainPlayer(std::span<const double> eta) {
  if (eta.empty()) throw DomainError("need at least one gain");
  return static_cast<int>(std::max_element(eta.begin(), eta.end()) -
                          eta.begin());
}

std::optional<std::vector<int>> RecommendedSet(const StrategyKind& kind,
                                               const GameParams& params,
                                               std::span<const double> eta) {
  switch (kind.type) {
    case StrategyType::kPureTimeSharing:
      return std::vector<int>{BestGainPlayer(eta)};
    case StrategyType::kThresholdUserSelection:
      return TusSelect(kind.alpha, eta);
    case StrategyType::kBestUserSelection:
      return BusSelect(params, eta);
    default:
      return std::nullopt;
  }
}

const std::vector<double>& SocialOptimumPlanner::Profile(
    const GameParams& params, std::span<const double> eta, int grid_size) {
  auto key = std::make_pair(grid_size, std::vector<double>(eta.begin(), eta.end()));
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_
             .emplace(std::move(key),
                      powergame::SocialOptimum(params, eta, grid_size).power)
             .first;
  }
  return it->second;
}

double StageAction(const StrategyKind& kind, const GameParams& params,
                   const SignalProfile& signal, const PunishmentState& punish,
                   int i, SocialOptimumPlanner* planner) {
  if (signal.global_state.has_value() &&
      kind.type != StrategyType::kSocialOptimum) {
    throw InformationError("strategy " + kind.Name() +
                           " runs on individual CSI but was given the global "
                           "channel state");
  }
  if (punish.triggered) return NashPower(params, signal.own_gain, i);
  auto operating_point = [&](int num_active) {
    const double p = OperatingPointPower(params, signal.own_gain, num_active);
    if (p > params.max_power(i)) {
      throw PowerCapError("operating-point power of player " +
                          std::to_string(i) + " exceeds its cap");
    }
    return p;
  };

  switch (kind.type) {
    case StrategyType::kOneShotNash:
      return NashPower(params, signal.own_gain, i);
    case StrategyType::kOperatingPoint:
      return operating_point(params.num_players());
    case StrategyType::kPureTimeSharing:
      if (!RequireRecommended(signal, "time-sharing")) return 0.0;
      return operating_point(1);
    case StrategyType::kThresholdUserSelection:
    case StrategyType::kBestUserSelection: {
      if (!RequireRecommended(signal, kind.Name().c_str())) return 0.0;
      if (!signal.k_active.has_value()) {
        throw InformationError(kind.Name() +
                               " needs the number of recommended players");
      }
      return operating_point(*signal.k_active);
    }
    case StrategyType::kSocialOptimum: {
      if (!signal.global_state.has_value()) {
        throw InformationError("social optimum needs the global channel state");
      }
      const auto& eta = *signal.global_state;
      if (planner != nullptr) {
        return planner->Profile(params, eta, kind.grid_size)[i];
      }
      return powergame::SocialOptimum(params, eta, kind.grid_size).power[i];
    }
  }
  return 0.0;
}

std::vector<double> CompliantProfile(const GameParams& params,
                                     std::span<const StrategyKind> kinds,
                                     std::span<const double> eta,
                                     std::span<const PunishmentState> punish,
                                     std::span<const double> sinr_prev,
                                     SocialOptimumPlanner* planner,
                                     std::vector<char>* recommended) {
  const std::size_t n = kinds.size();
  std::vector<std::optional<std::vector<int>>> sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t same = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (kinds[j] == kinds[i]) {
        same = j;
        break;
      }
    }
    sets[i] = same == i ? RecommendedSet(kinds[i], params, eta) : sets[same];
  }
  if (recommended != nullptr) recommended->assign(n, 1);
  std::vector<double> power(n);
  for (std::size_t i = 0; i < n; ++i) {
    SignalProfile signal;
    signal.own_gain = eta[i];
    if (!sinr_prev.empty()) signal.own_sinr_prev = sinr_prev[i];
    if (sets[i].has_value()) {
      const auto& set = *sets[i];
      signal.recommended =
          std::binary_search(set.begin(), set.end(), static_cast<int>(i));
      signal.k_active = static_cast<int>(set.size());
      if (recommended != nullptr) (*recommended)[i] = *signal.recommended;
    }
    if (kinds[i].type == StrategyType::kSocialOptimum) {
      signal.global_state.emplace(eta.begin(), eta.end());
    }
    const PunishmentState none;
    power[i] = StageAction(kinds[i], params, signal,
                           punish.empty() ? none : punish[i],
                           static_cast<int>(i), planner);
  }
  return power;
}

bool DetectDeviation(double expected_sinr, double observed_sinr, double tol) {
  if (!(tol > 0.0)) throw DomainError("deviation tolerance must be > 0");
  return std::abs(observed_sinr - expected_sinr) >
         tol * std::max(expected_sinr, kDeviationFloor);
}

}  // namespace powergame
