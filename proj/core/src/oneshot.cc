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

#include "powergame/oneshot.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "powergame/errors.h"

namespace powergame {
namespace {

constexpr double kGridFloorRatio = 1e-6;
constexpr int kExhaustiveMaxPlayers = 4;
constexpr int kMaxAscentSweeps = 100;

void CheckSizes(const GameParams& params, std::span<const double> eta,
                std::span<const double> power) {
  const auto k = static_cast<std::size_t>(params.num_players());
  if (eta.size() != k || power.size() != k) {
    throw DomainError("gain/power vectors must have one entry per player");
  }
}

void CheckGains(std::span<const double> eta) {
  for (double g : eta) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("channel gains must be positive and finite");
    }
  }
}

// Player indices by decreasing gain, ties to the lower index.
std::vector<int> OrderByGain(std::span<const double> eta) {
  std::vector<int> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return eta[x] > eta[y]; });
  return order;
}

std::vector<double> PowerGrid(const GameParams& params,
                              std::span<const double> eta, int i,
                              int grid_size) {
  const double cap = params.max_power(i);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_size + params.num_players() + 2));
  grid.push_back(0.0);
  const double lo = cap * kGridFloorRatio;
  const double step = std::log(cap / lo) / (grid_size - 1);
  for (int g = 0; g < grid_size; ++g) {
    grid.push_back(g + 1 == grid_size ? cap : lo * std::exp(step * g));
  }
  if (params.nash_non_saturated()) {
    const double beta = params.beta_star();
    const double p = params.noise_power() / eta[i] * beta /
                     (1.0 - (params.num_players() - 1) * beta);
    if (p <= cap) grid.push_back(p);
  }
  for (int k = 1; k <= params.num_players(); ++k) {
    const double p = OperatingPointPower(params, eta[i], k);
    if (p <= cap) grid.push_back(p);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

GameParams GameParams::Create(int num_players, std::vector<double> rates,
                              double noise_power, std::vector<double> max_power,
                              EfficiencyFunction efficiency) {
  if (num_players < 1) throw DomainError("player count must be >= 1");
  const auto k = static_cast<std::size_t>(num_players);
  if (rates.size() != k || max_power.size() != k) {
    throw DomainError("rates and power caps need one entry per player");
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw DomainError("noise power must be positive");
  }
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DomainError("rates must be positive");
    }
  }
  for (double p : max_power) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw DomainError("power caps must be positive");
    }
  }
  GameParams params;
  params.num_players_ = num_players;
  params.rates_ = std::move(rates);
  params.noise_power_ = noise_power;
  params.max_power_ = std::move(max_power);
  params.efficiency_ = efficiency;
  params.beta_star_ = SolveBetaStar(efficiency);
  params.gamma_tilde_.reserve(k);
  for (int n = 1; n <= num_players; ++n) {
    params.gamma_tilde_.push_back(SolveGammaTilde(efficiency, n));
  }
  return params;
}

GameParams GameParams::Symmetric(int num_players, double rate,
                                 double noise_power, double max_power,
                                 EfficiencyFunction efficiency) {
  if (num_players < 1) throw DomainError("player count must be >= 1");
  const auto k = static_cast<std::size_t>(num_players);
  return Create(num_players, std::vector<double>(k, rate), noise_power,
                std::vector<double>(k, max_power), efficiency);
}

bool GameParams::nash_non_saturated() const {
  return (num_players_ - 1) * beta_star_ < 1.0;
}

bool GameParams::equal_rates() const {
  return std::all_of(rates_.begin(), rates_.end(),
                     [&](double r) { return r == rates_.front(); });
}

void GameParams::RequireNashNonSaturated() const {
  if (!nash_non_saturated()) {
    throw NonSaturationError(
        "non-saturated Nash equilibrium requires (K-1)*beta* < 1, got (" +
        std::to_string(num_players_) + "-1)*" + std::to_string(beta_star_));
  }
}

void GameParams::RequireEqualRates() const {
  if (!equal_rates()) {
    throw DomainError("operation requires equal rates across players");
  }
}

double Interference(std::span<const double> eta, std::span<const double> power,
                    int i) {
  double total = 0.0;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (static_cast<int>(j) != i) total += power[j] * eta[j];
  }
  return total;
}

double Sinr(const GameParams& params, std::span<const double> eta,
            std::span<const double> power, int i) {
  CheckSizes(params, eta, power);
  if (power[i] < 0.0) throw DomainError("powers must be >= 0");
  return power[i] * eta[i] / (Interference(eta, power, i) + params.noise_power());
}

double Utility(const GameParams& params, std::span<const double> eta,
               std::span<const double> power, int i) {
  const double sinr = Sinr(params, eta, power, i);
  if (power[i] == 0.0) return 0.0;
  return params.rate(i) * params.efficiency().Value(sinr) / power[i];
}

double Welfare(const GameParams& params, std::span<const double> eta,
               std::span<const double> power) {
  double total = 0.0;
  for (int i = 0; i < params.num_players(); ++i) {
    total += Utility(params, eta, power, i);
  }
  return total;
}

double BestResponse(const GameParams& params, double eta_i, double interference,
                    int i) {
  if (!(eta_i > 0.0)) throw DomainError("channel gain must be positive");
  const double target =
      params.beta_star() * (interference + params.noise_power()) / eta_i;
  return std::min(target, params.max_power(i));
}

double NashPower(const GameParams& params, double eta_i, int i) {
  params.RequireNashNonSaturated();
  if (!(eta_i > 0.0)) throw DomainError("channel gain must be positive");
  const double beta = params.beta_star();
  const double p = params.noise_power() / eta_i * beta /
                   (1.0 - (params.num_players() - 1) * beta);
  if (p > params.max_power(i)) {
    throw NonSaturationError("Nash power of player " + std::to_string(i) +
                             " exceeds its cap");
  }
  return p;
}

std::vector<double> NashPowers(const GameParams& params,
                               std::span<const double> eta) {
  if (eta.size() != static_cast<std::size_t>(params.num_players())) {
    throw DomainError("need one gain per player");
  }
  CheckGains(eta);
  std::vector<double> power(eta.size());
  for (int i = 0; i < params.num_players(); ++i) {
    power[i] = NashPower(params, eta[i], i);
  }
  return power;
}

double OperatingPointPower(const GameParams& params, double eta_i,
                           int num_active) {
  if (!(eta_i > 0.0)) throw DomainError("channel gain must be positive");
  if (num_active < 1 || num_active > params.num_players()) {
    throw DomainError("active count must lie in [1, K]");
  }
  const double gamma = params.gamma_tilde(num_active);
  return params.noise_power() / eta_i * gamma /
         (1.0 - (num_active - 1) * gamma);
}

std::vector<double> OperatingPointPowers(const GameParams& params,
                                         std::span<const double> eta,
                                         std::span<const int> active) {
  if (eta.size() != static_cast<std::size_t>(params.num_players())) {
    throw DomainError("need one gain per player");
  }
  if (active.empty()) throw DomainError("active set must be non-empty");
  CheckGains(eta);
  std::vector<double> power(eta.size(), 0.0);
  const int k = static_cast<int>(active.size());
  if (k > params.num_players()) throw DomainError("too many active players");
  const double gamma = params.gamma_tilde(k);
  const double scale = gamma / (1.0 - (k - 1) * gamma);
  for (int i : active) {
    if (i < 0 || i >= params.num_players()) {
      throw DomainError("active player index out of range");
    }
    if (power[i] != 0.0) throw DomainError("duplicate active player");
    power[i] = params.noise_power() / eta[i] * scale;
    if (power[i] > params.max_power(i)) {
      throw PowerCapError("operating-point power of player " +
                          std::to_string(i) + " exceeds its cap");
    }
  }
  return power;
}

SocialOptimumResult SocialOptimum(const GameParams& params,
                                  std::span<const double> eta, int grid_size) {
  if (grid_size < 2) throw DomainError("social optimum grid_size must be >= 2");
  const int k = params.num_players();
  if (eta.size() != static_cast<std::size_t>(k)) {
    throw DomainError("need one gain per player");
  }
  CheckGains(eta);

  std::vector<std::vector<double>> grids(k);
  for (int i = 0; i < k; ++i) grids[i] = PowerGrid(params, eta, i, grid_size);

  SocialOptimumResult best;
  best.power.assign(k, 0.0);
  best.welfare = 0.0;
  std::vector<double> power(k, 0.0);

  if (k <= kExhaustiveMaxPlayers) {
    std::vector<std::size_t> digit(k, 0);
    while (true) {
      for (int i = 0; i < k; ++i) power[i] = grids[i][digit[i]];
      const double w = Welfare(params, eta, power);
      if (w > best.welfare) {
        best.welfare = w;
        best.power = power;
      }
      int pos = 0;
      while (pos < k && ++digit[pos] == grids[pos].size()) digit[pos++] = 0;
      if (pos == k) break;
    }
    return best;
  }

  std::vector<std::vector<double>> starts;
  if (params.nash_non_saturated()) {
    try {
      starts.push_back(NashPowers(params, eta));
    } catch (const NonSaturationError&) {
    }
  }
  const std::vector<int> order = OrderByGain(eta);
  for (int n = 1; n <= k; ++n) {
    try {
      starts.push_back(OperatingPointPowers(
          params, eta, std::span<const int>(order.data(), n)));
    } catch (const PowerCapError&) {
    }
  }
  starts.emplace_back(k, 0.0);

  for (auto& start : starts) {
    power = start;
    double current = Welfare(params, eta, power);
    for (int sweep = 0; sweep < kMaxAscentSweeps; ++sweep) {
      bool improved = false;
      for (int i = 0; i < k; ++i) {
        const double keep = power[i];
        double best_value = keep;
        for (double candidate : grids[i]) {
          power[i] = candidate;
          const double w = Welfare(params, eta, power);
          if (w > current) {
            current = w;
            best_value = candidate;
            improved = true;
          }
        }
        power[i] = best_value;
      }
      if (!improved) break;
    }
    if (current > best.welfare) {
      best.welfare = current;
      best.power = power;
    }
  }
  return best;
}

}  // namespace powergame
