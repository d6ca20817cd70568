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

#ifndef POWERGAME_ONESHOT_H_
#define POWERGAME_ONESHOT_H_

#include <span>
#include <vector>

#include "powergame/efficiency.h"

namespace powergame {

// Static description of the multiple-access power control game.
class GameParams {
 public:
  // Validates K >= 1, noise > 0, positive rates and caps of length K.
  // Throws DomainError otherwise. Nash non-saturation is recorded, not
  // enforced: operating-point and selection code is valid either way.
  static GameParams Create(int num_players, std::vector<double> rates,
                           double noise_power, std::vector<double> max_power,
                           EfficiencyFunction efficiency);
  // Same rate and cap for every player.
  static GameParams Symmetric(int num_players, double rate, double noise_power,
                              double max_power, EfficiencyFunction efficiency);

  int num_players() const { return num_players_; }
  double rate(int i) const { return rates_[i]; }
  const std::vector<double>& rates() const { return rates_; }
  double noise_power() const { return noise_power_; }
  double max_power(int i) const { return max_power_[i]; }
  const std::vector<double>& max_power() const { return max_power_; }
  const EfficiencyFunction& efficiency() const { return efficiency_; }
  double beta_star() const { return beta_star_; }
  // Operating-point SINR for k simultaneous transmitters, 1 <= k <= K.
  double gamma_tilde(int k) const { return gamma_tilde_[k - 1]; }

  // (K-1) beta* < 1, the condition for a non-saturated Nash equilibrium.
  bool nash_non_saturated() const;
  bool equal_rates() const;
  // Throws NonSaturationError naming the violated precondition.
  void RequireNashNonSaturated() const;
  // Throws DomainError when rates differ across players.
  void RequireEqualRates() const;

 private:
  GameParams() : efficiency_(EfficiencyFunction::Exponential(1.0)) {}

  int num_players_ = 0;
  std::vector<double> rates_;
  double noise_power_ = 0.0;
  std::vector<double> max_power_;
  EfficiencyFunction efficiency_;
  double beta_star_ = 0.0;
  std::vector<double> gamma_tilde_;
};

// sum_{j != i} p_j eta_j.
double Interference(std::span<const double> eta, std::span<const double> power,
                    int i);

// p_i eta_i / (sum_{j != i} p_j eta_j + sigma^2).
double Sinr(const GameParams& params, std::span<const double> eta,
            std::span<const double> power, int i);

// R_i f(SINR_i) / p_i in bit/J; 0 for a silent player.
double Utility(const GameParams& params, std::span<const double> eta,
               std::span<const double> power, int i);

// Sum of utilities.
double Welfare(const GameParams& params, std::span<const double> eta,
               std::span<const double> power);

// Power reaching SINR beta* against `interference`, clipped to the cap.
double BestResponse(const GameParams& params, double eta_i, double interference,
                    int i);

// Nash equilibrium powers (sigma^2 / eta_i) beta* / (1 - (K-1) beta*).
// Throws NonSaturationError if (K-1) beta* >= 1 or a power exceeds its cap.
std::vector<double> NashPowers(const GameParams& params,
                               std::span<const double> eta);

// Nash power of one player, which only needs its own gain.
double NashPower(const GameParams& params, double eta_i, int i);

// Equal-received-power operating point for the players in `active`
// (sized by |active|); everyone else is silent. Throws PowerCapError when a
// required power exceeds its cap, and DomainError for an empty set.
std::vector<double> OperatingPointPowers(const GameParams& params,
                                         std::span<const double> eta,
                                         std::span<const int> active);

// Operating-point power of one active player among `num_active`.
double OperatingPointPower(const GameParams& params, double eta_i,
                           int num_active);

struct SocialOptimumResult {
  std::vector<double> power;
  double welfare = 0.0;
};

// Maximizes welfare over the per-player grid {0} union a log grid on
// [1e-6 p_max, p_max], augmented with the Nash and every operating-point
// power so those profiles are always candidates. Exhaustive for K <= 4,
// coordinate ascent from the Nash and top-k operating-point profiles
// otherwise. Throws DomainError for grid_size < 2.
SocialOptimumResult SocialOptimum(const GameParams& params,
                                  std::span<const double> eta, int grid_size);

}  // namespace powergame

#endif  // POWERGAME_ONESHOT_H_
