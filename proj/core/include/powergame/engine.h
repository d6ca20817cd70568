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

#ifndef POWERGAME_ENGINE_H_
#define POWERGAME_ENGINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "powergame/channels.h"
#include "powergame/oneshot.h"
#include "powergame/strategies.h"

namespace powergame {

// A player that abandons the plan at `start_stage` (1-based) and plays a best
// response to the others' planned powers instead.
struct DeviationSpec {
  enum class Mode {
    kOneShot,    // deviate at start_stage only, then follow the strategy
    kPermanent,  // best-respond at every stage from start_stage on
  };
  int player = 0;
  std::int64_t start_stage = 1;
  Mode mode = Mode::kOneShot;
};

struct EngineConfig {
  std::int64_t horizon = 1;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  std::optional<DeviationSpec> deviation;
  // Forces eta(1) instead of drawing it from the stationary law.
  std::optional<JointState> initial_state;
  // Relative SINR tolerance of the deviation alarm.
  double detection_tolerance = 1e-6;
  bool record_trace = false;

  // Throws DomainError for horizon < 1, lambda outside (0, 1) or tol <= 0.
  void Validate() const;
};

// Full traces are kept up to this horizon; longer runs keep every
// kTraceStride-th stage.
inline constexpr std::int64_t kFullTraceHorizon = 10'000;
inline constexpr std::int64_t kTraceStride = 100;

struct StageRecord {
  std::int64_t t = 0;
  JointState state;
  std::vector<double> eta;
  std::vector<char> recommended;
  std::vector<double> power;
  std::vector<double> sinr;
  std::vector<double> utility;
  std::vector<char> punishing;
};

struct RunResult {
  // sum_t lambda (1-lambda)^(t-1) u_i(t) over the horizon.
  std::vector<double> discounted;
  // (1/T) sum_t u_i(t).
  std::vector<double> average;
  std::vector<double> max_stage_utility;
  // Sum of the discount weights actually applied, 1 - (1-lambda)^T.
  double weight_sum = 0.0;
  // (1-lambda)^T times the largest stage utility seen: bound on the
  // contribution of the truncated tail.
  double truncation_bound = 0.0;
  // First stage at which the deviation alarm fired.
  std::optional<std::int64_t> alarm_stage;
  std::vector<StageRecord> records;
  std::uint64_t seed = 0;
};

// Plays the stochastic game for cfg.horizon stages. Every player's power at
// stage t depends only on its own signals at t and the public alarm from
// stages before t. Deterministic in (inputs, cfg.seed). The channel path
// consumes the random stream independently of the strategies, so runs with
// the same seed share the same channel realizations.
//
// Throws NonSaturationError when the Nash punishment is not available for
// some reachable state, and InformationError / PowerCapError from the
// strategies.
RunResult RunGame(const GameParams& params, const ChannelModel& model,
                  std::span<const StrategyKind> kinds, const EngineConfig& cfg);

// Same strategy for everyone.
RunResult RunGame(const GameParams& params, const ChannelModel& model,
                  const StrategyKind& kind, const EngineConfig& cfg);

struct DiscountedSum {
  double value = 0.0;
  // (1-lambda)^T sup |u|.
  double remainder_bound = 0.0;
};

// sum_{t=1}^T lambda (1-lambda)^(t-1) u(t). Throws DomainError unless
// 0 < lambda < 1.
DiscountedSum DiscountedUtility(std::span<const double> stage_utilities,
                                double lambda);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and standard error of the mean of a sample (0 error for n < 2).
MeanAndError Summarize(std::span<const double> samples);

struct UtilityEstimate {
  // Per player.
  std::vector<MeanAndError> player;
  // Average over players, with its error across replicates.
  MeanAndError player_average;
  // replicate_means[r][i]: time-average utility of player i in replicate r.
  std::vector<std::vector<double>> replicate_means;
};

// Time-average utility over `horizon` stages per replicate, replicate r
// seeded with DeriveSeed(seed, r). Calling this for several strategies with
// the same seed gives common random numbers. Replicates run concurrently and
// are reduced in replicate order.
UtilityEstimate EstimateExpectedUtility(const GameParams& params,
                                        const ChannelModel& model,
                                        std::span<const StrategyKind> kinds,
                                        std::int64_t horizon, std::uint64_t seed,
                                        int replicates);
UtilityEstimate EstimateExpectedUtility(const GameParams& params,
                                        const ChannelModel& model,
                                        const StrategyKind& kind,
                                        std::int64_t horizon, std::uint64_t seed,
                                        int replicates);

// Paired difference a - b for one player (or the player average when
// player < 0), using replicate-wise differences.
MeanAndError PairedDifference(const UtilityEstimate& a,
                              const UtilityEstimate& b, int player);

// Runs fn(0..count-1) on up to hardware_concurrency threads.
template <typename Fn>
void ParallelFor(int count, Fn&& fn);

}  // namespace powergame

#include "powergame/internal/parallel.h"

#endif  // POWERGAME_ENGINE_H_
