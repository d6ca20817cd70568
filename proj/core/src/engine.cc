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

#include "powergame/engine.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "powergame/errors.h"

namespace powergame {
namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void CheckLambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("discount factor lambda must lie in (0, 1)");
  }
}

// The grim-trigger punishment is the K-player Nash equilibrium; make sure it
// exists for every gain the model can produce before playing. Only needed
// when a deviation can trigger it.
void RequirePunishmentAvailable(const GameParams& params,
                                const ChannelModel& model) {
  params.RequireNashNonSaturated();
  for (int i = 0; i < params.num_players(); ++i) {
    NashPower(params, model.space().min_gain(i), i);
  }
}

}  // namespace

void EngineConfig::Validate() const {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  CheckLambda(lambda);
  if (!(detection_tolerance > 0.0)) {
    throw DomainError("detection tolerance must be > 0");
  }
  if (deviation.has_value() && deviation->start_stage < 1) {
    throw DomainError("deviation start stage is 1-based");
  }
}

RunResult RunGame(const GameParams& params, const ChannelModel& model,
                  std::span<const StrategyKind> kinds, const EngineConfig& cfg) {
  cfg.Validate();
  const int k = params.num_players();
  if (model.num_players() != k || kinds.size() != static_cast<std::size_t>(k)) {
    throw DomainError("game, channel model and strategy profile disagree on K");
  }
  if (cfg.deviation.has_value() &&
      (cfg.deviation->player < 0 || cfg.deviation->player >= k)) {
    throw DomainError("deviating player index out of range");
  }
  if (cfg.deviation.has_value()) RequirePunishmentAvailable(params, model);
  for (const auto& kind : kinds) {
    if (kind.type == StrategyType::kBestUserSelection) {
      params.RequireEqualRates();
    }
  }

  Rng rng(cfg.seed);
  JointState state;
  if (cfg.initial_state.has_value()) {
    state = *cfg.initial_state;
    if (state.size() != static_cast<std::size_t>(k)) {
      throw DomainError("forced initial state has the wrong dimension");
    }
    for (int i = 0; i < k; ++i) {
      if (state[i] < 0 || state[i] >= model.space().num_levels(i)) {
        throw DomainError("forced initial state level out of range");
      }
    }
  } else {
    state = model.SampleInitial(rng);
  }

  const auto n = static_cast<std::size_t>(k);
  RunResult result;
  result.seed = cfg.seed;
  result.discounted.assign(n, 0.0);
  result.average.assign(n, 0.0);
  result.max_stage_utility.assign(n, 0.0);

  std::vector<CompensatedSum> discounted(n);
  std::vector<CompensatedSum> totals(n);
  CompensatedSum weight_total;
  std::vector<PunishmentState> punish(n);
  SocialOptimumPlanner planner;

  std::vector<double> eta(n);
  std::vector<double> plan(n);
  std::vector<double> power(n);
  std::vector<double> sinr(n, 0.0);
  std::vector<double> utility(n);
  std::vector<char> recommended(n);
  JointState next;

  const bool thin = cfg.horizon > kFullTraceHorizon;
  double weight = cfg.lambda;
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    if (t > 1) {
      model.SampleNext(state, next, rng);
      std::swap(state, next);
    }
    model.space().FillGains(state, eta);

    plan = CompliantProfile(params, kinds, eta, punish, sinr, &planner,
                            &recommended);

    power = plan;
    int deviator = -1;
    if (cfg.deviation.has_value()) {
      const auto& dev = *cfg.deviation;
      const bool active =
          dev.mode == DeviationSpec::Mode::kPermanent ? t >= dev.start_stage
                                                      : t == dev.start_stage;
      if (active) {
        deviator = dev.player;
        power[deviator] = BestResponse(params, eta[deviator],
                                       Interference(eta, plan, deviator),
                                       deviator);
      }
    }

    for (int i = 0; i < k; ++i) {
      sinr[i] = Sinr(params, eta, power, i);
      utility[i] = Utility(params, eta, power, i);
    }

    // Deviation alarm: a compliant transmitter whose SINR is off the plan.
    bool alarm = false;
    if (!punish[0].triggered) {
      for (int i = 0; i < k && !alarm; ++i) {
        if (i == deviator || plan[i] == 0.0) continue;
        alarm = DetectDeviation(Sinr(params, eta, plan, i), sinr[i],
                                cfg.detection_tolerance);
      }
    }

    if (cfg.record_trace && (!thin || (t - 1) % kTraceStride == 0)) {
      StageRecord record;
      record.t = t;
      record.state = state;
      record.eta = eta;
      record.recommended = recommended;
      record.power = power;
      record.sinr = sinr;
      record.utility = utility;
      record.punishing.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        record.punishing[i] = punish[i].triggered ? 1 : 0;
      }
      result.records.push_back(std::move(record));
    }

    if (alarm) {
      result.alarm_stage = t;
      for (auto& p : punish) p.Trigger(t);
    }

    weight_total.Add(weight);
    for (std::size_t i = 0; i < n; ++i) {
      discounted[i].Add(weight * utility[i]);
      totals[i].Add(utility[i]);
      result.max_stage_utility[i] =
          std::max(result.max_stage_utility[i], utility[i]);
    }
    weight *= 1.0 - cfg.lambda;
  }

  result.weight_sum = weight_total.value();
  const double tail = std::pow(1.0 - cfg.lambda, static_cast<double>(cfg.horizon));
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.discounted[i] = discounted[i].value();
    result.average[i] = totals[i].value() / static_cast<double>(cfg.horizon);
    sup = std::max(sup, result.max_stage_utility[i]);
  }
  result.truncation_bound = tail * sup;
  return result;
}

RunResult RunGame(const GameParams& params, const ChannelModel& model,
                  const StrategyKind& kind, const EngineConfig& cfg) {
  const std::vector<StrategyKind> kinds(
      static_cast<std::size_t>(params.num_players()), kind);
  return RunGame(params, model, kinds, cfg);
}

DiscountedSum DiscountedUtility(std::span<const double> stage_utilities,
                                double lambda) {
  CheckLambda(lambda);
  CompensatedSum sum;
  double weight = lambda;
  double sup = 0.0;
  for (double u : stage_utilities) {
    sum.Add(weight * u);
    weight *= 1.0 - lambda;
    sup = std::max(sup, std::abs(u));
  }
  return {sum.value(),
          std::pow(1.0 - lambda, static_cast<double>(stage_utilities.size())) *
              sup};
}

MeanAndError Summarize(std::span<const double> samples) {
  MeanAndError out;
  if (samples.empty()) return out;
  CompensatedSum sum;
  for (double x : samples) sum.Add(x);
  const double n = static_cast<double>(samples.size());
  out.mean = sum.value() / n;
  if (samples.size() < 2) return out;
  CompensatedSum squares;
  for (double x : samples) squares.Add((x - out.mean) * (x - out.mean));
  out.std_error = std::sqrt(squares.value() / (n - 1.0) / n);
  return out;
}

UtilityEstimate EstimateExpectedUtility(const GameParams& params,
                                        const ChannelModel& model,
                                        std::span<const StrategyKind> kinds,
                                        std::int64_t horizon, std::uint64_t seed,
                                        int replicates) {
  if (replicates < 1) throw DomainError("need at least one replicate");
  const auto n = static_cast<std::size_t>(params.num_players());
  UtilityEstimate estimate;
  estimate.replicate_means.assign(static_cast<std::size_t>(replicates), {});
  ParallelFor(replicates, [&](int r) {
    EngineConfig cfg;
    cfg.horizon = horizon;
    cfg.lambda = 0.5;
    cfg.seed = DeriveSeed(seed, static_cast<std::uint64_t>(r));
    estimate.replicate_means[static_cast<std::size_t>(r)] =
        RunGame(params, model, kinds, cfg).average;
  });
  std::vector<double> column(static_cast<std::size_t>(replicates));
  for (std::size_t i = 0; i < n; ++i) {
    for (int r = 0; r < replicates; ++r) {
      column[r] = estimate.replicate_means[r][i];
    }
    estimate.player.push_back(Summarize(column));
  }
  for (int r = 0; r < replicates; ++r) {
    const auto& row = estimate.replicate_means[r];
    CompensatedSum s;
    for (double x : row) s.Add(x);
    column[r] = s.value() / static_cast<double>(n);
  }
  estimate.player_average = Summarize(column);
  return estimate;
}

UtilityEstimate EstimateExpectedUtility(const GameParams& params,
                                        const ChannelModel& model,
                                        const StrategyKind& kind,
                                        std::int64_t horizon, std::uint64_t seed,
                                        int replicates) {
  const std::vector<StrategyKind> kinds(
      static_cast<std::size_t>(params.num_players()), kind);
  return EstimateExpectedUtility(params, model, kinds, horizon, seed,
                                 replicates);
}

MeanAndError PairedDifference(const UtilityEstimate& a,
                              const UtilityEstimate& b, int player) {
  if (a.replicate_means.size() != b.replicate_means.size()) {
    throw DomainError("paired estimates need the same replicate count");
  }
  std::vector<double> diff;
  diff.reserve(a.replicate_means.size());
  for (std::size_t r = 0; r < a.replicate_means.size(); ++r) {
    const auto& ra = a.replicate_means[r];
    const auto& rb = b.replicate_means[r];
    if (player >= 0) {
      diff.push_back(ra[static_cast<std::size_t>(player)] -
                     rb[static_cast<std::size_t>(player)]);
    } else {
      double d = 0.0;
      for (std::size_t i = 0; i < ra.size(); ++i) d += ra[i] - rb[i];
      diff.push_back(d / static_cast<double>(ra.size()));
    }
  }
  return Summarize(diff);
}

}  // namespace powergame
