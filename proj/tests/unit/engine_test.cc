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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "powergame/analysis.h"
#include "powergame/errors.h"

namespace powergame {
namespace {

GameParams Game(int k, double a) {
  return GameParams::Symmetric(k, 1.0, 1.0, 1e6,
                               EfficiencyFunction::Exponential(a));
}

EngineConfig Config(std::int64_t horizon, double lambda, std::uint64_t seed) {
  EngineConfig cfg;
  cfg.horizon = horizon;
  cfg.lambda = lambda;
  cfg.seed = seed;
  return cfg;
}

TEST(RunGameTest, SingleStageSinglePlayer) {
  const auto model = BuildModel(TwoStateSpec{1.0, 1.0, 0.5}, 1);
  const auto r =
      RunGame(Game(1, 0.1), model, StrategyKind::OneShotNash(), Config(1, 0.9, 1));
  EXPECT_NEAR(r.discounted[0], 0.9 * 10 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r.weight_sum, 0.9, 1e-15);
}

TEST(RunGameTest, Deterministic) {
  const auto model = BuildModel(TruncatedRayleighSpec{}, 3);
  auto cfg = Config(500, 0.05, 77);
  cfg.record_trace = true;
  const auto a = RunGame(Game(3, 0.2), model, StrategyKind::BestUserSelection(), cfg);
  const auto b = RunGame(Game(3, 0.2), model, StrategyKind::BestUserSelection(), cfg);
  EXPECT_EQ(a.discounted, b.discounted);
  EXPECT_EQ(a.average, b.average);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    EXPECT_EQ(a.records[t].power, b.records[t].power);
  }
}

TEST(RunGameTest, BusTraceReplaysOffline) {
  const auto g = Game(2, 0.5);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  auto cfg = Config(400, 0.1, 5);
  cfg.record_trace = true;
  const auto r = RunGame(g, model, StrategyKind::BestUserSelection(), cfg);
  ASSERT_EQ(r.records.size(), 400u);
  for (const auto& rec : r.records) {
    const auto set = BusSelect(g, rec.eta);
    std::vector<char> want(2, 0);
    for (int i : set) want[i] = 1;
    EXPECT_EQ(rec.recommended, want);
    for (int i = 0; i < 2; ++i) EXPECT_EQ(rec.power[i] > 0, want[i] == 1);
  }
  EXPECT_FALSE(r.alarm_stage.has_value());
}

TEST(RunGameTest, TraceIsThinnedForLongRuns) {
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  auto cfg = Config(kFullTraceHorizon + 1, 0.1, 5);
  cfg.record_trace = true;
  const auto r = RunGame(Game(2, 0.1), model, StrategyKind::OperatingPoint(), cfg);
  EXPECT_EQ(r.records.size(),
            static_cast<std::size_t>(kFullTraceHorizon / kTraceStride + 1));
  EXPECT_EQ(r.records[1].t, 1 + kTraceStride);
}

TEST(DeviationTest, SilentDeviatorIsCaughtTheSameStage) {
  // Fixed gains (1, 4) with a = 0.5: BUS keeps player 0 silent.
  const auto g5 = Game(2, 0.5);
  const auto model = ChannelModel::Create(
      ChannelStateSpace::Create({{1.0}, {4.0}}),
      TransitionLaw::JointIid({1.0}));
  auto cfg = Config(5, 0.2, 3);
  cfg.record_trace = true;
  cfg.deviation = DeviationSpec{0, 2, DeviationSpec::Mode::kOneShot};
  const auto r = RunGame(g5, model, StrategyKind::BestUserSelection(), cfg);
  ASSERT_TRUE(r.alarm_stage.has_value());
  EXPECT_EQ(*r.alarm_stage, 2);
  EXPECT_EQ(r.records[0].power[0], 0.0);
  EXPECT_GT(r.records[1].power[0], 0.0);
  for (std::size_t t = 2; t < 5; ++t) {
    EXPECT_EQ(r.records[t].punishing, (std::vector<char>{1, 1}));
    EXPECT_NEAR(r.records[t].power[0], NashPower(g5, 1.0, 0), 1e-15);
    EXPECT_NEAR(r.records[t].power[1], NashPower(g5, 4.0, 1), 1e-15);
  }
}

TEST(DeviationTest, PermanentDeviatorFacesNashFromNextStage) {
  const auto g = Game(3, 0.1);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 3);
  auto cfg = Config(50, 0.1, 8);
  cfg.record_trace = true;
  cfg.deviation = DeviationSpec{1, 10, DeviationSpec::Mode::kPermanent};
  const auto r = RunGame(g, model, StrategyKind::OperatingPoint(), cfg);
  ASSERT_TRUE(r.alarm_stage.has_value());
  EXPECT_EQ(*r.alarm_stage, 10);
  for (std::size_t t = 10; t < 50; ++t) {
    const auto nash = NashPowers(g, r.records[t].eta);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(r.records[t].power[i], nash[i], 1e-12 * nash[i]);
    }
  }
}

TEST(DeviationTest, NoAlarmWithoutDeviation) {
  const auto model = BuildModel(TruncatedRayleighSpec{}, 4);
  for (auto kind : {StrategyKind::OneShotNash(), StrategyKind::OperatingPoint(),
                    StrategyKind::PureTimeSharing(),
                    StrategyKind::ThresholdUserSelection(0.5),
                    StrategyKind::BestUserSelection()}) {
    const auto r = RunGame(Game(4, 0.2), model, kind, Config(2000, 0.01, 4));
    EXPECT_FALSE(r.alarm_stage.has_value()) << kind.Label();
  }
}

TEST(DiscountTest, SpotValues) {
  EXPECT_NEAR(DiscountedUtility(std::vector{1.0, 0.0, 0.0}, 0.5).value, 0.5,
              1e-16);
  EXPECT_NEAR(DiscountedUtility(std::vector{1.0, 1.0}, 0.5).value, 0.75, 1e-16);
  const std::vector<double> c(20000, 3.0);
  const auto d = DiscountedUtility(c, 0.01);
  EXPECT_NEAR(d.value, 3.0, 1e-12);
  EXPECT_LE(d.remainder_bound, 3.0 * std::exp(-0.01 * 20000) * 1.01);
  EXPECT_THROW(DiscountedUtility(c, 0.0), DomainError);
}

TEST(DiscountTest, WeightSumIdentity) {
  const auto model = BuildModel(TwoStateSpec{1.0, 1.0, 0.5}, 1);
  for (double lambda : {0.01, 0.1, 0.5}) {
    for (std::int64_t horizon : {10, 1000}) {
      const auto r = RunGame(Game(1, 0.1), model, StrategyKind::OneShotNash(),
                             Config(horizon, lambda, 1));
      EXPECT_NEAR(r.weight_sum,
                  1 - std::pow(1 - lambda, static_cast<double>(horizon)),
                  1e-12);
    }
  }
}

TEST(EstimateTest, DeterministicStageUtilityHasZeroError) {
  const auto model = BuildModel(TwoStateSpec{1.0, 1.0, 0.5}, 1);
  const auto e = EstimateExpectedUtility(Game(1, 0.1), model,
                                         StrategyKind::OneShotNash(), 100, 1, 8);
  EXPECT_NEAR(e.player[0].mean, 10 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(e.player[0].std_error, 0.0, 1e-12);
}

TEST(EstimateTest, OperatingPointTwoState) {
  const auto g = Game(2, 0.1);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  const auto e =
      EstimateExpectedUtility(g, model, StrategyKind::OperatingPoint(), 20000, 2, 16);
  const double want = 2.5 * std::exp(-1.1) / 0.1;
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(e.player[i].mean, want, 4 * e.player[i].std_error + 1e-9);
  }
}

TEST(EstimateTest, TimeSharingMatchesEnumeration) {
  const auto g = Game(2, 0.1);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  // Joint states (1,1) (1,4) (4,1) (4,4), each 1/4; the best player (lowest
  // index on ties) earns R eta f(beta*) / (sigma^2 beta*).
  const double unit = std::exp(-1.0) / 0.1;
  const double want0 = 0.25 * (1 + 0 + 4 + 4) * unit;
  const double want1 = 0.25 * (0 + 4 + 0 + 0) * unit;
  const auto exact = ExpectedStageUtility(g, model, StrategyKind::PureTimeSharing());
  EXPECT_NEAR(exact[0], want0, 1e-12);
  EXPECT_NEAR(exact[1], want1, 1e-12);
  const auto e = EstimateExpectedUtility(g, model, StrategyKind::PureTimeSharing(),
                                         20000, 3, 16);
  EXPECT_NEAR(e.player[0].mean, want0, 4 * e.player[0].std_error);
  EXPECT_NEAR(e.player[1].mean, want1, 4 * e.player[1].std_error);
}

TEST(EstimateTest, CommonRandomNumbersShrinkPairedError) {
  const auto g = Game(3, 0.1);
  const auto model = BuildModel(TruncatedRayleighSpec{}, 3);
  const auto bus = EstimateExpectedUtility(g, model, StrategyKind::BestUserSelection(),
                                           2000, 9, 16);
  const auto op = EstimateExpectedUtility(g, model, StrategyKind::OperatingPoint(),
                                          2000, 9, 16);
  const auto d = PairedDifference(bus, op, -1);
  const double unpaired = std::hypot(bus.player_average.std_error,
                                     op.player_average.std_error);
  EXPECT_LT(d.std_error, unpaired);
}

TEST(ConfigTest, Validation) {
  EXPECT_THROW(Config(0, 0.5, 1).Validate(), DomainError);
  EXPECT_THROW(Config(10, 1.0, 1).Validate(), DomainError);
  auto cfg = Config(10, 0.5, 1);
  cfg.detection_tolerance = 0;
  EXPECT_THROW(cfg.Validate(), DomainError);
}

TEST(ParallelForTest, PropagatesExceptions) {
  EXPECT_THROW(ParallelFor(8,
                           [](int i) {
                             if (i == 5) throw DomainError("boom");
                           }),
               DomainError);
}

}  // namespace
}  // namespace powergame
