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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "powergame/errors.h"

namespace powergame {
namespace {

GameParams Game(int k, double a, double noise = 1.0) {
  return GameParams::Symmetric(k, 1.0, noise, 1e6,
                               EfficiencyFunction::Exponential(a));
}

TEST(BusSelectTest, SpotValues) {
  const std::vector<double> eta = {4.0, 2.0, 1.0};
  EXPECT_EQ(BusSelect(Game(3, 0.5), eta), (std::vector<int>{0}));
  EXPECT_EQ(BusSelect(Game(3, 0.1), eta), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(BusSelect(Game(1, 0.3), std::vector{0.7}), (std::vector<int>{0}));
  // Order of the gains must not matter.
  EXPECT_EQ(BusSelect(Game(3, 0.5), std::vector{1.0, 2.0, 4.0}),
            (std::vector<int>{2}));
}

TEST(BusSelectTest, EqualGainsPickTheWelfareOptimalCount) {
  // k exp(-0.2 (k - 1)) peaks at k = 5.
  EXPECT_EQ(BusSelect(Game(5, 0.2), std::vector(5, 1.0)).size(), 5u);
  EXPECT_EQ(BusSelect(Game(8, 0.2), std::vector(8, 1.0)).size(), 5u);
  EXPECT_EQ(BusSelect(Game(10, 0.1), std::vector(10, 2.0)).size(), 10u);
}

TEST(BusSelectTest, MatchesBruteForce) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unif(0.1, 10.0);
  for (double a : {0.1, 0.5, 1.0}) {
    for (int rep = 0; rep < 40; ++rep) {
      const int k = 1 + rep % 7;
      std::vector<double> eta(k);
      for (auto& e : eta) e = unif(gen);
      EXPECT_EQ(BusSelect(Game(k, a, 0.7), eta),
                oracle::BruteForceBus(1.0, a, eta, 0.7));
    }
  }
}

TEST(BusSelectTest, ProportionalFormAgreesWithUtilities) {
  const auto g = Game(4, 0.3);
  const std::vector<double> eta = {0.5, 3.0, 2.9, 1.0};
  const auto set = BusSelect(g, eta);
  const auto p = OperatingPointPowers(g, eta, set);
  const double w = Welfare(g, eta, p);
  std::vector<int> order = {1, 2, 3, 0};
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<int> top(order.begin(), order.begin() + k);
    EXPECT_GE(w, Welfare(g, eta, OperatingPointPowers(g, eta, top)) *
                     (1 - 1e-12));
  }
}

TEST(TusSelectTest, SpotValues) {
  const std::vector<double> eta = {4.0, 2.0, 1.0};
  EXPECT_EQ(TusSelect(0.5, eta), (std::vector<int>{0, 1}));
  EXPECT_EQ(TusSelect(0.0, eta), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(TusSelect(1.0, eta), (std::vector<int>{0}));
  EXPECT_THROW(TusSelect(1.5, eta), DomainError);
}

TEST(BestGainTest, TiesGoToLowerIndex) {
  EXPECT_EQ(BestGainPlayer(std::vector{1.0, 3.0, 3.0}), 1);
}

TEST(StrategyKindTest, NamesRoundTrip) {
  for (auto kind :
       {StrategyKind::OneShotNash(), StrategyKind::OperatingPoint(),
        StrategyKind::PureTimeSharing(),
        StrategyKind::ThresholdUserSelection(0.5),
        StrategyKind::BestUserSelection(), StrategyKind::SocialOptimum()}) {
    EXPECT_EQ(ParseStrategyType(kind.Name()), kind.type);
  }
  EXPECT_EQ(StrategyKind::ThresholdUserSelection(0.5).Label(), "tus(0.5)");
  EXPECT_THROW(ParseStrategyType("greedy"), DomainError);
  EXPECT_THROW(StrategyKind::ThresholdUserSelection(-0.1), DomainError);
}

TEST(StageActionTest, SpotValues) {
  const auto g = Game(2, 0.1);
  SignalProfile signal;
  signal.own_gain = 2.0;
  signal.recommended = false;
  signal.k_active = 1;
  const PunishmentState calm;
  EXPECT_EQ(StageAction(StrategyKind::BestUserSelection(), g, signal, calm, 0),
            0.0);
  signal.recommended = true;
  signal.k_active = 2;
  EXPECT_NEAR(
      StageAction(StrategyKind::BestUserSelection(), g, signal, calm, 0), 0.05,
      1e-15);

  PunishmentState punished;
  punished.Trigger(3);
  signal.own_gain = 1.0;
  for (auto kind : {StrategyKind::BestUserSelection(),
                    StrategyKind::OperatingPoint(),
                    StrategyKind::PureTimeSharing()}) {
    EXPECT_NEAR(StageAction(kind, g, signal, punished, 0), 1.0 / 9, 1e-15);
  }
  punished.Trigger(7);
  EXPECT_EQ(punished.trigger_stage, 3);
}

TEST(StageActionTest, InformationContract) {
  const auto g = Game(2, 0.1);
  SignalProfile signal;
  signal.own_gain = 1.0;
  EXPECT_THROW(StageAction(StrategyKind::BestUserSelection(), g, signal, {}, 0),
               InformationError);
  signal.global_state = std::vector{1.0, 1.0};
  EXPECT_THROW(StageAction(StrategyKind::OneShotNash(), g, signal, {}, 0),
               InformationError);
  signal.global_state.reset();
  EXPECT_THROW(StageAction(StrategyKind::SocialOptimum(), g, signal, {}, 0),
               InformationError);
}

TEST(CompliantProfileTest, TimeSharingEnumeration) {
  // Every joint state of two players on {1, 4}: only the best player (lowest
  // index on ties) transmits, at the solo optimum power.
  const auto g = Game(2, 0.1);
  const std::vector<StrategyKind> kinds(2, StrategyKind::PureTimeSharing());
  for (double e0 : {1.0, 4.0}) {
    for (double e1 : {1.0, 4.0}) {
      const std::vector<double> eta = {e0, e1};
      std::vector<char> rec;
      const auto p = CompliantProfile(g, kinds, eta, {}, {}, nullptr, &rec);
      const int best = e1 > e0 ? 1 : 0;
      EXPECT_NEAR(p[best], 0.1 / eta[best], 1e-15);
      EXPECT_EQ(p[1 - best], 0.0);
      EXPECT_EQ(rec[best], 1);
      EXPECT_EQ(rec[1 - best], 0);
    }
  }
}

TEST(CompliantProfileTest, MixedKinds) {
  const auto g = Game(3, 0.1);
  const std::vector<StrategyKind> kinds = {StrategyKind::OneShotNash(),
                                           StrategyKind::BestUserSelection(),
                                           StrategyKind::OperatingPoint()};
  const std::vector<double> eta = {1.0, 2.0, 4.0};
  const auto p = CompliantProfile(g, kinds, eta, {}, {}, nullptr);
  EXPECT_NEAR(p[0], NashPower(g, 1.0, 0), 1e-15);
  EXPECT_NEAR(p[1], 0.1 / 2.0, 1e-15);
  EXPECT_NEAR(p[2], 0.1 / 4.0, 1e-15);
}

TEST(DetectDeviationTest, SpotValues) {
  const double g2 = 0.1 / 1.1;
  EXPECT_FALSE(DetectDeviation(g2, g2, 1e-6));
  // Other player doubles its power at the two-player operating point.
  const std::vector<double> eta = {1.0, 1.0};
  const std::vector<double> p = {0.1, 0.2};
  EXPECT_TRUE(DetectDeviation(g2, oracle::Sinr(eta, p, 1.0, 0), 1e-3));
  // Solo stage, an off-plan transmitter lowers the SINR.
  const std::vector<double> q = {0.1, 0.05};
  EXPECT_TRUE(DetectDeviation(0.1, oracle::Sinr(eta, q, 1.0, 0), 1e-3));
  EXPECT_THROW(DetectDeviation(0.1, 0.1, 0.0), DomainError);
}

}  // namespace
}  // namespace powergame
