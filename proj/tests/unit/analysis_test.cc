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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "powergame/errors.h"

namespace powergame {
namespace {

GameParams Game(int k, double a, double cap = 1e6) {
  return GameParams::Symmetric(k, 1.0, 1.0, cap,
                               EfficiencyFunction::Exponential(a));
}

ChannelModel Fixed(std::vector<double> eta) {
  std::vector<std::vector<double>> gains;
  for (double e : eta) gains.push_back({e});
  return ChannelModel::Create(ChannelStateSpace::Create(gains),
                              TransitionLaw::JointIid({1.0}));
}

TEST(MinmaxTest, SpotValues) {
  EXPECT_NEAR(MinmaxLevel(Game(1, 0.1), Fixed({1.0}), 0),
              10 * std::exp(-1.0), 1e-12);
  const auto g = GameParams::Create(2, {1.0, 1.0}, 1.0, {1e6, 1.0},
                                    EfficiencyFunction::Exponential(0.1));
  EXPECT_NEAR(MinmaxLevel(g, Fixed({1.0, 1.0}), 0), 5 * std::exp(-1.0), 1e-12);
}

TEST(MinmaxTest, TwoStateIsTheWeightedClosedForm) {
  const auto g = Game(2, 0.2, 3.0);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.3}, 2);
  double want = 0;
  const double probs[2] = {0.7, 0.3};
  const double levels[2] = {1.0, 4.0};
  for (int s0 = 0; s0 < 2; ++s0) {
    for (int s1 = 0; s1 < 2; ++s1) {
      const double floor = 1.0 + 3.0 * levels[s1];
      const double p = 0.2 * floor / levels[s0];
      const double u = p <= 3.0 ? levels[s0] * std::exp(-1.0) / (0.2 * floor)
                                : oracle::F(0.2, 3.0 * levels[s0] / floor) / 3.0;
      want += probs[s0] * probs[s1] * u;
    }
  }
  EXPECT_NEAR(MinmaxLevel(g, model, 0), want, 1e-12);
}

TEST(MinmaxTest, JammingIsTheHarshestPunishment) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 2 + rep % 4;
    const auto g = Game(k, 0.1 + 0.4 * unif(gen), 0.5 + 5 * unif(gen));
    std::vector<double> eta(k);
    for (auto& e : eta) e = 0.1 + 10 * unif(gen);
    const double jammed = JammedBestUtility(g, eta, 0);
    std::vector<double> p(k);
    for (int j = 1; j < k; ++j) p[j] = g.max_power(j) * unif(gen);
    // Player 0's best reply on a fine grid against softer opponents.
    double best = 0;
    for (int s = 0; s <= 4000; ++s) {
      p[0] = g.max_power(0) * s / 4000.0;
      best = std::max(best, Utility(g, eta, p, 0));
    }
    EXPECT_GE(best * (1 + 1e-6), jammed);
  }
}

TEST(MinmaxTest, BelowNashExpectation) {
  for (double a : {0.1, 0.3}) {
    const auto g = Game(3, a, 50.0);
    const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 3);
    const auto nash = ExpectedStageUtility(g, model, StrategyKind::OneShotNash());
    const auto v = MinmaxLevels(g, model);
    for (int i = 0; i < 3; ++i) EXPECT_LE(v[i], nash[i]);
  }
}

TEST(RegionTest, SingleStateIsTheCloudHull) {
  const auto g = Game(2, 0.3);
  const auto model = Fixed({1.0, 2.0});
  const std::vector<double> grid = {0.0, 0.1, 0.5, 1.0};
  const auto region = FeasibleRegion2p(
      g, model, [&](std::span<const double>, int) { return grid; });
  std::vector<std::pair<double, double>> cloud;
  for (double p0 : grid) {
    for (double p1 : grid) {
      const std::vector<double> p = {p0, p1};
      cloud.emplace_back(oracle::Utility(1, 0.3, {1.0, 2.0}, p, 1.0, 0),
                         oracle::Utility(1, 0.3, {1.0, 2.0}, p, 1.0, 1));
    }
  }
  auto want = oracle::GiftWrapHull(cloud, 1e-15);
  ASSERT_EQ(region.hull.size(), want.size());
  std::sort(want.begin(), want.end());
  std::vector<std::pair<double, double>> got;
  for (const auto& v : region.hull) got.emplace_back(v.x, v.y);
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].first, want[i].first, 1e-12);
    EXPECT_NEAR(got[i].second, want[i].second, 1e-12);
  }
}

TEST(RegionTest, ActionGridCarriesTheNamedPowers) {
  const auto g = Game(2, 0.2);
  const std::vector<double> eta = {1.0, 4.0};
  const auto grid = RegionActionGrid(g, eta, 1, 16);
  EXPECT_EQ(grid.size(), 16u);
  auto has = [&](double p) {
    return std::any_of(grid.begin(), grid.end(), [&](double q) {
      return std::abs(q - p) <= 1e-12 * p;
    });
  };
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_TRUE(has(NashPower(g, 4.0, 1)));
  EXPECT_TRUE(has(OperatingPointPower(g, 4.0, 1)));
  EXPECT_TRUE(has(OperatingPointPower(g, 4.0, 2)));
}

TEST(RegionTest, RejectsUnsupportedModels) {
  EXPECT_THROW(FeasibleRegion2p(Game(3, 0.1),
                                BuildModel(TwoStateSpec{1, 4, 0.5}, 3), 8),
               UnsupportedError);
  const auto markov = ChannelModel::Create(
      ChannelStateSpace::Create({{1.0}, {1.0, 2.0}}),
      TransitionLaw::Markov(2, {0.5, 0.5, 0.5, 0.5}));
  EXPECT_THROW(FeasibleRegion2p(Game(2, 0.1), markov, 8), UnsupportedError);
}

TEST(RegionTest, ThreePresetMarkers) {
  const auto g = Game(2, 0.5);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  const auto region = FeasibleRegion2p(g, model, 32);
  ASSERT_EQ(region.markers.size(), 4u);
  Point2 nash, op, bus;
  for (const auto& m : region.markers) {
    EXPECT_TRUE(ContainsPoint(region.hull, m.point, 1e-9)) << m.name;
    if (m.name == "nash") nash = m.point;
    if (m.name == "op") op = m.point;
    if (m.name == "bus") bus = m.point;
  }
  EXPECT_GE(bus.x, op.x);
  EXPECT_GE(bus.y, op.y);
  EXPECT_GT(op.x, nash.x);
  EXPECT_GT(op.y, nash.y);
  EXPECT_GE(bus.x, region.minmax[0]);
  EXPECT_GE(bus.y, region.minmax[1]);
  EXPECT_FALSE(region.fstar_vertices.empty());
  for (const auto& v : region.fstar_vertices) {
    EXPECT_GE(v.x, region.minmax[0] - 1e-12);
    EXPECT_GE(v.y, region.minmax[1] - 1e-12);
  }
}

TEST(LambdaTest, FormulaSpotValues) {
  const auto g = Game(2, 0.1);
  const double penalty = DeviationPenalty(g, 1.0);
  EXPECT_NEAR(penalty, 10 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(LambdaMaxFormula(1.0, penalty), 1 / (1 + 10 * std::exp(-1.0)),
              1e-12);
  EXPECT_NEAR(LambdaMaxFormula(1.0, penalty), 0.2137, 1e-4);
  EXPECT_EQ(LambdaMaxFormula(0.0, penalty), 0.0);
}

TEST(LambdaTest, MonotoneInDeltaAndEtaMax) {
  const auto g = Game(2, 0.1);
  const double h = 1e-6;
  for (double delta : {0.1, 1.0, 5.0}) {
    for (double eta_max : {0.5, 1.0, 8.0}) {
      const double base = LambdaMaxFormula(delta, DeviationPenalty(g, eta_max));
      EXPECT_GT(LambdaMaxFormula(delta + h, DeviationPenalty(g, eta_max)), base);
      EXPECT_LT(LambdaMaxFormula(delta, DeviationPenalty(g, eta_max + h)), base);
    }
  }
}

TEST(LambdaTest, MonteCarloBoundIsConsistent) {
  const auto g = Game(3, 0.1);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 3);
  const auto bound = LambdaMax(g, model, 5000, 31, 8);
  ASSERT_EQ(bound.per_player.size(), 3u);
  EXPECT_FALSE(bound.hypothesis_violated) << bound.warning;
  EXPECT_NEAR(bound.penalty, 4 * 10 * std::exp(-1.0), 1e-12);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GT(bound.per_player[i], 0.0);
    EXPECT_LE(bound.scheme, bound.per_player[i]);
  }
}

TEST(DominanceTest, SinglePlayerStrategiesCoincide) {
  const auto g = Game(1, 0.3);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 1);
  const double nash =
      ExpectedStageUtility(g, model, StrategyKind::OneShotNash())[0];
  for (auto kind : {StrategyKind::OperatingPoint(), StrategyKind::PureTimeSharing(),
                    StrategyKind::BestUserSelection()}) {
    EXPECT_NEAR(ExpectedStageUtility(g, model, kind)[0], nash, 1e-12);
  }
}

TEST(DominanceTest, EqualGainsBusIsOperatingPoint) {
  const auto g = Game(10, 0.1);
  const auto model = Fixed(std::vector<double>(10, 1.5));
  EXPECT_EQ(ExpectedStageUtility(g, model, StrategyKind::BestUserSelection()),
            ExpectedStageUtility(g, model, StrategyKind::OperatingPoint()));
}

TEST(DominanceTest, ReportFlagsHold) {
  const auto g = Game(3, 0.1);
  const auto model = BuildModel(TruncatedRayleighSpec{}, 3);
  const std::vector<StrategyKind> kinds = {
      StrategyKind::OneShotNash(), StrategyKind::OperatingPoint(),
      StrategyKind::PureTimeSharing(), StrategyKind::BestUserSelection()};
  DominanceReport report;
  AppendDominance(g, model, kinds, 3000, 5, 8, 3.0, report);
  EXPECT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.findings.size(), 3u * 4u);
  EXPECT_TRUE(report.all_hold);
}

TEST(PartitionTest, EqualGainsAllMassOnOptimalCount) {
  const auto table = ConfigPartition(Game(5, 0.2), Fixed(std::vector(5, 1.0)),
                                     100, 1, 2);
  EXPECT_DOUBLE_EQ(table.h1[4], 1.0);
  double total = 0;
  for (std::size_t k = 0; k < 5; ++k) total += table.h1[k] + table.h2[k];
  EXPECT_DOUBLE_EQ(total, 1.0);
  const auto solo = ConfigPartition(Game(1, 0.2), Fixed({2.0}), 10, 1);
  EXPECT_DOUBLE_EQ(solo.h1[0], 1.0);
}

// Ties go to the lower index, so symmetry needs a fine gain grid.
TEST(PartitionTest, SymmetricPlayersShareFrequencies) {
  const auto g = Game(3, 0.2);
  const auto model = BuildModel(TruncatedRayleighSpec{1.0, 0.1, 10.0, 1024}, 3);
  const std::int64_t n = 50000;
  const auto a = ConfigPartition(g, model, n, 7, 0);
  const auto b = ConfigPartition(g, model, n, 7, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    const double pa = a.h1[k], pb = b.h1[k];
    const double se = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / n);
    EXPECT_NEAR(pa, pb, 3 * se + 1e-12) << "k=" << k + 1;
  }
}

}  // namespace
}  // namespace powergame
