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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "powergame/analysis.h"
#include "powergame/channels.h"
#include "powergame/engine.h"
#include "powergame/oneshot.h"
#include "powergame/strategies.h"

namespace {

using namespace powergame;

GameParams Game(int k, double a) {
  return GameParams::Symmetric(k, 1.0, 1.0, 1000.0, EfficiencyFunction::Exponential(a));
}

void BM_BusSelect(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto params = Game(k, 0.1);
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> d(1.0);
  std::vector<std::vector<double>> gains(256, std::vector<double>(k));
  for (auto& g : gains) {
    for (double& e : g) e = d(rng);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BusSelect(params, gains[i++ % gains.size()]));
  }
}
BENCHMARK(BM_BusSelect)->Arg(2)->Arg(5)->Arg(10);

void BM_RunGame(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto params = Game(k, 0.1);
  const auto model = BuildModel(TruncatedRayleighSpec{}, k);
  EngineConfig cfg;
  cfg.horizon = 10000;
  cfg.lambda = 1e-3;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(
        RunGame(params, model, StrategyKind::BestUserSelection(), cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK(BM_RunGame)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FeasibleRegion(benchmark::State& state) {
  const auto params = Game(2, 0.5);
  const auto model = BuildModel(TwoStateSpec{1.0, 4.0, 0.5}, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        FeasibleRegion2p(params, model, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_FeasibleRegion)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
