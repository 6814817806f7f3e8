// Copyright 2026 The nashplay Authors
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


#include <vector>

#include <benchmark/benchmark.h>

#include "nashplay/evaluation.h"
#include "nashplay/game.h"
#include "nashplay/matrix_game.h"
#include "nashplay/nash_q.h"
#include "nashplay/nash_v.h"
#include "nashplay/rng.h"
#include "nashplay/schedules.h"

namespace nashplay {
namespace {

Matrix RandomMatrix(int rows, int cols, Rng& rng) {
  std::vector<double> entries(static_cast<std::size_t>(rows) * cols);
  for (double& v : entries) v = rng.Uniform();
  return Matrix(rows, cols, std::move(entries));
}

MarkovGame BenchGame(int horizon, int states, int actions) {
  Rng rng(7);
  return MakeRandomGame(horizon, states, actions, actions, rng);
}

void BM_ComputeCce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix upper = RandomMatrix(n, n, rng);
  const Matrix lower = RandomMatrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ComputeCce(upper, lower));
}
BENCHMARK(BM_ComputeCce)->Arg(2)->Arg(4)->Arg(8);

void BM_SolveZeroSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Matrix payoff = RandomMatrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(SolveZeroSum(payoff));
}
BENCHMARK(BM_SolveZeroSum)->Arg(2)->Arg(4)->Arg(8);

void BM_NashQEpisodes(benchmark::State& state) {
  const MarkovGame game = BenchGame(3, 3, 2);
  const int episodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(
        RunNashQ(game, Hyperparams::For(game, episodes), episodes, rng));
  }
  state.SetItemsProcessed(state.iterations() * episodes);
}
BENCHMARK(BM_NashQEpisodes)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_NashVEpisodes(benchmark::State& state) {
  const MarkovGame game = BenchGame(3, 3, 2);
  const int episodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(4);
    benchmark::DoNotOptimize(
        RunNashV(game, Hyperparams::For(game, episodes), episodes, rng));
  }
  state.SetItemsProcessed(state.iterations() * episodes);
}
BENCHMARK(BM_NashVEpisodes)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CertifiedPolicyTree(benchmark::State& state) {
  const MarkovGame game = BenchGame(2, 2, 2);
  const int episodes = static_cast<int>(state.range(0));
  Rng rng(5);
  const NashQHistory history =
      RunNashQ(game, Hyperparams::For(game, episodes), episodes, rng);
  for (auto _ : state) {
    const PolicyTree tree = CertifiedPolicyTreeQ(history, Side::kMax, 2000000);
    state.counters["nodes"] = static_cast<double>(tree.nodes.size());
  }
}
BENCHMARK(BM_CertifiedPolicyTree)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExactExploitability(benchmark::State& state) {
  const MarkovGame game = BenchGame(2, 2, 2);
  Rng rng(6);
  const NashQHistory history = RunNashQ(game, Hyperparams::For(game, 300), 300, rng);
  const PolicyTree mu = CertifiedPolicyTreeQ(history, Side::kMax, 2000000);
  const PolicyTree nu = CertifiedPolicyTreeQ(history, Side::kMin, 2000000);
  for (auto _ : state) benchmark::DoNotOptimize(ExploitabilityExact(game, mu, nu));
}
BENCHMARK(BM_ExactExploitability)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace nashplay

BENCHMARK_MAIN();
