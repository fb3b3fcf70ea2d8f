// Copyright 2026 The Cheaptalk Authors
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

#include <benchmark/benchmark.h>

#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {
namespace {

GameSpec baseline_game(int n_types, double bias = 0.1) {
  GameConfig config;
  config.n_types = n_types;
  config.n_messages = n_types;
  config.n_actions = 2 * n_types - 1;
  config.bias = bias;
  return build_game(config);
}

Policy random_policy(int rows, int cols, Rng& rng) {
  Policy pi(rows, cols);
  for (int s = 0; s < rows; ++s) {
    double sum = 0.0;
    for (int a = 0; a < cols; ++a) {
      pi(s, a) = 0.01 + rng.next_double();
      sum += pi(s, a);
    }
    for (int a = 0; a < cols; ++a) pi(s, a) /= sum;
  }
  return pi;
}

void BM_EnumerateEquilibria(benchmark::State& state) {
  const GameSpec spec = baseline_game(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_equilibria(spec));
  }
}
BENCHMARK(BM_EnumerateEquilibria)->Arg(6)->Arg(9);

void BM_NashDeviationMetrics(benchmark::State& state) {
  const GameSpec spec = baseline_game(6);
  Rng rng(3);
  const Policy pi_s = random_policy(6, 6, rng);
  const Policy pi_r = random_policy(6, 11, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nash_deviation_metrics(pi_s, pi_r, spec));
  }
}
BENCHMARK(BM_NashDeviationMetrics);

void BM_MutualInformation(benchmark::State& state) {
  const GameSpec spec = baseline_game(6);
  Rng rng(4);
  const Policy pi_s = random_policy(6, 6, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalized_mutual_information(pi_s, spec));
  }
}
BENCHMARK(BM_MutualInformation);

}  // namespace
}  // namespace cheaptalk
