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

#include "cheaptalk/simulation.hpp"

namespace cheaptalk {
namespace {

GameSpec baseline_game(int n_types) {
  GameConfig config;
  config.n_types = n_types;
  config.n_messages = n_types;
  config.n_actions = 2 * n_types - 1;
  config.bias = 0.1;
  return build_game(config);
}

void BM_SoftmaxRow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  QTable q = init_q_table(1, n, -7.0 / 60.0, 0.0, rng);
  std::vector<double> out(n);
  for (auto _ : state) {
    softmax_row(q.row(0), 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SoftmaxRow)->Arg(6)->Arg(11)->Arg(21);

void BM_PolicySnapshot(benchmark::State& state) {
  const GameSpec spec = baseline_game(static_cast<int>(state.range(0)));
  Rng rng(2);
  QTable q = init_q_table(spec.n_messages, spec.n_actions, -7.0 / 60.0, 0.0,
                          rng);
  Policy out(spec.n_messages, spec.n_actions);
  for (auto _ : state) {
    softmax_policy_into(q, 0.01, out);
    benchmark::DoNotOptimize(out.flat().data());
  }
}
BENCHMARK(BM_PolicySnapshot)->Arg(6)->Arg(9);

// Whole periods including the per-period convergence check, the dominant
// cost of a sweep.
void BM_SimulationPeriods(benchmark::State& state) {
  const GameSpec spec = baseline_game(6);
  const BabblingBenchmark bb = babbling_benchmark(spec);
  LearnerConfig sender{0.1, 5e-6, 0.1, bb.sender_payoff, 0.0};
  LearnerConfig receiver{0.1, 5e-6, 0.1, bb.receiver_payoff, 0.0};
  SimConfig sim;
  sim.max_periods = 20'000;
  sim.window = 10'000;
  sim.rel_tol = 1e-15;  // never satisfied: run the full period budget
  std::uint64_t seed = 0;
  for (auto _ : state) {
    sim.seed = seed++;
    benchmark::DoNotOptimize(run_simulation(spec, sender, receiver, sim));
  }
  state.SetItemsProcessed(state.iterations() * sim.max_periods);
}
BENCHMARK(BM_SimulationPeriods)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cheaptalk
