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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cheaptalk/analysis.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/matrix.hpp"
#include "cheaptalk/simulation.hpp"

namespace cheaptalk {

struct SweepConfig {
  GameConfig game;        // bias replaced by each bias_grid entry
  LearnerConfig learner;  // alpha/lambda replaced by each grid entry;
                          // init bounds always come from the babbling
                          // benchmark of the run's game
  SimConfig sim;          // seed replaced by the derived per-run seed
  std::vector<double> bias_grid;    // default: 101 points, 0 to 0.5
  std::vector<double> alpha_grid{0.025, 0.05, 0.1, 0.2, 0.4};
  std::vector<double> lambda_grid{2e-5, 1e-5, 0.5e-5, 0.25e-5, 0.125e-5};
  int n_replications = 1000;
  std::uint64_t base_seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  bool store_policies = false;
};

std::vector<double> default_bias_grid();
void validate(const SweepConfig& config);

// Stable mixing of all run coordinates into one 64-bit seed (splitmix64
// chain). The game fingerprint participates so variant sweeps never reuse
// streams; collisions across the full paper grid are ruled out by test.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t game_hash,
                          int bias_index, int alpha_index, int lambda_index,
                          int replication_index);

// One completed run. Policies are kept in memory for aggregation; whether
// they are serialised is a separate choice (store_policies).
struct RunRecord {
  std::uint64_t seed = 0;
  std::uint64_t game_fingerprint = 0;
  double bias = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  bool converged = false;
  std::int64_t periods_elapsed = 0;
  double u_sender = 0.0;
  double u_receiver = 0.0;
  double mutual_info = 0.0;
  double max_subopt_sender = 0.0;
  double max_subopt_receiver = 0.0;
  double gain_sender = 0.0;
  double gain_receiver = 0.0;
  bool is_eps_nash = false;
  bool has_policies = false;
  Policy policy_sender;
  Policy policy_receiver;
};

struct DistSummary {
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0, q25 = 0.0, q75 = 0.0, q95 = 0.0;
  double min = 0.0, max = 0.0;
  double hist_lo = 0.0, hist_hi = 1.0;
  std::vector<std::int64_t> hist;  // kHistogramBins uniform bins, clamped
};

inline constexpr int kHistogramBins = 50;

struct AggregateRecord {
  double bias = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  int n_runs = 0;       // completed runs in the cell
  int n_missing = 0;    // runs lost to worker failures
  int n_converged = 0;
  int n_eps_nash = 0;
  double convergence_freq = 0.0;  // over completed runs
  double eps_nash_freq = 0.0;     // over completed runs
  // Distributions over converged runs only; non-converged runs are counted
  // but excluded, since their policies are still moving.
  DistSummary u_sender, u_receiver, mutual_info;
  DistSummary max_subopt_sender, max_subopt_receiver;
  DistSummary gain_sender, gain_receiver;
  // Modal play across eps-Nash runs, in canonical message labels.
  std::vector<int> modal_sender_actions;
  std::vector<double> modal_sender_freqs;
  std::vector<int> modal_receiver_actions;
  std::vector<double> modal_receiver_freqs;
  double modal_sender_mi = 0.0;  // NaN when no eps-Nash run carried policies
  // Theoretical benchmarks at this bias.
  double babbling_u_sender = 0.0;
  double babbling_u_receiver = 0.0;
  double optimal_u_sender = 0.0;
  double optimal_u_receiver = 0.0;
  double optimal_mi = 0.0;
  int n_equilibria = 0;
};

// Summary statistics of one grid cell. `expected_runs` (when >= 0) sets the
// missing-run count; records must all belong to the same cell.
AggregateRecord aggregate(std::span<const RunRecord> records,
                          const GameSpec& spec, double alpha, double lambda,
                          int expected_runs = -1);

struct SweepResult {
  std::vector<RunRecord> records;          // sorted by grid indices
  std::vector<AggregateRecord> aggregates; // one per (bias, alpha, lambda)
  std::vector<std::string> missing;        // manifest of failed runs
};

// Runs the full (bias x alpha x lambda x replication) grid, each run with
// its derived seed, over a bounded worker pool. Output order is fixed by
// the grid indices regardless of worker count; a failed run is recorded in
// the manifest and its cell is aggregated from the surviving runs.
SweepResult run_sweep(const SweepConfig& config);

}  // namespace cheaptalk
