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

#include "cheaptalk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cheaptalk/equilibria.hpp"

namespace cheaptalk {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear-interpolation quantile on a sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DistSummary summarize(std::vector<double> values, double hist_lo,
                      double hist_hi) {
  DistSummary out;
  out.hist_lo = hist_lo;
  out.hist_hi = hist_hi;
  out.hist.assign(kHistogramBins, 0);
  if (values.empty()) {
    out.mean = out.median = kNaN;
    out.q05 = out.q25 = out.q75 = out.q95 = kNaN;
    out.min = out.max = kNaN;
    return out;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    // clamp into the edge bins so the counts always total the sample size
    double pos = (v - hist_lo) / (hist_hi - hist_lo);
    int bin = static_cast<int>(pos * kHistogramBins);
    bin = std::clamp(bin, 0, kHistogramBins - 1);
    ++out.hist[bin];
  }
  out.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  out.min = values.front();
  out.max = values.back();
  out.median = quantile(values, 0.5);
  out.q05 = quantile(values, 0.05);
  out.q25 = quantile(values, 0.25);
  out.q75 = quantile(values, 0.75);
  out.q95 = quantile(values, 0.95);
  return out;
}

struct Task {
  int bias_index;
  int alpha_index;
  int lambda_index;
  int replication;
};

}  // namespace

std::vector<double> default_bias_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i < 101; ++i) grid[i] = 0.005 * static_cast<double>(i);
  return grid;
}

void validate(const SweepConfig& config) {
  validate(config.learner);
  validate(config.sim);
  if (config.bias_grid.empty() || config.alpha_grid.empty() ||
      config.lambda_grid.empty()) {
    throw std::invalid_argument("sweep: grids must be non-empty");
  }
  for (double b : config.bias_grid) {
    if (b < 0.0) throw std::invalid_argument("sweep: negative bias in grid");
  }
  for (double a : config.alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw std::invalid_argument("sweep: alpha grid entries must be in [0,1]");
    }
  }
  for (double l : config.lambda_grid) {
    if (!(l >= 0.0 && l < 1.0)) {
      throw std::invalid_argument(
          "sweep: lambda grid entries must be in [0,1)");
    }
  }
  if (config.n_replications < 1) {
    throw std::invalid_argument("sweep: n_replications must be >= 1");
  }
  if (config.workers < 0) {
    throw std::invalid_argument("sweep: workers must be >= 0");
  }
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t game_hash,
                          int bias_index, int alpha_index, int lambda_index,
                          int replication_index) {
  std::uint64_t h = base_seed;
  h = mix64(h ^ 0x9e3779b97f4a7c15ULL ^ game_hash);
  h = mix64(h ^ static_cast<std::uint64_t>(bias_index));
  h = mix64(h ^ static_cast<std::uint64_t>(alpha_index));
  h = mix64(h ^ static_cast<std::uint64_t>(lambda_index));
  h = mix64(h ^ static_cast<std::uint64_t>(replication_index));
  return h;
}

AggregateRecord aggregate(std::span<const RunRecord> records,
                          const GameSpec& spec, double alpha, double lambda,
                          int expected_runs) {
  if (records.empty() && expected_runs <= 0) {
    throw std::invalid_argument("aggregate: no records");
  }
  AggregateRecord out;
  out.bias = spec.bias;
  out.alpha = alpha;
  out.lambda = lambda;
  out.n_runs = static_cast<int>(records.size());
  out.n_missing =
      expected_runs >= 0 ? expected_runs - out.n_runs : 0;

  std::vector<double> u_s, u_r, mi, ms_s, ms_r, g_s, g_r;
  std::vector<Policy> greedy_senders, greedy_receivers;
  for (const RunRecord& rec : records) {
    if (rec.converged) ++out.n_converged;
    if (rec.is_eps_nash) ++out.n_eps_nash;
    if (!rec.converged) continue;
    u_s.push_back(rec.u_sender);
    u_r.push_back(rec.u_receiver);
    mi.push_back(rec.mutual_info);
    ms_s.push_back(rec.max_subopt_sender);
    ms_r.push_back(rec.max_subopt_receiver);
    g_s.push_back(rec.gain_sender);
    g_r.push_back(rec.gain_receiver);
    if (rec.is_eps_nash && rec.has_policies) {
      const auto canonical =
          canonicalize_messages(rec.policy_sender, rec.policy_receiver, spec);
      greedy_senders.push_back(greedy_policy(canonical.sender));
      greedy_receivers.push_back(greedy_policy(canonical.receiver));
    }
  }
  if (out.n_runs > 0) {
    out.convergence_freq =
        static_cast<double>(out.n_converged) / static_cast<double>(out.n_runs);
    out.eps_nash_freq =
        static_cast<double>(out.n_eps_nash) / static_cast<double>(out.n_runs);
  }

  const BabblingBenchmark babbling = babbling_benchmark(spec);
  out.babbling_u_sender = babbling.sender_payoff;
  out.babbling_u_receiver = babbling.receiver_payoff;
  const auto equilibria = enumerate_equilibria(spec);
  out.n_equilibria = static_cast<int>(equilibria.size());
  const PartitionalEquilibrium optimal = optimal_equilibrium(spec);
  out.optimal_u_sender = optimal.u_sender;
  out.optimal_u_receiver = optimal.u_receiver;
  out.optimal_mi = optimal.mutual_info;

  // Histogram ranges are theoretical, not data-driven, so cells line up
  // across biases and workers.
  out.u_sender = summarize(std::move(u_s), babbling.sender_payoff - 0.05, 0.0);
  out.u_receiver =
      summarize(std::move(u_r), babbling.receiver_payoff - 0.05, 0.0);
  out.mutual_info = summarize(std::move(mi), 0.0, 1.0);
  out.max_subopt_sender = summarize(std::move(ms_s), 0.0, 1.0);
  out.max_subopt_receiver = summarize(std::move(ms_r), 0.0, 1.0);
  out.gain_sender = summarize(std::move(g_s), 0.0, 0.25);
  out.gain_receiver = summarize(std::move(g_r), 0.0, 0.25);

  out.modal_sender_mi = kNaN;
  if (!greedy_senders.empty()) {
    const ModalPolicy modal_s = modal_policy(greedy_senders);
    const ModalPolicy modal_r = modal_policy(greedy_receivers);
    out.modal_sender_actions = modal_s.actions;
    out.modal_sender_freqs = modal_s.frequencies;
    out.modal_receiver_actions = modal_r.actions;
    out.modal_receiver_freqs = modal_r.frequencies;
    out.modal_sender_mi = normalized_mutual_information(modal_s.policy, spec);
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);
  const int n_bias = static_cast<int>(config.bias_grid.size());
  const int n_alpha = static_cast<int>(config.alpha_grid.size());
  const int n_lambda = static_cast<int>(config.lambda_grid.size());
  const int n_rep = config.n_replications;

  // One immutable spec per bias, shared read-only across workers.
  std::vector<GameSpec> specs;
  std::vector<BabblingBenchmark> babblings;
  specs.reserve(n_bias);
  for (double bias : config.bias_grid) {
    GameConfig game = config.game;
    game.bias = bias;
    specs.push_back(build_game(game));
    babblings.push_back(babbling_benchmark(specs.back()));
  }

  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(n_bias) * n_alpha * n_lambda * n_rep);
  for (int b = 0; b < n_bias; ++b) {
    for (int a = 0; a < n_alpha; ++a) {
      for (int l = 0; l < n_lambda; ++l) {
        for (int r = 0; r < n_rep; ++r) tasks.push_back({b, a, l, r});
      }
    }
  }

  std::vector<RunRecord> results(tasks.size());
  std::vector<char> completed(tasks.size(), 0);
  std::vector<std::string> errors(tasks.size());

  auto execute = [&](std::size_t i) {
    const Task& task = tasks[i];
    const GameSpec& spec = specs[task.bias_index];
    const BabblingBenchmark& babbling = babblings[task.bias_index];

    LearnerConfig sender = config.learner;
    sender.alpha = config.alpha_grid[task.alpha_index];
    sender.lambda = config.lambda_grid[task.lambda_index];
    sender.init_low = babbling.sender_payoff;
    sender.init_high = 0.0;
    LearnerConfig receiver = sender;
    receiver.init_low = babbling.receiver_payoff;

    SimConfig sim = config.sim;
    sim.seed = derive_seed(config.base_seed, game_fingerprint(spec),
                           task.bias_index, task.alpha_index,
                           task.lambda_index, task.replication);

    const SimResult sim_result = run_simulation(spec, sender, receiver, sim);
    // Metrics are taken on the implied exploration-free play (the argmax
    // projection of the converged policies). At the stopping temperature
    // the softmax policies still carry a few percent of exploration mass,
    // which is annealing residue rather than what the agents learned.
    const Metrics metrics = nash_deviation_metrics(
        greedy_policy(sim_result.policy_sender),
        greedy_policy(sim_result.policy_receiver), spec);

    RunRecord rec;
    rec.seed = sim.seed;
    rec.game_fingerprint = game_fingerprint(spec);
    rec.bias = spec.bias;
    rec.alpha = sender.alpha;
    rec.lambda = sender.lambda;
    rec.converged = sim_result.converged;
    rec.periods_elapsed = sim_result.periods_elapsed;
    rec.u_sender = metrics.u_sender;
    rec.u_receiver = metrics.u_receiver;
    rec.mutual_info = metrics.mutual_info;
    rec.max_subopt_sender = metrics.max_subopt_sender;
    rec.max_subopt_receiver = metrics.max_subopt_receiver;
    rec.gain_sender = metrics.gain_sender;
    rec.gain_receiver = metrics.gain_receiver;
    rec.is_eps_nash = metrics.is_eps_nash;
    rec.has_policies = true;
    rec.policy_sender = sim_result.policy_sender;
    rec.policy_receiver = sim_result.policy_receiver;
    results[i] = std::move(rec);
    completed[i] = 1;
  };

  int workers = config.workers;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(tasks.size()));

  // Work queue over a fixed task list; results land in preassigned slots,
  // so output order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker_loop = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        execute(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      } catch (...) {
        errors[i] = "unknown error";
      }
    }
  };
  if (workers <= 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
    for (std::thread& t : pool) t.join();
  }

  SweepResult out;
  out.records.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (completed[i]) {
      out.records.push_back(std::move(results[i]));
    } else {
      const Task& task = tasks[i];
      std::ostringstream msg;
      msg << "bias=" << config.bias_grid[task.bias_index]
          << " alpha=" << config.alpha_grid[task.alpha_index]
          << " lambda=" << config.lambda_grid[task.lambda_index]
          << " replication=" << task.replication << ": "
          << (errors[i].empty() ? "not executed" : errors[i]);
      out.missing.push_back(msg.str());
    }
  }

  std::size_t task_index = 0;
  std::size_t record_index = 0;
  for (int b = 0; b < n_bias; ++b) {
    for (int a = 0; a < n_alpha; ++a) {
      for (int l = 0; l < n_lambda; ++l) {
        std::size_t cell_begin = record_index;
        for (int r = 0; r < n_rep; ++r, ++task_index) {
          if (completed[task_index]) ++record_index;
        }
        out.aggregates.push_back(aggregate(
            std::span<const RunRecord>(out.records.data() + cell_begin,
                                       record_index - cell_begin),
            specs[b], config.alpha_grid[a], config.lambda_grid[l], n_rep));
      }
    }
  }
  return out;
}

}  // namespace cheaptalk
