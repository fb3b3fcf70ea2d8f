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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failures.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cheaptalk/config.hpp"
#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/records.hpp"
#include "cheaptalk/rng.hpp"
#include "cheaptalk/simulation.hpp"
#include "cheaptalk/sweep.hpp"

#include "../oracles.hpp"

namespace {

using namespace cheaptalk;

struct Checker {
  bool ok = true;
  std::string detail;
  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

int g_failures = 0;

void criterion(int id, const std::string& name,
               const std::function<void(Checker&)>& body) {
  Checker check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.ok = false;
    check.detail = std::string("exception: ") + e.what();
  }
  std::printf("criterion %2d: %s  %s%s%s\n", id, check.ok ? "PASS" : "FAIL",
              name.c_str(), check.ok ? "" : " -- ", check.detail.c_str());
  std::fflush(stdout);
  if (!check.ok) ++g_failures;
}

GameSpec baseline(double bias, int n_types = 6) {
  GameConfig config;
  config.n_types = n_types;
  config.n_messages = n_types;
  config.n_actions = 2 * n_types - 1;
  config.bias = bias;
  return build_game(config);
}

std::string describe(double got, double want, double tol) {
  std::ostringstream out;
  out << "got " << got << ", want " << want << " +/- " << tol;
  return out.str();
}

// ---------------------------------------------------------------------------
// criteria 5-7 share one desk-scale slice: 50 seeded baseline runs at each
// of b in {0.0, 0.2, 0.45}

struct SliceCell {
  double bias = 0.0;
  std::vector<RunRecord> records;
  AggregateRecord aggregate;
};

std::vector<SliceCell> run_slice() {
  SweepConfig config;
  config.bias_grid = {0.0, 0.2, 0.45};
  config.alpha_grid = {0.1};
  config.lambda_grid = {5e-6};
  config.n_replications = 50;
  config.base_seed = 20260808;
  config.workers = 0;
  std::cerr << "[acceptance] running 150 seeded baseline simulations "
               "(alpha=0.1, lambda=5e-6)...\n";
  const SweepResult result = run_sweep(config);
  std::vector<SliceCell> cells(3);
  for (int i = 0; i < 3; ++i) {
    cells[i].bias = config.bias_grid[i];
    cells[i].records.assign(result.records.begin() + 50 * i,
                            result.records.begin() + 50 * (i + 1));
    cells[i].aggregate = result.aggregates[i];
  }
  return cells;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2]
               : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---------------------------------------------------------------------------
// criterion 10: with frozen tables the policies depend on the temperature
// alone, so the stopping period can be computed directly from Q0 without
// simulating play. Softmax, deviation and streak logic are all redone here.

std::int64_t detector_oracle(const GameSpec& spec, const QTable& q_sender0,
                             const QTable& q_receiver0, double tau1,
                             double lambda, const SimConfig& sim) {
  auto policy_at = [&](const QTable& q, double tau) {
    Matrix pi(q.rows(), q.cols());
    for (int s = 0; s < q.rows(); ++s) {
      double max = q(s, 0);
      for (int a = 1; a < q.cols(); ++a) max = std::max(max, q(s, a));
      double sum = 0.0;
      for (int a = 0; a < q.cols(); ++a) {
        pi(s, a) = std::exp((q(s, a) - max) / tau);
        sum += pi(s, a);
      }
      for (int a = 0; a < q.cols(); ++a) pi(s, a) /= sum;
    }
    return pi;
  };
  auto deviation = [](const Matrix& now, const Matrix& before) {
    double diff = 0.0, base = 0.0;
    for (int s = 0; s < now.rows(); ++s) {
      for (int a = 0; a < now.cols(); ++a) {
        diff += (now(s, a) - before(s, a)) * (now(s, a) - before(s, a));
        base += before(s, a) * before(s, a);
      }
    }
    return std::sqrt(diff) / std::sqrt(base);
  };

  Matrix prev_s = policy_at(q_sender0, tau1);
  Matrix prev_r = policy_at(q_receiver0, tau1);
  std::int64_t streak = 0;
  for (std::int64_t t = 1; t <= sim.max_periods; ++t) {
    if (t % sim.check_stride != 0) continue;
    const double tau = tau1 * std::exp(-lambda * static_cast<double>(t - 1));
    const Matrix cur_s = policy_at(q_sender0, tau);
    const Matrix cur_r = policy_at(q_receiver0, tau);
    const bool quiet = deviation(cur_s, prev_s) < sim.rel_tol &&
                       deviation(cur_r, prev_r) < sim.rel_tol;
    streak = quiet ? streak + 1 : 0;
    prev_s = cur_s;
    prev_r = cur_r;
    if (streak >= sim.window) return t;
  }
  return sim.max_periods;
}

}  // namespace

int main() {
  criterion(1, "babbling benchmark exact values", [](Checker& check) {
    const BabblingBenchmark base = babbling_benchmark(baseline(0.2));
    check.expect(base.action == 0.5, "baseline babbling action is not 0.5");
    check.expect(std::fabs(base.receiver_payoff + 7.0 / 60.0) <= 1e-12,
                 describe(base.receiver_payoff, -7.0 / 60.0, 1e-12));
    check.expect(std::fabs(base.sender_payoff + 7.0 / 60.0 + 0.04) <= 1e-12,
                 describe(base.sender_payoff, -7.0 / 60.0 - 0.04, 1e-12));
    const BabblingBenchmark small = babbling_benchmark(baseline(0.0, 3));
    check.expect(small.action == 0.5, "n=3 babbling action is not 0.5");
    check.expect(std::fabs(small.receiver_payoff + 1.0 / 6.0) <= 1e-12,
                 describe(small.receiver_payoff, -1.0 / 6.0, 1e-12));
  });

  criterion(2, "n=3 enumerator matches the brute-force oracle",
            [](Checker& check) {
    for (double bias : {0.0, 0.1, 0.2, 0.3, 0.4}) {
      const GameSpec spec = baseline(bias, 3);
      const auto got = enumerate_equilibria(spec);
      const auto expected = test::brute_force_equilibria(spec);
      check.expect(got.size() == expected.size(),
                   "equilibrium count mismatch at b=" + std::to_string(bias));
      for (const PartitionalEquilibrium& eq : got) {
        std::vector<int> begins;
        for (const Block& block : eq.partition.blocks) {
          begins.push_back(block.begin);
        }
        const auto match = std::find_if(
            expected.begin(), expected.end(),
            [&](const test::OracleEquilibrium& oracle) {
              return oracle.block_begins == begins;
            });
        if (match == expected.end()) {
          check.expect(false,
                       "extra equilibrium at b=" + std::to_string(bias));
          continue;
        }
        check.expect(eq.block_actions == match->block_actions,
                     "selected actions differ at b=" + std::to_string(bias));
        check.expect(std::fabs(eq.u_sender - match->u_sender) <= 1e-12 &&
                         std::fabs(eq.u_receiver - match->u_receiver) <=
                             1e-12 &&
                         std::fabs(eq.mutual_info - match->mutual_info) <=
                             1e-12,
                     "payoffs/MI differ at b=" + std::to_string(bias));
      }
    }
  });

  criterion(3, "structural equilibrium facts on the baseline game",
            [](Checker& check) {
    auto n_blocks = [](const PartitionalEquilibrium& eq) {
      return eq.partition.blocks.size();
    };
    const auto at_005 = enumerate_equilibria(baseline(0.05));
    check.expect(std::any_of(at_005.begin(), at_005.end(),
                             [&](const auto& eq) { return n_blocks(eq) == 6; }),
                 "no fully separating equilibrium at b=0.05");
    const auto at_012 = enumerate_equilibria(baseline(0.12));
    check.expect(std::none_of(at_012.begin(), at_012.end(),
                              [&](const auto& eq) { return n_blocks(eq) == 6; }),
                 "fully separating equilibrium wrongly present at b=0.12");
    for (double bias : {0.35, 0.45}) {
      const auto only = enumerate_equilibria(baseline(bias));
      check.expect(only.size() == 1 && n_blocks(only.front()) == 1,
                   "babbling is not unique at b=" + std::to_string(bias));
    }
  });

  criterion(4, "every enumerated equilibrium has zero deviation metrics",
            [](Checker& check) {
    for (int i = 0; i <= 10; ++i) {
      const GameSpec spec = baseline(0.05 * i);
      for (const PartitionalEquilibrium& eq : enumerate_equilibria(spec)) {
        const auto [pi_s, pi_r] = induced_policies(eq, spec);
        const Metrics metrics = nash_deviation_metrics(pi_s, pi_r, spec);
        const bool zero = metrics.max_subopt_sender <= 1e-12 &&
                          metrics.max_subopt_receiver <= 1e-12 &&
                          std::fabs(metrics.gain_sender) <= 1e-12 &&
                          std::fabs(metrics.gain_receiver) <= 1e-12;
        check.expect(zero, "nonzero deviation metric at b=" +
                               std::to_string(0.05 * i));
      }
    }
  });

  const std::vector<SliceCell> slice = run_slice();

  criterion(5, "baseline runs converge to eps-Nash play", [&](Checker& check) {
    for (const SliceCell& cell : slice) {
      const auto& records = cell.records;
      const int converged =
          static_cast<int>(std::count_if(records.begin(), records.end(),
                                         [](const RunRecord& r) {
                                           return r.converged;
                                         }));
      const int eps_nash =
          static_cast<int>(std::count_if(records.begin(), records.end(),
                                         [](const RunRecord& r) {
                                           return r.is_eps_nash;
                                         }));
      double gain_s = 0.0, gain_r = 0.0;
      for (const RunRecord& rec : records) {
        if (rec.converged) {
          gain_s += rec.gain_sender;
          gain_r += rec.gain_receiver;
        }
      }
      gain_s /= std::max(converged, 1);
      gain_r /= std::max(converged, 1);
      const std::string at = " at b=" + std::to_string(cell.bias);
      check.expect(converged >= 48,
                   "only " + std::to_string(converged) + "/50 converged" + at);
      check.expect(eps_nash >= 35,
                   "only " + std::to_string(eps_nash) + "/50 eps-Nash" + at);
      check.expect(gain_s <= 0.005 && gain_r <= 0.005,
                   "mean gain above 0.005" + at);
    }
  });

  criterion(6, "informativeness ordering across biases", [&](Checker& check) {
    const double mi_0 = slice[0].aggregate.mutual_info.median;
    const double mi_02 = slice[1].aggregate.mutual_info.median;
    const double mi_045 = slice[2].aggregate.mutual_info.median;
    check.expect(mi_0 >= 0.9, describe(mi_0, 1.0, 0.1) + " at b=0");
    check.expect(mi_02 >= 0.2 && mi_02 <= 0.7,
                 describe(mi_02, 0.45, 0.25) + " at b=0.2");
    double nearest = 1e300;
    for (const PartitionalEquilibrium& eq :
         enumerate_equilibria(baseline(0.2))) {
      nearest = std::min(nearest, std::fabs(mi_02 - eq.mutual_info));
    }
    check.expect(nearest <= 0.05,
                 "median MI at b=0.2 is " + std::to_string(nearest) +
                     " away from the closest equilibrium level");
    check.expect(mi_045 <= 0.05, describe(mi_045, 0.0, 0.05) + " at b=0.45");
  });

  criterion(7, "payoff brackets against the theoretical benchmarks",
            [&](Checker& check) {
    const SliceCell& high_bias = slice[2];
    std::vector<double> u_r, u_s;
    for (const RunRecord& rec : high_bias.records) {
      if (rec.converged) {
        u_r.push_back(rec.u_receiver);
        u_s.push_back(rec.u_sender);
      }
    }
    const double median_u_r = median_of(u_r);
    const double median_u_s = median_of(u_s);
    check.expect(std::fabs(median_u_r + 7.0 / 60.0) <= 0.01,
                 describe(median_u_r, -7.0 / 60.0, 0.01) + " at b=0.45");
    check.expect(std::fabs(median_u_s + 7.0 / 60.0 + 0.2025) <= 0.01,
                 describe(median_u_s, -7.0 / 60.0 - 0.2025, 0.01) +
                     " at b=0.45");
    for (const SliceCell& cell : slice) {
      const double median = cell.aggregate.u_receiver.median;
      const std::string at = " at b=" + std::to_string(cell.bias);
      check.expect(median >= cell.aggregate.babbling_u_receiver - 0.01,
                   "median U_R below the babbling level" + at);
      check.expect(median <= cell.aggregate.optimal_u_receiver + 0.01,
                   "median U_R above the optimal-equilibrium level" + at);
    }
  });

  criterion(8, "mutual information unit facts and relabeling invariance",
            [](Checker& check) {
    const GameSpec spec = baseline(0.0);
    Policy identity(6, 6), constant(6, 6), pair_blocks(6, 6);
    for (int t = 0; t < 6; ++t) {
      identity(t, t) = 1.0;
      constant(t, 2) = 1.0;
      pair_blocks(t, t / 2) = 1.0;
    }
    check.expect(std::fabs(normalized_mutual_information(identity, spec) -
                           1.0) <= 1e-12,
                 "MI(identity) != 1");
    check.expect(std::fabs(normalized_mutual_information(constant, spec)) <=
                     1e-12,
                 "MI(constant) != 0");
    check.expect(
        std::fabs(normalized_mutual_information(pair_blocks, spec) -
                  std::log(3.0) / std::log(6.0)) <= 1e-12,
        "MI(pair blocks) != log3/log6");

    Rng rng(505);
    Policy pi(6, 6);
    for (int t = 0; t < 6; ++t) {
      double sum = 0.0;
      for (int m = 0; m < 6; ++m) {
        pi(t, m) = 0.05 + rng.next_double();
        sum += pi(t, m);
      }
      for (int m = 0; m < 6; ++m) pi(t, m) /= sum;
    }
    const double reference = normalized_mutual_information(pi, spec);
    for (int repeat = 0; repeat < 100; ++repeat) {
      std::vector<int> perm(6);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = 5; i > 0; --i) {
        std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
      }
      Policy relabeled(6, 6);
      for (int t = 0; t < 6; ++t) {
        for (int m = 0; m < 6; ++m) relabeled(t, m) = pi(t, perm[m]);
      }
      check.expect(
          std::fabs(normalized_mutual_information(relabeled, spec) -
                    reference) <= 1e-12,
          "MI changed under a message permutation");
    }
  });

  criterion(9, "sweep command is bit-identical across executions",
            [](Checker& check) {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() /
        ("cheaptalk_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path config_path = dir / "config.json";
    {
      std::ofstream config(config_path);
      config << R"({"game": {"n_types": 3, "bias": 0.0},
                    "learner": {"lambda": 1e-3},
                    "sim": {"max_periods": 60000},
                    "sweep": {"bias_grid": [0.0, 0.2], "alpha_grid": [0.1],
                              "lambda_grid": [1e-3], "n_replications": 2,
                              "base_seed": 7, "store_policies": true}})";
    }
    auto run_cli = [&](const std::string& out_dir) {
      const std::string command = std::string("\"") + CHEAPTALK_CLI_PATH +
                                  "\" sweep --config \"" +
                                  config_path.string() + "\" --out \"" +
                                  out_dir + "\" >/dev/null 2>&1";
      return std::system(command.c_str());
    };
    auto slurp = [](const fs::path& path) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      return buffer.str();
    };
    const int rc1 = run_cli((dir / "first").string());
    const int rc2 = run_cli((dir / "second").string());
    check.expect(rc1 == 0 && rc2 == 0, "sweep command failed");
    const std::string runs1 = slurp(dir / "first" / "runs.jsonl");
    const std::string runs2 = slurp(dir / "second" / "runs.jsonl");
    check.expect(!runs1.empty() && runs1 == runs2,
                 "runs.jsonl differs between executions");
    check.expect(slurp(dir / "first" / "aggregates.csv") ==
                     slurp(dir / "second" / "aggregates.csv"),
                 "aggregates.csv differs between executions");
    fs::remove_all(dir);
  });

  criterion(10, "convergence detector matches the frozen-Q oracle",
            [](Checker& check) {
    const GameSpec spec = baseline(0.2);
    const BabblingBenchmark bb = babbling_benchmark(spec);
    const double lambda = 0.01;  // annealing fast enough to reset the streak
    LearnerConfig sender{0.0, lambda, 0.1, bb.sender_payoff, 0.0};
    LearnerConfig receiver{0.0, lambda, 0.1, bb.receiver_payoff, 0.0};
    SimConfig sim;
    sim.max_periods = 1'000'000;
    sim.window = 10'000;
    sim.rel_tol = 1e-3;
    sim.check_stride = 1;
    sim.seed = 424242;

    const SimResult result = run_simulation(spec, sender, receiver, sim);
    check.expect(result.converged, "frozen-Q run did not converge");
    check.expect(result.periods_elapsed > sim.window,
                 "the streak never reset: the oracle case is vacuous");

    // reconstruct the initial tables from the same seed, then predict the
    // stopping period from the temperature schedule alone
    Rng rng(sim.seed);
    const QTable q_sender0 = init_q_table(spec.n_types, spec.n_messages,
                                          sender.init_low, 0.0, rng);
    const QTable q_receiver0 = init_q_table(spec.n_messages, spec.n_actions,
                                            receiver.init_low, 0.0, rng);
    const std::int64_t predicted =
        detector_oracle(spec, q_sender0, q_receiver0, 0.1, lambda, sim);
    check.expect(
        std::llabs(predicted - result.periods_elapsed) <= sim.check_stride,
        "simulator stopped at " + std::to_string(result.periods_elapsed) +
            ", oracle predicts " + std::to_string(predicted));
  });

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
