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

#include "cheaptalk/config.hpp"

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "cheaptalk/figures.hpp"
#include "cheaptalk/records.hpp"

namespace cheaptalk {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  TempDir() : path(fs::temp_directory_path() /
                   ("cheaptalk_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  fs::path path;
};

TEST_CASE("empty config yields the full baseline defaults") {
  const SweepConfig config = parse_config_text("{}");
  CHECK(config.game.n_types == 6);
  CHECK(config.game.n_messages == 6);
  CHECK(config.game.n_actions == 11);
  CHECK(config.game.prior == PriorKind::kUniform);
  CHECK(config.game.loss == LossKind::kQuadratic);
  CHECK(config.learner.alpha == 0.1);
  CHECK(config.learner.lambda == 5e-6);
  CHECK(config.learner.tau1 == 0.1);
  CHECK(config.sim.max_periods == 10'000'000);
  CHECK(config.sim.window == 10'000);
  CHECK(config.sim.rel_tol == 1e-3);
  CHECK(config.sim.check_stride == 1);
  CHECK(config.bias_grid.size() == 101);
  CHECK(config.alpha_grid ==
        std::vector<double>{0.025, 0.05, 0.1, 0.2, 0.4});
  CHECK(config.n_replications == 1000);
}

TEST_CASE("config keys override defaults") {
  const SweepConfig config = parse_config_text(R"({
    "game": {"n_types": 3, "bias": 0.25, "loss": "quartic",
             "prior": "increasing"},
    "learner": {"alpha": 0.2, "lambda": 1e-4},
    "sim": {"max_periods": 50000, "window": 2000, "seed": 9},
    "sweep": {"bias_grid": [0.0, 0.1], "alpha_grid": [0.2],
              "lambda_grid": [1e-4], "n_replications": 3, "base_seed": 5,
              "store_policies": true}
  })");
  CHECK(config.game.n_types == 3);
  CHECK(config.game.n_messages == 3);   // derived from n_types
  CHECK(config.game.n_actions == 5);    // 2n - 1
  CHECK(config.game.bias == 0.25);
  CHECK(config.game.loss == LossKind::kQuartic);
  CHECK(config.game.prior == PriorKind::kLinearIncreasing);
  CHECK(config.learner.alpha == 0.2);
  CHECK(config.sim.seed == 9);
  CHECK(config.bias_grid == std::vector<double>{0.0, 0.1});
  CHECK(config.n_replications == 3);
  CHECK(config.store_policies);
}

TEST_CASE("explicit message/action counts survive the n_types derivation") {
  const SweepConfig config = parse_config_text(
      R"({"game": {"n_types": 6, "n_messages": 3, "n_actions": 21}})");
  CHECK(config.game.n_messages == 3);
  CHECK(config.game.n_actions == 21);
}

TEST_CASE("config rejections carry context") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"games": {}})"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"game": {"n_types": 6, "bias_squared": 1}})"),
      doctest::Contains("bias_squared"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"game": {"bias": -0.5}})"),
                       doctest::Contains("bias"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"game": {"loss": "cubic"}})"),
                       doctest::Contains("cubic"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("{\n  \"game\": [1]\n}"),
                       doctest::Contains("must be an object"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("{ not json"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("/nonexistent/config.json"),
                  std::runtime_error);
}

TEST_CASE("parse errors report the line") {
  try {
    parse_config_text("{\n\"game\": {\n  \"bias\": -1\n}\n}", "conf.json");
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("conf.json") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips doubles exactly") {
  for (double value : {0.1, 1.0 / 3.0, 5e-6, -7.0 / 60.0, 0.0, 1e-300,
                       -0.4999999999999999}) {
    const std::string text = format_double(value);
    const double back = std::strtod(text.c_str(), nullptr);
    CHECK(std::memcmp(&back, &value, sizeof(double)) == 0);
  }
}

RunRecord sample_record(bool with_policies) {
  RunRecord rec;
  rec.seed = 0xdeadbeefcafe1234ULL;
  rec.game_fingerprint = 0x0123456789abcdefULL;
  rec.bias = 0.135;
  rec.alpha = 0.1;
  rec.lambda = 5e-6;
  rec.converged = true;
  rec.periods_elapsed = 734'210;
  rec.u_sender = -1.0 / 3.0;
  rec.u_receiver = -7.0 / 60.0;
  rec.mutual_info = 0.61314719276545859;
  rec.max_subopt_sender = 1e-17;
  rec.max_subopt_receiver = 0.05;
  rec.gain_sender = 0.0;
  rec.gain_receiver = 3.3e-7;
  rec.is_eps_nash = false;
  if (with_policies) {
    rec.has_policies = true;
    rec.policy_sender = Policy(2, 3);
    rec.policy_sender(0, 0) = 0.25;
    rec.policy_sender(0, 1) = 0.75;
    rec.policy_sender(1, 2) = 1.0;
    rec.policy_receiver = Policy(3, 2);
    rec.policy_receiver(0, 0) = 1.0 / 3.0;
    rec.policy_receiver(0, 1) = 2.0 / 3.0;
    rec.policy_receiver(1, 0) = 1.0;
    rec.policy_receiver(2, 1) = 1.0;
  }
  return rec;
}

TEST_CASE("run records round-trip through JSON lines losslessly") {
  TempDir tmp;
  const std::string path = tmp.file("records.jsonl");
  const std::vector<RunRecord> records{sample_record(true),
                                       sample_record(false)};
  write_records_jsonl(records, path);
  const std::vector<RunRecord> back = read_records_jsonl(path);
  REQUIRE(back.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(back[i].seed == records[i].seed);
    CHECK(back[i].game_fingerprint == records[i].game_fingerprint);
    CHECK(back[i].bias == records[i].bias);
    CHECK(back[i].alpha == records[i].alpha);
    CHECK(back[i].lambda == records[i].lambda);
    CHECK(back[i].converged == records[i].converged);
    CHECK(back[i].periods_elapsed == records[i].periods_elapsed);
    CHECK(back[i].u_sender == records[i].u_sender);
    CHECK(back[i].u_receiver == records[i].u_receiver);
    CHECK(back[i].mutual_info == records[i].mutual_info);
    CHECK(back[i].max_subopt_sender == records[i].max_subopt_sender);
    CHECK(back[i].max_subopt_receiver == records[i].max_subopt_receiver);
    CHECK(back[i].gain_sender == records[i].gain_sender);
    CHECK(back[i].gain_receiver == records[i].gain_receiver);
    CHECK(back[i].is_eps_nash == records[i].is_eps_nash);
    CHECK(back[i].has_policies == records[i].has_policies);
    CHECK(back[i].policy_sender == records[i].policy_sender);
    CHECK(back[i].policy_receiver == records[i].policy_receiver);
  }
}

TEST_CASE("large record files keep one line per record") {
  TempDir tmp;
  const std::string path = tmp.file("many.jsonl");
  std::vector<RunRecord> records(100'000, sample_record(false));
  write_records_jsonl(records, path);
  std::ifstream in(path);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 100'000);
}

AggregateRecord sample_aggregate(double bias) {
  GameConfig game;
  game.bias = bias;
  const GameSpec spec = build_game(game);
  std::vector<RunRecord> records(4);
  for (int i = 0; i < 4; ++i) {
    records[i].converged = true;
    records[i].is_eps_nash = i % 2 == 0;
    records[i].u_sender = -0.02 * (i + 1);
    records[i].u_receiver = -0.01 * (i + 1);
    records[i].mutual_info = 0.2 * i;
    records[i].gain_receiver = 1e-4 * i;
    records[i].has_policies = true;
    records[i].policy_sender = Policy(6, 6);
    records[i].policy_receiver = Policy(6, 11);
    for (int t = 0; t < 6; ++t) {
      records[i].policy_sender(t, t) = 1.0;
      records[i].policy_receiver(t, 2 * t) = 1.0;
    }
  }
  return aggregate(records, spec, 0.1, 5e-6);
}

TEST_CASE("aggregates round-trip through CSV") {
  TempDir tmp;
  const std::string path = tmp.file("aggregates.csv");
  const std::vector<AggregateRecord> aggregates{sample_aggregate(0.0),
                                                sample_aggregate(0.2)};
  write_aggregates_csv(aggregates, path);
  const std::vector<AggregateRecord> back = read_aggregates_csv(path);
  REQUIRE(back.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(back[i].bias == aggregates[i].bias);
    CHECK(back[i].n_runs == aggregates[i].n_runs);
    CHECK(back[i].n_converged == aggregates[i].n_converged);
    CHECK(back[i].eps_nash_freq == aggregates[i].eps_nash_freq);
    CHECK(back[i].u_receiver.median == aggregates[i].u_receiver.median);
    CHECK(back[i].u_receiver.hist == aggregates[i].u_receiver.hist);
    CHECK(back[i].mutual_info.q95 == aggregates[i].mutual_info.q95);
    CHECK(back[i].modal_sender_actions == aggregates[i].modal_sender_actions);
    CHECK(back[i].modal_sender_freqs == aggregates[i].modal_sender_freqs);
    CHECK(back[i].modal_sender_mi == aggregates[i].modal_sender_mi);
    CHECK(back[i].babbling_u_receiver == aggregates[i].babbling_u_receiver);
    CHECK(back[i].optimal_mi == aggregates[i].optimal_mi);
    CHECK(back[i].n_equilibria == aggregates[i].n_equilibria);
  }
}

TEST_CASE("zero aggregates still write the CSV header") {
  TempDir tmp;
  const std::string path = tmp.file("empty.csv");
  write_aggregates_csv({}, path);
  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header.rfind("bias,alpha,lambda,", 0) == 0);
  std::string rest;
  CHECK_FALSE(std::getline(in, rest));
}

TEST_CASE("every figure kind emits its data file and image") {
  TempDir tmp;
  const std::string agg_path = tmp.file("agg.csv");
  write_aggregates_csv({sample_aggregate(0.0), sample_aggregate(0.2)},
                       agg_path);
  for (const char* kind :
       {"deviation_vs_bias", "eps_nash_frequency_grid",
        "modal_policy_heatmap", "payoff_distribution", "mi_distribution",
        "equilibrium_ladder"}) {
    FigureSpec figure;
    figure.kind = figure_kind_from_name(kind);
    figure.aggregate_paths = {agg_path};
    figure.output_stem = tmp.file(kind);
    render_figure(figure);
    CHECK(fs::exists(tmp.file(std::string(kind) + ".csv")));
    CHECK(fs::exists(tmp.file(std::string(kind) + ".svg")));
    std::ifstream data(tmp.file(std::string(kind) + ".csv"));
    std::string header;
    REQUIRE(std::getline(data, header));
    CHECK(header == "series,x,y,w");
    std::string first_row;
    CHECK(std::getline(data, first_row));
  }
  CHECK_THROWS_AS(figure_kind_from_name("pie_chart"), std::invalid_argument);
}

TEST_CASE("figures refuse empty or deficient aggregates") {
  TempDir tmp;
  const std::string empty_path = tmp.file("empty.csv");
  write_aggregates_csv({}, empty_path);
  FigureSpec figure;
  figure.kind = FigureKind::kMiDistribution;
  figure.aggregate_paths = {empty_path};
  figure.output_stem = tmp.file("figure");
  CHECK_THROWS_AS(render_figure(figure), std::runtime_error);
  CHECK_FALSE(fs::exists(tmp.file("figure.csv")));
  CHECK_FALSE(fs::exists(tmp.file("figure.svg")));

  // a file lacking required columns is rejected up front
  const std::string bad_path = tmp.file("bad.csv");
  std::ofstream bad(bad_path);
  bad << "bias,alpha\n0.1,0.1\n";
  bad.close();
  figure.aggregate_paths = {bad_path};
  CHECK_THROWS_AS(render_figure(figure), std::runtime_error);
  CHECK_FALSE(fs::exists(tmp.file("figure.csv")));
}

TEST_CASE("analyze flow: stored metrics reproduce bit-for-bit") {
  // tiny sweep with stored policies, round-trip through disk, recompute
  SweepConfig config;
  config.game.n_types = 3;
  config.game.n_messages = 3;
  config.game.n_actions = 5;
  config.learner.lambda = 1e-3;
  config.sim.max_periods = 60'000;
  config.bias_grid = {0.1};
  config.alpha_grid = {0.1};
  config.lambda_grid = {1e-3};
  config.n_replications = 2;
  config.base_seed = 4;
  config.workers = 1;
  const SweepResult result = run_sweep(config);

  TempDir tmp;
  const std::string path = tmp.file("runs.jsonl");
  write_records_jsonl(result.records, path);
  const std::vector<RunRecord> back = read_records_jsonl(path);
  REQUIRE(back.size() == result.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    GameConfig game = config.game;
    game.bias = back[i].bias;
    const GameSpec spec = build_game(game);
    REQUIRE(back[i].has_policies);
    const Metrics metrics = nash_deviation_metrics(
        greedy_policy(back[i].policy_sender),
        greedy_policy(back[i].policy_receiver), spec);
    CHECK(metrics.u_sender == result.records[i].u_sender);
    CHECK(metrics.u_receiver == result.records[i].u_receiver);
    CHECK(metrics.mutual_info == result.records[i].mutual_info);
    CHECK(metrics.max_subopt_sender == result.records[i].max_subopt_sender);
    CHECK(metrics.max_subopt_receiver ==
          result.records[i].max_subopt_receiver);
    CHECK(metrics.gain_sender == result.records[i].gain_sender);
    CHECK(metrics.gain_receiver == result.records[i].gain_receiver);
  }
}

}  // namespace
}  // namespace cheaptalk
