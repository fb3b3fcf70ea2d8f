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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cheaptalk/config.hpp"
#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/figures.hpp"
#include "cheaptalk/records.hpp"
#include "cheaptalk/sweep.hpp"

namespace {

using namespace cheaptalk;

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
};

// --seed, --config and --out exist on every subcommand; commands that have
// no use for a seed accept and ignore it.
void add_common(CLI::App* cmd, CommonOpts* opts, const char* out_help) {
  cmd->add_option("--config", opts->config_path,
                  "JSON experiment config (defaults used when omitted)");
  cmd->add_option("--seed", opts->seed, "seed override");
  cmd->add_option("--out", opts->out, out_help);
}

SweepConfig load_config(const CommonOpts& opts) {
  return opts.config_path.empty() ? default_config()
                                  : parse_config(opts.config_path);
}

int resolve_workers(const CLI::Option* flag, int flag_value,
                    int config_value) {
  if (flag->count() > 0) return flag_value;
  if (const char* env = std::getenv("CHEAPTALK_WORKERS")) {
    return static_cast<int>(std::strtol(env, nullptr, 10));
  }
  return config_value;
}

RunRecord record_from(const SimResult& result, const Metrics& metrics,
                      const GameSpec& spec, const LearnerConfig& learner,
                      bool keep_policies) {
  RunRecord rec;
  rec.seed = result.seed;
  rec.game_fingerprint = game_fingerprint(spec);
  rec.bias = spec.bias;
  rec.alpha = learner.alpha;
  rec.lambda = learner.lambda;
  rec.converged = result.converged;
  rec.periods_elapsed = result.periods_elapsed;
  rec.u_sender = metrics.u_sender;
  rec.u_receiver = metrics.u_receiver;
  rec.mutual_info = metrics.mutual_info;
  rec.max_subopt_sender = metrics.max_subopt_sender;
  rec.max_subopt_receiver = metrics.max_subopt_receiver;
  rec.gain_sender = metrics.gain_sender;
  rec.gain_receiver = metrics.gain_receiver;
  rec.is_eps_nash = metrics.is_eps_nash;
  if (keep_policies) {
    rec.has_policies = true;
    rec.policy_sender = result.policy_sender;
    rec.policy_receiver = result.policy_receiver;
  }
  return rec;
}

int cmd_run(const CommonOpts& opts, std::optional<double> bias,
            bool store_policies) {
  SweepConfig config = load_config(opts);
  if (bias) config.game.bias = *bias;
  if (opts.seed) config.sim.seed = *opts.seed;

  const GameSpec spec = build_game(config.game);
  const BabblingBenchmark babbling = babbling_benchmark(spec);
  LearnerConfig sender = config.learner;
  sender.init_low = babbling.sender_payoff;
  sender.init_high = 0.0;
  LearnerConfig receiver = sender;
  receiver.init_low = babbling.receiver_payoff;

  const SimResult result = run_simulation(spec, sender, receiver, config.sim);
  // Implied play: metrics on the argmax projection, as in the sweep.
  const Metrics metrics =
      nash_deviation_metrics(greedy_policy(result.policy_sender),
                             greedy_policy(result.policy_receiver), spec);

  std::cout << "game: n=" << spec.n_types << " bias=" << spec.bias
            << " prior=" << prior_kind_name(spec.prior_kind)
            << " loss=" << loss_kind_name(spec.loss) << " seed=" << result.seed
            << "\n"
            << (result.converged ? "converged" : "did NOT converge")
            << " after " << result.periods_elapsed
            << " periods (final temperature " << result.final_temperature
            << ")\n"
            << "U_S=" << metrics.u_sender << " U_R=" << metrics.u_receiver
            << " MI=" << metrics.mutual_info << "\n"
            << "max suboptimal mass: sender=" << metrics.max_subopt_sender
            << " receiver=" << metrics.max_subopt_receiver
            << "  gains: sender=" << metrics.gain_sender
            << " receiver=" << metrics.gain_receiver
            << "  eps-Nash: " << (metrics.is_eps_nash ? "yes" : "no") << "\n"
            << "benchmarks: babbling U_R=" << babbling.receiver_payoff
            << " U_S=" << babbling.sender_payoff << "\n";

  if (!opts.out.empty()) {
    write_records_jsonl(
        {record_from(result, metrics, spec, sender, store_policies)},
        opts.out);
    std::cout << "wrote 1 record to " << opts.out << "\n";
  }
  return 0;
}

void write_manifest(const SweepConfig& config, const SweepResult& result,
                    const std::string& path) {
  nlohmann::ordered_json manifest;
  manifest["game"] = {{"n_types", config.game.n_types},
                      {"n_messages", config.game.n_messages},
                      {"n_actions", config.game.n_actions},
                      {"prior", prior_kind_name(config.game.prior)},
                      {"loss", loss_kind_name(config.game.loss)}};
  manifest["learner"] = {{"tau1", config.learner.tau1}};
  manifest["sim"] = {{"max_periods", config.sim.max_periods},
                     {"window", config.sim.window},
                     {"rel_tol", config.sim.rel_tol},
                     {"check_stride", config.sim.check_stride}};
  manifest["grid"] = {{"bias_grid", config.bias_grid},
                      {"alpha_grid", config.alpha_grid},
                      {"lambda_grid", config.lambda_grid},
                      {"n_replications", config.n_replications},
                      {"base_seed", config.base_seed}};
  manifest["notes"] = {
      {"prior_convention",
       "linear priors put mass proportional to k (slope-1 integer weights)"},
      {"convergence_reference",
       "deviation measured against the immediately preceding policy "
       "snapshot"}};
  manifest["n_records"] = result.records.size();
  manifest["missing_runs"] = result.missing;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << manifest.dump(2) << "\n";
}

int cmd_sweep(const CommonOpts& opts, const CLI::Option* workers_flag,
              int workers, bool store_policies) {
  SweepConfig config = load_config(opts);
  if (opts.seed) config.base_seed = *opts.seed;
  config.workers = resolve_workers(workers_flag, workers, config.workers);
  if (store_policies) config.store_policies = true;
  if (opts.out.empty()) {
    throw std::runtime_error("sweep: --out <directory> is required");
  }

  SweepResult result = run_sweep(config);

  std::filesystem::create_directories(opts.out);
  const std::filesystem::path dir(opts.out);
  std::vector<RunRecord> to_store = result.records;
  if (!config.store_policies) {
    for (RunRecord& rec : to_store) {
      rec.has_policies = false;
      rec.policy_sender = Policy();
      rec.policy_receiver = Policy();
    }
  }
  write_records_jsonl(to_store, (dir / "runs.jsonl").string());
  write_aggregates_csv(result.aggregates, (dir / "aggregates.csv").string());
  write_manifest(config, result, (dir / "manifest.json").string());

  std::cout << "wrote " << result.records.size() << " records and "
            << result.aggregates.size() << " aggregate rows to " << opts.out
            << "\n";
  if (!result.missing.empty()) {
    std::cerr << result.missing.size()
              << " runs failed; see manifest.json\n";
    return 1;
  }
  return 0;
}

int cmd_enumerate(const CommonOpts& opts) {
  const SweepConfig config = load_config(opts);
  if (opts.out.empty()) {
    throw std::runtime_error("enumerate: --out <csv> is required");
  }
  std::ofstream out(opts.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + opts.out);
  out << "bias,partition,block_actions,u_sender,u_receiver,mutual_info\n";
  std::size_t total = 0;
  std::size_t infeasible = 0;
  for (double bias : config.bias_grid) {
    GameConfig game = config.game;
    game.bias = bias;
    const GameSpec spec = build_game(game);
    for (const PartitionalEquilibrium& eq : enumerate_equilibria(spec)) {
      out << format_double(bias) << ',';
      std::string boundaries, actions;
      for (std::size_t i = 0; i < eq.partition.blocks.size(); ++i) {
        if (i > 0) {
          boundaries += ';';
          actions += ';';
        }
        boundaries += std::to_string(eq.partition.blocks[i].begin);
        actions += format_double(spec.actions[eq.block_actions[i]]);
      }
      out << boundaries << ',' << actions << ','
          << format_double(eq.u_sender) << ',' << format_double(eq.u_receiver)
          << ',' << format_double(eq.mutual_info) << '\n';
      ++total;
    }
    for (const Partition& partition : enumerate_partitions(spec.n_types)) {
      infeasible += static_cast<int>(partition.blocks.size()) >
                    spec.n_messages;
    }
  }
  if (!out) throw std::runtime_error("write failed: " + opts.out);
  std::cout << "wrote " << total << " equilibria across "
            << config.bias_grid.size() << " biases to " << opts.out << "\n";
  if (infeasible > 0) {
    std::cerr << infeasible
              << " partitions were infeasible (more blocks than messages)\n";
  }
  return 0;
}

int cmd_analyze(const CommonOpts& opts, const std::string& in_path) {
  const SweepConfig config = load_config(opts);
  if (opts.out.empty()) {
    throw std::runtime_error("analyze: --out <jsonl> is required");
  }
  std::vector<RunRecord> records = read_records_jsonl(in_path);
  for (RunRecord& rec : records) {
    if (!rec.has_policies) {
      throw std::runtime_error(
          "analyze: record has no stored policies (re-run with "
          "--store-policies)");
    }
    GameConfig game = config.game;
    game.bias = rec.bias;
    const GameSpec spec = build_game(game);
    if (game_fingerprint(spec) != rec.game_fingerprint) {
      throw std::runtime_error(
          "analyze: record fingerprint does not match the configured game; "
          "pass the config the records were produced with");
    }
    const Metrics metrics = nash_deviation_metrics(
        greedy_policy(rec.policy_sender), greedy_policy(rec.policy_receiver),
        spec);
    rec.u_sender = metrics.u_sender;
    rec.u_receiver = metrics.u_receiver;
    rec.mutual_info = metrics.mutual_info;
    rec.max_subopt_sender = metrics.max_subopt_sender;
    rec.max_subopt_receiver = metrics.max_subopt_receiver;
    rec.gain_sender = metrics.gain_sender;
    rec.gain_receiver = metrics.gain_receiver;
    rec.is_eps_nash = metrics.is_eps_nash;
  }
  write_records_jsonl(records, opts.out);
  std::cout << "recomputed metrics for " << records.size() << " records -> "
            << opts.out << "\n";
  return 0;
}

int cmd_plot(const CommonOpts& opts, const std::string& kind,
             const std::vector<std::string>& inputs) {
  const SweepConfig config = load_config(opts);
  if (opts.out.empty()) {
    throw std::runtime_error("plot: --out <stem> is required");
  }
  FigureSpec figure;
  figure.kind = figure_kind_from_name(kind);
  figure.aggregate_paths = inputs;
  figure.output_stem = opts.out;
  figure.game = config.game;
  render_figure(figure);
  std::cout << "wrote " << opts.out << ".csv and " << opts.out << ".svg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Batch simulator and analysis toolkit for two tabular reinforcement "
      "learners playing a discretised cheap-talk game, with an exact "
      "partitional-equilibrium benchmark."};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, enum_opts, analyze_opts, plot_opts;

  auto* run = app.add_subcommand("run", "one simulation run");
  add_common(run, &run_opts, "write the run record (JSON lines)");
  std::optional<double> run_bias;
  bool run_store_policies = false;
  run->add_option("--bias", run_bias, "bias override");
  run->add_flag("--store-policies", run_store_policies,
                "include the converged policies in the record");

  auto* sweep = app.add_subcommand(
      "sweep", "replicated runs over bias and hyperparameter grids");
  add_common(sweep, &sweep_opts,
             "output directory (runs.jsonl, aggregates.csv, manifest.json)");
  int sweep_workers = 0;
  bool sweep_store_policies = false;
  auto* workers_flag = sweep->add_option(
      "--workers", sweep_workers,
      "worker threads (overrides CHEAPTALK_WORKERS; 0 = all cores)");
  sweep->add_flag("--store-policies", sweep_store_policies,
                  "include converged policies in runs.jsonl");

  auto* enumerate = app.add_subcommand(
      "enumerate", "exact partitional equilibria over the bias grid");
  add_common(enumerate, &enum_opts, "output CSV path");

  auto* analyze = app.add_subcommand(
      "analyze", "recompute metrics from stored policies");
  add_common(analyze, &analyze_opts, "output JSON-lines path");
  std::string analyze_in;
  analyze->add_option("--in", analyze_in, "stored run records (JSON lines)")
      ->required();

  auto* plot =
      app.add_subcommand("plot", "figure data (tidy CSV) plus an SVG view");
  add_common(plot, &plot_opts, "output stem (<stem>.csv, <stem>.svg)");
  std::string plot_kind;
  std::vector<std::string> plot_inputs;
  plot->add_option("--kind", plot_kind,
                   "deviation_vs_bias | eps_nash_frequency_grid | "
                   "modal_policy_heatmap | payoff_distribution | "
                   "mi_distribution | equilibrium_ladder")
      ->required();
  plot->add_option("--in", plot_inputs, "aggregate CSV inputs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, run_bias, run_store_policies);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_opts, workers_flag, sweep_workers,
                       sweep_store_policies);
    }
    if (enumerate->parsed()) return cmd_enumerate(enum_opts);
    if (analyze->parsed()) return cmd_analyze(analyze_opts, analyze_in);
    if (plot->parsed()) return cmd_plot(plot_opts, plot_kind, plot_inputs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
