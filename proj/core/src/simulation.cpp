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

#include "cheaptalk/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cheaptalk {
namespace {

StepOutcome step_impl(const GameSpec& game, QTable& q_sender,
                      QTable& q_receiver, const StepParams& params, Rng& rng,
                      std::span<double> scratch) {
  StepOutcome out;
  out.type = sample(game.prior, rng);

  auto message_probs = scratch.first(game.n_messages);
  softmax_row(q_sender.row(out.type), params.tau_sender, message_probs);
  out.message = sample(message_probs, rng);

  auto action_probs = scratch.first(game.n_actions);
  softmax_row(q_receiver.row(out.message), params.tau_receiver, action_probs);
  out.action = sample(action_probs, rng);

  const double theta = game.types[out.type];
  const double action = game.actions[out.action];
  out.sender_reward = utility(Role::kSender, theta, action, game);
  out.receiver_reward = utility(Role::kReceiver, theta, action, game);

  q_update(q_sender, out.type, out.message, out.sender_reward,
           params.alpha_sender);
  q_update(q_receiver, out.message, out.action, out.receiver_reward,
           params.alpha_receiver);
  return out;
}

void check_dimensions(const GameSpec& spec, const QTable& q_sender,
                      const QTable& q_receiver) {
  if (q_sender.rows() != spec.n_types ||
      q_sender.cols() != spec.n_messages ||
      q_receiver.rows() != spec.n_messages ||
      q_receiver.cols() != spec.n_actions) {
    throw std::invalid_argument(
        "run_simulation: learner dimensions do not match the game "
        "(sender must be n_types x n_messages, receiver n_messages x "
        "n_actions)");
  }
}

SimResult run_loop(const GameSpec& spec, const LearnerConfig& sender,
                   const LearnerConfig& receiver, const SimConfig& sim,
                   QTable q_sender, QTable q_receiver, Rng rng) {
  SimResult result;
  result.seed = sim.seed;

  std::vector<double> scratch(
      static_cast<std::size_t>(std::max(spec.n_messages, spec.n_actions)));

  // Previous snapshots start at the initial policies, so the very first
  // check already measures a real deviation.
  Policy pol_s_prev = softmax_policy(q_sender, sender.tau1);
  Policy pol_r_prev = softmax_policy(q_receiver, receiver.tau1);
  Policy pol_s_cur(spec.n_types, spec.n_messages);
  Policy pol_r_cur(spec.n_messages, spec.n_actions);

  std::int64_t streak = 0;
  std::int64_t final_period = sim.max_periods;
  StepParams params;
  params.alpha_sender = sender.alpha;
  params.alpha_receiver = receiver.alpha;
  for (std::int64_t t = 1; t <= sim.max_periods; ++t) {
    params.tau_sender = temperature(t, sender.tau1, sender.lambda);
    params.tau_receiver = temperature(t, receiver.tau1, receiver.lambda);
    step_impl(spec, q_sender, q_receiver, params, rng, scratch);

    if (t % sim.check_stride == 0) {
      softmax_policy_into(q_sender, params.tau_sender, pol_s_cur);
      softmax_policy_into(q_receiver, params.tau_receiver, pol_r_cur);
      const double dev_s = policy_deviation(pol_s_cur, pol_s_prev);
      const double dev_r = policy_deviation(pol_r_cur, pol_r_prev);
      streak = (dev_s < sim.rel_tol && dev_r < sim.rel_tol) ? streak + 1 : 0;
      std::swap(pol_s_cur, pol_s_prev);
      std::swap(pol_r_cur, pol_r_prev);
      if (streak >= sim.window) {
        result.converged = true;
        final_period = t;
        break;
      }
    }
  }

  result.periods_elapsed = final_period;
  // Implied policies at the final period's temperature. Agents share the
  // schedule in every studied configuration; the recorded temperature is
  // the sender's.
  const double tau_s = temperature(final_period, sender.tau1, sender.lambda);
  const double tau_r =
      temperature(final_period, receiver.tau1, receiver.lambda);
  result.final_temperature = tau_s;
  result.policy_sender = softmax_policy(q_sender, tau_s);
  result.policy_receiver = softmax_policy(q_receiver, tau_r);
  result.q_sender = std::move(q_sender);
  result.q_receiver = std::move(q_receiver);
  return result;
}

}  // namespace

void validate(const SimConfig& config) {
  if (config.window < 1) {
    throw std::invalid_argument("sim: window must be >= 1");
  }
  if (!(config.rel_tol > 0.0)) {
    throw std::invalid_argument("sim: rel_tol must be positive");
  }
  if (config.check_stride < 1) {
    throw std::invalid_argument("sim: check_stride must be >= 1");
  }
  if (config.max_periods < config.window) {
    throw std::invalid_argument("sim: max_periods must be >= window");
  }
}

StepOutcome step(const GameSpec& game, QTable& q_sender, QTable& q_receiver,
                 const StepParams& params, Rng& rng) {
  check_dimensions(game, q_sender, q_receiver);
  std::vector<double> scratch(
      static_cast<std::size_t>(std::max(game.n_messages, game.n_actions)));
  return step_impl(game, q_sender, q_receiver, params, rng, scratch);
}

double policy_deviation(const Policy& current, const Policy& previous) {
  if (!current.same_shape(previous)) {
    throw std::invalid_argument("policy_deviation: shape mismatch");
  }
  double diff_sq = 0.0;
  double base_sq = 0.0;
  const auto cur = current.flat();
  const auto prev = previous.flat();
  for (std::size_t i = 0; i < cur.size(); ++i) {
    const double d = cur[i] - prev[i];
    diff_sq += d * d;
    base_sq += prev[i] * prev[i];
  }
  return std::sqrt(diff_sq) / std::sqrt(base_sq);
}

SimResult run_simulation(const GameSpec& spec, const LearnerConfig& sender,
                         const LearnerConfig& receiver,
                         const SimConfig& sim) {
  validate(sender);
  validate(receiver);
  validate(sim);
  Rng rng(sim.seed);
  QTable q_sender = init_q_table(spec.n_types, spec.n_messages,
                                 sender.init_low, sender.init_high, rng);
  QTable q_receiver = init_q_table(spec.n_messages, spec.n_actions,
                                   receiver.init_low, receiver.init_high, rng);
  return run_loop(spec, sender, receiver, sim, std::move(q_sender),
                  std::move(q_receiver), rng);
}

SimResult run_simulation(const GameSpec& spec, const LearnerConfig& sender,
                         const LearnerConfig& receiver, const SimConfig& sim,
                         QTable q_sender0, QTable q_receiver0) {
  check_dimensions(spec, q_sender0, q_receiver0);
  validate(sender);
  validate(receiver);
  validate(sim);
  return run_loop(spec, sender, receiver, sim, std::move(q_sender0),
                  std::move(q_receiver0), Rng(sim.seed));
}

}  // namespace cheaptalk
