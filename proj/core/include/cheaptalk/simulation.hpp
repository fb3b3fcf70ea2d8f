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

#include "cheaptalk/game.hpp"
#include "cheaptalk/learner.hpp"
#include "cheaptalk/matrix.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

struct SimConfig {
  std::int64_t max_periods = 10'000'000;
  std::int64_t window = 10'000;  // consecutive passing checks required
  double rel_tol = 1e-3;         // relative policy deviation threshold
  std::int64_t check_stride = 1; // periods between convergence checks
  std::uint64_t seed = 0;
};

void validate(const SimConfig& config);

struct StepParams {
  double alpha_sender = 0.1;
  double alpha_receiver = 0.1;
  double tau_sender = 0.1;
  double tau_receiver = 0.1;
};

struct StepOutcome {
  int type = 0;
  int message = 0;
  int action = 0;
  double sender_reward = 0.0;
  double receiver_reward = 0.0;
};

// One period of play: draw a type from the prior, the sender samples a
// message from its softmax row, the receiver samples an action from its
// softmax row, both tables are updated with the realised payoffs. The rng
// stream is consumed in exactly this order (type, message, action).
StepOutcome step(const GameSpec& game, QTable& q_sender, QTable& q_receiver,
                 const StepParams& params, Rng& rng);

// Relative entrywise-L2 distance ||current - previous|| / ||previous||.
// A row-stochastic matrix has positive norm, so the ratio is always defined.
double policy_deviation(const Policy& current, const Policy& previous);

struct SimResult {
  QTable q_sender;
  QTable q_receiver;
  Policy policy_sender;    // softmax policies at the final period's
  Policy policy_receiver;  // temperature
  bool converged = false;
  std::int64_t periods_elapsed = 0;
  double final_temperature = 0.0;
  std::uint64_t seed = 0;
};

// Repeated one-shot play until the convergence criterion is met or
// max_periods is reached. Every check_stride periods the full softmax
// policies of both agents are compared against the previous snapshot (the
// first snapshot is the initial policy at tau1); convergence is declared
// once both deviations stay below rel_tol for `window` consecutive checks.
//
// The rng stream is consumed in a fixed order: sender Q-init (row-major),
// receiver Q-init, then per period (type, message, action), so replays are
// exact given (spec, configs, seed).
SimResult run_simulation(const GameSpec& spec, const LearnerConfig& sender,
                         const LearnerConfig& receiver, const SimConfig& sim);

// Same, but starting from explicit initial tables instead of drawing them.
// Rejects tables whose dimensions do not match the game.
SimResult run_simulation(const GameSpec& spec, const LearnerConfig& sender,
                         const LearnerConfig& receiver, const SimConfig& sim,
                         QTable q_sender0, QTable q_receiver0);

}  // namespace cheaptalk
