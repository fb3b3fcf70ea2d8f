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
#include <vector>

#include "cheaptalk/matrix.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

// Hyperparameters of one tabular learner. The learner is game-agnostic:
// rewards are raw payoffs and the Q-initialisation interval is supplied by
// the caller (the simulation computes it from the babbling benchmark).
struct LearnerConfig {
  double alpha = 0.1;    // step size in [0, 1]; 0 freezes the table
  double lambda = 5e-6;  // temperature decay rate in [0, 1)
  double tau1 = 0.1;     // initial temperature
  double init_low = 0.0;
  double init_high = 0.0;
};

void validate(const LearnerConfig& config);

// Entries i.i.d. uniform on [low, high], filled row-major; deterministic
// given the rng state.
QTable init_q_table(int n_states, int n_actions, double low, double high,
                    Rng& rng);

// tau_t = tau1 * exp(-lambda * (t - 1)) for periods t >= 1.
double temperature(std::int64_t t, double tau1, double lambda);

// Below this temperature the softmax is evaluated as an argmax indicator;
// with lambda = 5e-6 the schedule reaches ~1e-23 by t = 1e7 and naive
// exponentiation degenerates.
inline constexpr double kSoftmaxSaturationTau = 1e-12;

// p_a = exp(q_a / tau) / sum_a' exp(q_a' / tau), computed with
// max-subtraction. Under saturation, mass is split uniformly over the
// argmax set so ties stay symmetric and seed-independent.
void softmax_row(std::span<const double> q_row, double tau,
                 std::span<double> out);
std::vector<double> softmax_row(std::span<const double> q_row, double tau);

// Inverse-CDF sampling over indices in ascending order; deterministic given
// the rng state. Rejects negative entries.
int sample(std::span<const double> probabilities, Rng& rng);

// Q(s,a) += alpha * (reward - Q(s,a)); every other entry is untouched.
// There is no bootstrapping term: actions have no effect on future states,
// so the discount is zero by construction.
void q_update(QTable& q, int state, int action, double reward, double alpha);

// Full softmax policy of a table at one temperature, row by row.
Policy softmax_policy(const QTable& q, double tau);
void softmax_policy_into(const QTable& q, double tau, Policy& out);

}  // namespace cheaptalk
