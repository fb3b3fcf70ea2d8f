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

#include "cheaptalk/learner.hpp"

#include <cmath>
#include <stdexcept>

namespace cheaptalk {

void validate(const LearnerConfig& config) {
  // alpha = 0 is admitted on purpose: a frozen table isolates the
  // temperature schedule, which the convergence detector tests rely on.
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
    throw std::invalid_argument("learner: alpha must be in [0, 1]");
  }
  if (!(config.lambda >= 0.0 && config.lambda < 1.0)) {
    throw std::invalid_argument("learner: lambda must be in [0, 1)");
  }
  if (!(config.tau1 > 0.0)) {
    throw std::invalid_argument("learner: tau1 must be positive");
  }
  if (config.init_low > config.init_high) {
    throw std::invalid_argument("learner: init_low must be <= init_high");
  }
}

QTable init_q_table(int n_states, int n_actions, double low, double high,
                    Rng& rng) {
  if (n_states < 1 || n_actions < 1) {
    throw std::invalid_argument("q table dimensions must be positive");
  }
  if (low > high) {
    throw std::invalid_argument("q init: low must be <= high");
  }
  QTable q(n_states, n_actions);
  const double width = high - low;
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      q(s, a) = low + width * rng.next_double();
    }
  }
  return q;
}

double temperature(std::int64_t t, double tau1, double lambda) {
  if (t < 1) throw std::invalid_argument("temperature: period index starts at 1");
  return tau1 * std::exp(-lambda * static_cast<double>(t - 1));
}

void softmax_row(std::span<const double> q_row, double tau,
                 std::span<double> out) {
  const std::size_t n = q_row.size();
  double max = q_row[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (q_row[i] > max) max = q_row[i];
  }
  if (tau < kSoftmaxSaturationTau) {
    int ties = 0;
    for (std::size_t i = 0; i < n; ++i) ties += q_row[i] == max;
    const double share = 1.0 / ties;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = q_row[i] == max ? share : 0.0;
    }
    return;
  }
  // Max-subtraction keeps the largest exponent at exactly 0; if every other
  // exponent underflows the result degrades to the same argmax split.
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp((q_row[i] - max) / tau);
    out[i] = e;
    sum += e;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
}

std::vector<double> softmax_row(std::span<const double> q_row, double tau) {
  std::vector<double> out(q_row.size());
  softmax_row(q_row, tau, out);
  return out;
}

int sample(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.next_double();
  double cumulative = 0.0;
  const int n = static_cast<int>(probabilities.size());
  for (int i = 0; i < n; ++i) {
    const double p = probabilities[i];
    if (p < 0.0) {
      throw std::invalid_argument("sample: negative probability entry");
    }
    cumulative += p;
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum a hair under u; take the last entry
  // that carries mass.
  for (int i = n - 1; i >= 0; --i) {
    if (probabilities[i] > 0.0) return i;
  }
  return n - 1;
}

void q_update(QTable& q, int state, int action, double reward, double alpha) {
  if (state < 0 || state >= q.rows() || action < 0 || action >= q.cols()) {
    throw std::out_of_range("q_update: state/action index out of range");
  }
  double& cell = q(state, action);
  cell += alpha * (reward - cell);
}

Policy softmax_policy(const QTable& q, double tau) {
  Policy out(q.rows(), q.cols());
  softmax_policy_into(q, tau, out);
  return out;
}

void softmax_policy_into(const QTable& q, double tau, Policy& out) {
  if (!out.same_shape(q)) out = Policy(q.rows(), q.cols());
  for (int s = 0; s < q.rows(); ++s) {
    softmax_row(q.row(s), tau, out.row(s));
  }
}

}  // namespace cheaptalk
