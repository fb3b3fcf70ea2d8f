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

#include "cheaptalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cheaptalk {
namespace {

void check_pair_shapes(const Policy& pi_sender, const Policy& pi_receiver,
                       const GameSpec& spec) {
  if (pi_sender.rows() != spec.n_types ||
      pi_sender.cols() != spec.n_messages ||
      pi_receiver.rows() != spec.n_messages ||
      pi_receiver.cols() != spec.n_actions) {
    throw std::invalid_argument("policy shapes do not match the game");
  }
}

}  // namespace

std::pair<double, double> expected_payoffs(const Policy& pi_sender,
                                           const Policy& pi_receiver,
                                           const GameSpec& spec) {
  check_pair_shapes(pi_sender, pi_receiver, spec);
  double u_s = 0.0;
  double u_r = 0.0;
  for (int t = 0; t < spec.n_types; ++t) {
    const double theta = spec.types[t];
    const double p = spec.prior[t];
    for (int m = 0; m < spec.n_messages; ++m) {
      const double ps = pi_sender(t, m);
      if (ps == 0.0) continue;
      for (int a = 0; a < spec.n_actions; ++a) {
        const double pr = pi_receiver(m, a);
        if (pr == 0.0) continue;
        const double w = p * ps * pr;
        u_s += w * utility(Role::kSender, theta, spec.actions[a], spec);
        u_r += w * utility(Role::kReceiver, theta, spec.actions[a], spec);
      }
    }
  }
  return {u_s, u_r};
}

double normalized_mutual_information(const Policy& pi_sender,
                                     const GameSpec& spec) {
  if (pi_sender.rows() != spec.n_types ||
      pi_sender.cols() != spec.n_messages) {
    throw std::invalid_argument("sender policy shape does not match the game");
  }
  double entropy = 0.0;
  for (double p : spec.prior) {
    if (p > 0.0) entropy += p * std::log(1.0 / p);
  }
  if (!(entropy > 0.0)) {
    throw std::domain_error(
        "mutual information is undefined under a zero-entropy prior");
  }
  std::vector<double> marginal(spec.n_messages, 0.0);
  for (int m = 0; m < spec.n_messages; ++m) {
    for (int t = 0; t < spec.n_types; ++t) {
      marginal[m] += pi_sender(t, m) * spec.prior[t];
    }
  }
  double info = 0.0;
  for (int t = 0; t < spec.n_types; ++t) {
    const double p = spec.prior[t];
    for (int m = 0; m < spec.n_messages; ++m) {
      const double ps = pi_sender(t, m);
      if (ps == 0.0) continue;  // 0 log 0 = 0
      info += ps * p * std::log(ps / marginal[m]);
    }
  }
  return info / entropy;
}

ReceiverBestResponses receiver_best_responses(const Policy& pi_sender,
                                              const GameSpec& spec) {
  if (pi_sender.rows() != spec.n_types ||
      pi_sender.cols() != spec.n_messages) {
    throw std::invalid_argument("sender policy shape does not match the game");
  }
  ReceiverBestResponses out;
  out.on_path.assign(spec.n_messages, false);
  out.marginal.assign(spec.n_messages, 0.0);
  out.posterior = Matrix(spec.n_messages, spec.n_types);
  out.optimal.resize(spec.n_messages);
  out.best_value.assign(spec.n_messages, 0.0);

  for (int m = 0; m < spec.n_messages; ++m) {
    for (int t = 0; t < spec.n_types; ++t) {
      out.marginal[m] += pi_sender(t, m) * spec.prior[t];
    }
    if (out.marginal[m] > 0.0) {
      out.on_path[m] = true;
      for (int t = 0; t < spec.n_types; ++t) {
        out.posterior(m, t) = pi_sender(t, m) * spec.prior[t] / out.marginal[m];
      }
      double best = -std::numeric_limits<double>::infinity();
      std::vector<double> values(spec.n_actions);
      for (int a = 0; a < spec.n_actions; ++a) {
        double eu = 0.0;
        for (int t = 0; t < spec.n_types; ++t) {
          eu += out.posterior(m, t) *
                utility(Role::kReceiver, spec.types[t], spec.actions[a], spec);
        }
        values[a] = eu;
        if (eu > best) best = eu;
      }
      out.best_value[m] = best;
      for (int a = 0; a < spec.n_actions; ++a) {
        if (values[a] >= best - kBestResponseTol) out.optimal[m].push_back(a);
      }
    } else {
      // never sent: any response is trivially optimal
      out.optimal[m].resize(spec.n_actions);
      std::iota(out.optimal[m].begin(), out.optimal[m].end(), 0);
    }
  }
  return out;
}

SenderBestResponses sender_best_responses(const Policy& pi_receiver,
                                          const GameSpec& spec) {
  if (pi_receiver.rows() != spec.n_messages ||
      pi_receiver.cols() != spec.n_actions) {
    throw std::invalid_argument(
        "receiver policy shape does not match the game");
  }
  SenderBestResponses out;
  out.message_values = Matrix(spec.n_types, spec.n_messages);
  out.optimal.resize(spec.n_types);
  out.best_value.assign(spec.n_types, 0.0);
  for (int t = 0; t < spec.n_types; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < spec.n_messages; ++m) {
      double eu = 0.0;
      for (int a = 0; a < spec.n_actions; ++a) {
        const double pr = pi_receiver(m, a);
        if (pr == 0.0) continue;
        eu += pr * utility(Role::kSender, spec.types[t], spec.actions[a], spec);
      }
      out.message_values(t, m) = eu;
      if (eu > best) best = eu;
    }
    out.best_value[t] = best;
    for (int m = 0; m < spec.n_messages; ++m) {
      if (out.message_values(t, m) >= best - kBestResponseTol) {
        out.optimal[t].push_back(m);
      }
    }
  }
  return out;
}

Metrics nash_deviation_metrics(const Policy& pi_sender,
                               const Policy& pi_receiver,
                               const GameSpec& spec) {
  check_pair_shapes(pi_sender, pi_receiver, spec);
  Metrics metrics;
  const auto [u_s, u_r] = expected_payoffs(pi_sender, pi_receiver, spec);
  metrics.u_sender = u_s;
  metrics.u_receiver = u_r;
  metrics.mutual_info = normalized_mutual_information(pi_sender, spec);

  const SenderBestResponses sbr = sender_best_responses(pi_receiver, spec);
  const ReceiverBestResponses rbr = receiver_best_responses(pi_sender, spec);

  double max_subopt_s = 0.0;
  double best_response_value_s = 0.0;
  for (int t = 0; t < spec.n_types; ++t) {
    double mass = 0.0;
    for (int m : sbr.optimal[t]) mass += pi_sender(t, m);
    max_subopt_s = std::max(max_subopt_s, 1.0 - mass);
    best_response_value_s += spec.prior[t] * sbr.best_value[t];
  }

  // Off-path messages are excluded: they are never reached, so no play
  // disciplines the response there and no mass is ever at stake.
  double max_subopt_r = 0.0;
  double best_response_value_r = 0.0;
  for (int m = 0; m < spec.n_messages; ++m) {
    if (!rbr.on_path[m]) continue;
    double mass = 0.0;
    for (int a : rbr.optimal[m]) mass += pi_receiver(m, a);
    max_subopt_r = std::max(max_subopt_r, 1.0 - mass);
    best_response_value_r += rbr.marginal[m] * rbr.best_value[m];
  }

  metrics.max_subopt_sender = max_subopt_s;
  metrics.max_subopt_receiver = max_subopt_r;
  metrics.gain_sender = best_response_value_s - u_s;
  metrics.gain_receiver = best_response_value_r - u_r;
  metrics.is_eps_nash = max_subopt_s <= kEpsNashThreshold &&
                        max_subopt_r <= kEpsNashThreshold;
  return metrics;
}

CanonicalizedPolicies canonicalize_messages(const Policy& pi_sender,
                                            const Policy& pi_receiver,
                                            const GameSpec& spec) {
  check_pair_shapes(pi_sender, pi_receiver, spec);
  const ReceiverBestResponses rbr = receiver_best_responses(pi_sender, spec);

  std::vector<double> mean_type(spec.n_messages, 0.0);
  for (int m = 0; m < spec.n_messages; ++m) {
    for (int t = 0; t < spec.n_types; ++t) {
      mean_type[m] += rbr.posterior(m, t) * spec.types[t];
    }
  }
  CanonicalizedPolicies out;
  out.permutation.resize(spec.n_messages);
  std::iota(out.permutation.begin(), out.permutation.end(), 0);
  std::stable_sort(out.permutation.begin(), out.permutation.end(),
                   [&](int lhs, int rhs) {
                     if (rbr.on_path[lhs] != rbr.on_path[rhs]) {
                       return rbr.on_path[lhs];  // off-path last
                     }
                     if (!rbr.on_path[lhs]) return false;  // keep file order
                     return mean_type[lhs] < mean_type[rhs];
                   });

  out.sender = Policy(spec.n_types, spec.n_messages);
  out.receiver = Policy(spec.n_messages, spec.n_actions);
  for (int m = 0; m < spec.n_messages; ++m) {
    const int original = out.permutation[m];
    for (int t = 0; t < spec.n_types; ++t) {
      out.sender(t, m) = pi_sender(t, original);
    }
    for (int a = 0; a < spec.n_actions; ++a) {
      out.receiver(m, a) = pi_receiver(original, a);
    }
  }
  return out;
}

Policy greedy_policy(const Policy& pi) {
  Policy out(pi.rows(), pi.cols());
  for (int s = 0; s < pi.rows(); ++s) {
    double max = pi(s, 0);
    for (int a = 1; a < pi.cols(); ++a) max = std::max(max, pi(s, a));
    int ties = 0;
    for (int a = 0; a < pi.cols(); ++a) ties += pi(s, a) == max;
    const double share = 1.0 / ties;
    for (int a = 0; a < pi.cols(); ++a) {
      out(s, a) = pi(s, a) == max ? share : 0.0;
    }
  }
  return out;
}

ModalPolicy modal_policy(const std::vector<Policy>& policies) {
  if (policies.empty()) {
    throw std::invalid_argument("modal_policy: empty policy list");
  }
  const int n_states = policies.front().rows();
  const int n_actions = policies.front().cols();
  for (const Policy& p : policies) {
    if (p.rows() != n_states || p.cols() != n_actions) {
      throw std::invalid_argument("modal_policy: mixed policy shapes");
    }
  }
  ModalPolicy out;
  out.policy = Policy(n_states, n_actions);
  out.actions.resize(n_states);
  out.frequencies.resize(n_states);
  std::vector<int> votes(n_actions);
  for (int s = 0; s < n_states; ++s) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const Policy& p : policies) {
      int vote = 0;
      for (int a = 1; a < n_actions; ++a) {
        if (p(s, a) > p(s, vote)) vote = a;
      }
      ++votes[vote];
    }
    int mode = 0;
    for (int a = 1; a < n_actions; ++a) {
      if (votes[a] > votes[mode]) mode = a;  // ties keep the smaller index
    }
    out.actions[s] = mode;
    out.frequencies[s] =
        static_cast<double>(votes[mode]) / static_cast<double>(policies.size());
    out.policy(s, mode) = 1.0;
  }
  return out;
}

}  // namespace cheaptalk
