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

#include <utility>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/matrix.hpp"

namespace cheaptalk {

// A policy pair is counted as an approximate equilibrium when neither agent
// places more than this much probability mass outside its best-response set
// in any reached state.
inline constexpr double kEpsNashThreshold = 0.01;

// Absolute tolerance on expected utilities when classifying best-response
// ties. Grid payoffs are short sums of products of grid values, so exact
// ties land within a few ulps of each other; anything looser would
// misclassify genuine indifference.
inline constexpr double kBestResponseTol = 1e-12;

struct Metrics {
  double u_sender = 0.0;
  double u_receiver = 0.0;
  double mutual_info = 0.0;
  double max_subopt_sender = 0.0;    // max mass on non-best-response messages
  double max_subopt_receiver = 0.0;  // ... actions, over on-path messages
  double gain_sender = 0.0;          // ex-ante gain from best responding
  double gain_receiver = 0.0;
  bool is_eps_nash = false;
};

// Ex-ante expected payoffs (U_S, U_R) of a policy pair.
std::pair<double, double> expected_payoffs(const Policy& pi_sender,
                                           const Policy& pi_receiver,
                                           const GameSpec& spec);

// Mutual information between type and message under the sender's policy,
// normalised by the prior entropy: 1 means the message reveals the type,
// 0 means they are independent. Zero-probability messages contribute
// nothing. Throws on a zero-entropy prior (the ratio is undefined, not 0).
double normalized_mutual_information(const Policy& pi_sender,
                                     const GameSpec& spec);

struct ReceiverBestResponses {
  std::vector<bool> on_path;           // marginal probability > 0
  std::vector<double> marginal;        // per message
  Matrix posterior;                    // (message, type); zero rows off path
  std::vector<std::vector<int>> optimal;  // ascending action indices
  std::vector<double> best_value;      // max posterior expected utility
};

// Posterior beliefs and optimal action sets for every on-path message.
// Off-path messages are flagged and given the full action set: no data
// disciplines them, any response is trivially optimal.
ReceiverBestResponses receiver_best_responses(const Policy& pi_sender,
                                              const GameSpec& spec);

struct SenderBestResponses {
  Matrix message_values;               // (type, message) expected utility
  std::vector<std::vector<int>> optimal;  // ascending message indices
  std::vector<double> best_value;      // per type
};

SenderBestResponses sender_best_responses(const Policy& pi_receiver,
                                          const GameSpec& spec);

// All deviation metrics of a policy pair, together with payoffs and mutual
// information. Receiver-side maxima run over on-path messages only.
Metrics nash_deviation_metrics(const Policy& pi_sender,
                               const Policy& pi_receiver,
                               const GameSpec& spec);

struct CanonicalizedPolicies {
  Policy sender;
  Policy receiver;
  std::vector<int> permutation;  // new message index -> original index
};

// Relabels messages so that smaller message indices carry smaller posterior
// mean types; off-path messages go last, among themselves in original
// order. Payoffs and mutual information are invariant under the joint
// relabeling, which makes policies from independent runs comparable.
CanonicalizedPolicies canonicalize_messages(const Policy& pi_sender,
                                            const Policy& pi_receiver,
                                            const GameSpec& spec);

// Argmax projection of a policy, uniform mass over exact ties.
Policy greedy_policy(const Policy& pi);

struct ModalPolicy {
  Policy policy;                    // point mass on the modal action
  std::vector<int> actions;         // per state
  std::vector<double> frequencies;  // share of policies voting for it
};

// Per state, the most frequent greedy action across a list of policies
// (ties toward the smaller index). Policies with tied argmax rows vote for
// their smallest argmax.
ModalPolicy modal_policy(const std::vector<Policy>& policies);

}  // namespace cheaptalk
