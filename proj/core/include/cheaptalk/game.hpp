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
#include <string>
#include <vector>

namespace cheaptalk {

enum class PriorKind { kUniform, kLinearIncreasing, kLinearDecreasing };
enum class LossKind { kQuadratic, kQuartic, kAbsolute };
enum class Role { kSender, kReceiver };

// Raw game parameters, as they appear in the config file. The baseline
// construction has n_messages = n_types and n_actions = 2 * n_types - 1.
struct GameConfig {
  int n_types = 6;
  int n_messages = 6;
  int n_actions = 11;
  double bias = 0.1;
  PriorKind prior = PriorKind::kUniform;
  LossKind loss = LossKind::kQuadratic;
};

// The discretised sender-receiver game. Immutable after build_game; safe to
// share read-only across parallel workers. Equality comparisons on types,
// messages and actions always happen on indices; the value grids are lookup
// tables used only for payoff arithmetic.
struct GameSpec {
  int n_types = 0;
  int n_messages = 0;
  int n_actions = 0;
  double bias = 0.0;
  PriorKind prior_kind = PriorKind::kUniform;
  LossKind loss = LossKind::kQuadratic;
  std::vector<double> types;    // ascending, uniformly spaced over [0, 1]
  std::vector<double> actions;  // ascending, uniformly spaced over [0, 1]
  std::vector<double> prior;    // strictly positive masses, sum to 1
};

// Validates counts and bias, builds the grids and the normalised prior.
// Linear priors use slope-1 integer weights: increasing puts mass
// proportional to k on the k-th type (k = 1..n), decreasing mirrors it.
GameSpec build_game(const GameConfig& config);

double loss_value(LossKind kind, double distance);

// Receiver: -loss(action - theta). Sender: -loss(action - theta - bias).
double utility(Role role, double theta, double action, const GameSpec& spec);

struct BabblingBenchmark {
  int action_index = 0;
  double action = 0.0;
  double receiver_payoff = 0.0;
  double sender_payoff = 0.0;
};

// Ex-ante optimal uninformed play: the action maximising the prior-weighted
// receiver utility (ties broken toward the smaller action), with both
// agents' ex-ante payoffs at that action. These payoffs are the lower
// bounds of the Q-initialisation intervals.
BabblingBenchmark babbling_benchmark(const GameSpec& spec);

// Stable 64-bit hash of the full game configuration. Mixed into derived
// seeds so that variant sweeps never silently reuse random streams, and
// stored in run records to pin the game a record belongs to.
std::uint64_t game_fingerprint(const GameSpec& spec);

std::string prior_kind_name(PriorKind kind);
std::string loss_kind_name(LossKind kind);
PriorKind prior_kind_from_name(const std::string& name);
LossKind loss_kind_from_name(const std::string& name);

}  // namespace cheaptalk
