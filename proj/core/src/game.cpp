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

#include "cheaptalk/game.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cheaptalk/rng.hpp"

namespace cheaptalk {
namespace {

std::vector<double> linspace01(int n) {
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = 0.0;
    return grid;
  }
  for (int i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

std::vector<double> resolve_prior(PriorKind kind, int n) {
  std::vector<double> weights(n);
  for (int k = 0; k < n; ++k) {
    switch (kind) {
      case PriorKind::kUniform:
        weights[k] = 1.0;
        break;
      case PriorKind::kLinearIncreasing:
        weights[k] = static_cast<double>(k + 1);
        break;
      case PriorKind::kLinearDecreasing:
        weights[k] = static_cast<double>(n - k);
        break;
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return weights;
}

}  // namespace

GameSpec build_game(const GameConfig& config) {
  if (config.n_types < 1 || config.n_messages < 1 || config.n_actions < 1) {
    throw std::invalid_argument(
        "game: n_types, n_messages and n_actions must be positive");
  }
  if (!(config.bias >= 0.0)) {
    throw std::invalid_argument("game: bias must be non-negative");
  }
  GameSpec spec;
  spec.n_types = config.n_types;
  spec.n_messages = config.n_messages;
  spec.n_actions = config.n_actions;
  spec.bias = config.bias;
  spec.prior_kind = config.prior;
  spec.loss = config.loss;
  spec.types = linspace01(config.n_types);
  spec.actions = linspace01(config.n_actions);
  spec.prior = resolve_prior(config.prior, config.n_types);
  return spec;
}

double loss_value(LossKind kind, double distance) {
  switch (kind) {
    case LossKind::kQuadratic:
      return distance * distance;
    case LossKind::kQuartic: {
      const double sq = distance * distance;
      return sq * sq;
    }
    case LossKind::kAbsolute:
      return std::abs(distance);
  }
  return 0.0;  // unreachable
}

double utility(Role role, double theta, double action, const GameSpec& spec) {
  const double target = role == Role::kSender ? theta + spec.bias : theta;
  return -loss_value(spec.loss, action - target);
}

BabblingBenchmark babbling_benchmark(const GameSpec& spec) {
  BabblingBenchmark out;
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < spec.n_actions; ++a) {
    double value = 0.0;
    for (int t = 0; t < spec.n_types; ++t) {
      value +=
          spec.prior[t] * utility(Role::kReceiver, spec.types[t],
                                  spec.actions[a], spec);
    }
    // strict improvement only, so ties resolve toward the smaller action
    if (value > best) {
      best = value;
      out.action_index = a;
    }
  }
  out.action = spec.actions[out.action_index];
  out.receiver_payoff = best;
  double sender = 0.0;
  for (int t = 0; t < spec.n_types; ++t) {
    sender += spec.prior[t] *
              utility(Role::kSender, spec.types[t], out.action, spec);
  }
  out.sender_payoff = sender;
  return out;
}

std::uint64_t game_fingerprint(const GameSpec& spec) {
  std::uint64_t h = 0x636865617074616cULL;
  h = mix64(h ^ static_cast<std::uint64_t>(spec.n_types));
  h = mix64(h ^ static_cast<std::uint64_t>(spec.n_messages));
  h = mix64(h ^ static_cast<std::uint64_t>(spec.n_actions));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(spec.bias));
  h = mix64(h ^ static_cast<std::uint64_t>(spec.prior_kind));
  h = mix64(h ^ static_cast<std::uint64_t>(spec.loss));
  return h;
}

std::string prior_kind_name(PriorKind kind) {
  switch (kind) {
    case PriorKind::kUniform:
      return "uniform";
    case PriorKind::kLinearIncreasing:
      return "increasing";
    case PriorKind::kLinearDecreasing:
      return "decreasing";
  }
  return "?";
}

std::string loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::kQuadratic:
      return "quadratic";
    case LossKind::kQuartic:
      return "quartic";
    case LossKind::kAbsolute:
      return "absolute";
  }
  return "?";
}

PriorKind prior_kind_from_name(const std::string& name) {
  if (name == "uniform") return PriorKind::kUniform;
  if (name == "increasing") return PriorKind::kLinearIncreasing;
  if (name == "decreasing") return PriorKind::kLinearDecreasing;
  throw std::invalid_argument("unknown prior kind '" + name +
                              "' (expected uniform|increasing|decreasing)");
}

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "quadratic") return LossKind::kQuadratic;
  if (name == "quartic") return LossKind::kQuartic;
  if (name == "absolute") return LossKind::kAbsolute;
  throw std::invalid_argument("unknown loss kind '" + name +
                              "' (expected quadratic|quartic|absolute)");
}

}  // namespace cheaptalk
