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

#include "cheaptalk/equilibria.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cheaptalk {
namespace {

void append_partitions(int n_types, std::vector<int>& cuts,
                       std::vector<Partition>& out) {
  Partition partition;
  partition.n_types = n_types;
  int begin = 0;
  for (int cut : cuts) {
    partition.blocks.push_back({begin, cut});
    begin = cut;
  }
  partition.blocks.push_back({begin, n_types});
  out.push_back(std::move(partition));

  const int from = cuts.empty() ? 1 : cuts.back() + 1;
  for (int c = from; c <= n_types - 1; ++c) {
    cuts.push_back(c);
    append_partitions(n_types, cuts, out);
    cuts.pop_back();
  }
}

// Sender IC for a fixed selection of one action per block: every type must
// weakly prefer its own block's action, exact ties counting as weak
// preference.
bool incentive_compatible(const Partition& partition,
                          const std::vector<int>& actions,
                          const GameSpec& spec) {
  const int n_blocks = static_cast<int>(partition.blocks.size());
  for (int i = 0; i < n_blocks; ++i) {
    const double own_action = spec.actions[actions[i]];
    for (int t = partition.blocks[i].begin; t < partition.blocks[i].end; ++t) {
      const double theta = spec.types[t];
      const double own = utility(Role::kSender, theta, own_action, spec);
      for (int j = 0; j < n_blocks; ++j) {
        if (j == i) continue;
        const double other =
            utility(Role::kSender, theta, spec.actions[actions[j]], spec);
        if (other > own + kBestResponseTol) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n_types) {
  if (n_types < 1) {
    throw std::invalid_argument("enumerate_partitions: n_types must be >= 1");
  }
  if (n_types > 30) {
    throw std::invalid_argument(
        "enumerate_partitions: 2^(n-1) partitions is unreasonable beyond "
        "n = 30");
  }
  std::vector<Partition> out;
  out.reserve(std::size_t{1} << (n_types - 1));
  std::vector<int> cuts;
  append_partitions(n_types, cuts, out);
  return out;
}

std::vector<std::vector<int>> block_optimal_actions(const Partition& partition,
                                                    const GameSpec& spec) {
  std::vector<std::vector<int>> out;
  out.reserve(partition.blocks.size());
  for (const Block& block : partition.blocks) {
    double block_mass = 0.0;
    for (int t = block.begin; t < block.end; ++t) block_mass += spec.prior[t];
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> values(spec.n_actions);
    for (int a = 0; a < spec.n_actions; ++a) {
      double eu = 0.0;
      for (int t = block.begin; t < block.end; ++t) {
        eu += (spec.prior[t] / block_mass) *
              utility(Role::kReceiver, spec.types[t], spec.actions[a], spec);
      }
      values[a] = eu;
      if (eu > best) best = eu;
    }
    std::vector<int> optimal;
    for (int a = 0; a < spec.n_actions; ++a) {
      if (values[a] >= best - kBestResponseTol) optimal.push_back(a);
    }
    out.push_back(std::move(optimal));
  }
  return out;
}

std::optional<PartitionalEquilibrium> check_partition_equilibrium(
    const Partition& partition, const GameSpec& spec) {
  const int n_blocks = static_cast<int>(partition.blocks.size());
  if (n_blocks > spec.n_messages) return std::nullopt;  // infeasible

  const auto optimal = block_optimal_actions(partition, spec);

  // Odometer over the tie product, first block most significant. The best
  // reply to a partitional strategy may not be unique away from the
  // uniform-quadratic baseline, so every selection has to be tried.
  std::vector<int> choice(n_blocks, 0);
  std::vector<int> actions(n_blocks);
  while (true) {
    for (int i = 0; i < n_blocks; ++i) actions[i] = optimal[i][choice[i]];
    if (incentive_compatible(partition, actions, spec)) {
      PartitionalEquilibrium eq;
      eq.partition = partition;
      eq.block_actions = actions;
      const auto [pi_s, pi_r] = induced_policies(eq, spec);
      const auto [u_s, u_r] = expected_payoffs(pi_s, pi_r, spec);
      eq.u_sender = u_s;
      eq.u_receiver = u_r;
      eq.mutual_info = normalized_mutual_information(pi_s, spec);
      return eq;
    }
    int i = n_blocks - 1;
    while (i >= 0 &&
           choice[i] + 1 == static_cast<int>(optimal[i].size())) {
      choice[i] = 0;
      --i;
    }
    if (i < 0) return std::nullopt;
    ++choice[i];
  }
}

std::vector<PartitionalEquilibrium> enumerate_equilibria(
    const GameSpec& spec) {
  std::vector<PartitionalEquilibrium> out;
  for (const Partition& partition : enumerate_partitions(spec.n_types)) {
    if (auto eq = check_partition_equilibrium(partition, spec)) {
      out.push_back(std::move(*eq));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PartitionalEquilibrium& lhs,
                      const PartitionalEquilibrium& rhs) {
                     return lhs.mutual_info > rhs.mutual_info;
                   });
  return out;
}

PartitionalEquilibrium optimal_equilibrium(const GameSpec& spec) {
  const auto equilibria = enumerate_equilibria(spec);
  // Babbling always exists, so the list is never empty. The list is sorted
  // by descending informativeness, so keeping strict improvements resolves
  // payoff ties toward higher mutual information and then toward the
  // earlier partition.
  const PartitionalEquilibrium* best = &equilibria.front();
  for (const PartitionalEquilibrium& eq : equilibria) {
    if (eq.u_receiver > best->u_receiver) best = &eq;
  }
  return *best;
}

std::pair<Policy, Policy> induced_policies(const PartitionalEquilibrium& eq,
                                           const GameSpec& spec) {
  const int n_blocks = static_cast<int>(eq.partition.blocks.size());
  if (n_blocks > spec.n_messages) {
    throw std::invalid_argument("induced_policies: more blocks than messages");
  }
  Policy pi_s(spec.n_types, spec.n_messages);
  Policy pi_r(spec.n_messages, spec.n_actions);
  for (int i = 0; i < n_blocks; ++i) {
    for (int t = eq.partition.blocks[i].begin; t < eq.partition.blocks[i].end;
         ++t) {
      pi_s(t, i) = 1.0;
    }
    pi_r(i, eq.block_actions[i]) = 1.0;
  }
  for (int m = n_blocks; m < spec.n_messages; ++m) {
    pi_r(m, eq.block_actions[0]) = 1.0;  // off-path: mimic the first block
  }
  return {std::move(pi_s), std::move(pi_r)};
}

}  // namespace cheaptalk
