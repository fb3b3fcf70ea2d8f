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

#include <optional>
#include <utility>
#include <vector>

#include "cheaptalk/analysis.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/matrix.hpp"

namespace cheaptalk {

struct Block {
  int begin = 0;  // type indices [begin, end)
  int end = 0;
};

// Contiguous blocks covering all type indices, in ascending order.
struct Partition {
  int n_types = 0;
  std::vector<Block> blocks;
};

// All 2^(n-1) contiguous partitions, in lexicographic order of their
// boundary lists (no boundaries first).
std::vector<Partition> enumerate_partitions(int n_types);

// Per block, the receiver actions maximising the block-conditional expected
// utility, ties kept as sets under the best-response tolerance.
std::vector<std::vector<int>> block_optimal_actions(const Partition& partition,
                                                    const GameSpec& spec);

struct PartitionalEquilibrium {
  Partition partition;
  std::vector<int> block_actions;  // one receiver action index per block
  double u_sender = 0.0;
  double u_receiver = 0.0;
  double mutual_info = 0.0;
};

// Sender incentive compatibility over all selections of one optimal action
// per block: every type must weakly prefer its own block's action to every
// other block's (ties count as weak preference). Selections are tried in
// lexicographic order of the action-index tuple (first block most
// significant, smaller actions first) and the first passing one is
// returned. Partitions with more blocks than messages are infeasible and
// yield no equilibrium.
//
// Deviations to unused messages need no check: the induced off-path
// receiver response replicates the first block's action, which is already
// in every type's comparison set.
std::optional<PartitionalEquilibrium> check_partition_equilibrium(
    const Partition& partition, const GameSpec& spec);

// All monotone partitional equilibria, sorted by descending mutual
// information (ties keep partition enumeration order). Babbling, the
// single-block partition, is always present.
std::vector<PartitionalEquilibrium> enumerate_equilibria(const GameSpec& spec);

// The equilibrium maximising the receiver's ex-ante payoff; ties broken by
// higher mutual information, then partition enumeration order.
PartitionalEquilibrium optimal_equilibrium(const GameSpec& spec);

// Deterministic policy pair induced by an equilibrium: block i sends
// message i, the receiver plays the block action on-path and the first
// block's action off-path.
std::pair<Policy, Policy> induced_policies(const PartitionalEquilibrium& eq,
                                           const GameSpec& spec);

}  // namespace cheaptalk
