// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIVOTE_INSTANCES_HPP_
#define MIVOTE_INSTANCES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mivote/diffusion.hpp"
#include "mivote/model.hpp"
#include "mivote/revision.hpp"

namespace mivote {

// Complete digraph on five voters and five candidates, p = 1. Tally
// {1, 2, 2, 0, 0}.
Instance five_voter_clique();

struct SetCoverInstance {
  int element_count = 0;
  std::vector<std::vector<int>> sets;
  int h = 1;
};

struct VertexCoverInstance {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  int k = 1;
};

// Node layout of a reduction instance. `core` holds the nodes that encode
// the source problem; the three padding groups fix the initial tally.
struct ReductionLayout {
  Instance instance;
  std::vector<NodeId> set_nodes;
  std::vector<NodeId> element_nodes;
  std::vector<NodeId> core;
  // Mixed-ranking group, c1-first swing group, c0 group.
  std::vector<NodeId> mixed;
  std::vector<NodeId> swing;
  std::vector<NodeId> favored;
};

// Election with candidates c0..c_last whose MoV can turn positive within
// budget h + 1 exactly when the sets admit a cover of size at most h.
// Requires last >= 2.
ReductionLayout set_cover_reduction(const SetCoverInstance& sc, int last);

// Seeds the chosen core nodes with (c1,+), padded with further core nodes to
// exactly h, plus one swing node with (c2,+). For a cover of size at most h
// the result has MoV 1.
Solution reduction_certificate(const ReductionLayout& layout,
                               std::span<const int> cover, int h);

// Smallest cover (ties: lexicographically first), or nullopt.
std::optional<std::vector<int>> min_set_cover(const SetCoverInstance& sc);

// Linear threshold variant: the core is the input graph (both arc directions,
// LT weight 1/deg on incoming arcs) and the padding groups are directed rings
// with LT weight 1. Requires last >= 2 and no isolated vertex.
ReductionLayout vertex_cover_lt_reduction(const VertexCoverInstance& vc,
                                          int last);

std::optional<std::vector<int>> min_vertex_cover(const VertexCoverInstance& vc);

// Replaces every node by a p = 1 clique of (h + 1) * rho_prime copies and
// every arc by complete bipartite arcs between the copies.
Instance bribed_blowup(const Instance& base, int rho_prime, int h);

// Adds the listed arcs with probability epsilon.
Instance epsilon_connect(const Instance& instance,
                         std::span<const std::pair<NodeId, NodeId>> extra,
                         double epsilon);

struct TrapReport {
  int max_degree = 0;
  Tally initial_tally;
  double optimum = 0.0;
  double certificate_value = 0.0;
  std::size_t initial_frontier = 0;
  // One entry per selection policy tried.
  std::vector<double> greedy_values;
};

struct TrapInstance {
  Instance instance;
  // Two-seed solution reaching the optimum.
  Solution certificate;
  TrapReport report;
};

// Undirected, degree at most 2, 19 voters, tally {7, 7, 5}. With budget 2 the
// optimum raises MoV by 1 while no single addition improves anything, so
// greedy stops at the empty solution. Verified on construction.
TrapInstance greedy_trap_ring(const RevisionRule& rule = RevisionRule::pessimistic());
TrapReport verify_greedy_trap_ring(const Instance& instance,
                                  const Solution& certificate,
                                  const RevisionRule& rule);

// Directed forest on 19r voters, tally {7r, 7r, 5r}. With budget 2 the
// optimum is r while greedy reaches exactly 2. Requires r >= 2.
TrapInstance greedy_trap_tree(int r,
                       const RevisionRule& rule = RevisionRule::pessimistic());
TrapReport verify_greedy_trap_tree(const Instance& instance,
                            const Solution& certificate, int r,
                            const RevisionRule& rule);

struct RandomInstanceParams {
  int node_count = 10;
  double edge_probability = 0.2;
  double p_min = 0.1;
  double p_max = 1.0;
  int candidate_count = 3;
  std::uint64_t seed = 1;
  // Random LT weights with incoming sums below 1.
  bool lt_weights = false;
  // Probability that an edge gets p = 1 instead of a draw from the range.
  double certain_fraction = 0.0;
};

// Directed Erdos-Renyi graph with uniform random rankings.
Instance random_instance(const RandomInstanceParams& params);

}  // namespace mivote

#endif  // MIVOTE_INSTANCES_HPP_
