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

#ifndef MIVOTE_ORACLE_HPP_
#define MIVOTE_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "mivote/diffusion.hpp"
#include "mivote/estimation.hpp"
#include "mivote/model.hpp"
#include "mivote/optimize.hpp"

namespace mivote {

struct OracleLimits {
  int max_classes = 25;
  int max_budget = 4;
  int max_candidates = 5;
  // Off: every node is its own class.
  bool use_symmetry = true;
};

struct OracleResult {
  double best_value = 0.0;
  Solution best_solution;
  std::uint64_t explored = 0;
  int class_count = 0;
};

// Groups of nodes whose seeding roles are interchangeable: equal ranking and
// cost, and either structural twins (swapping them is an automorphism of the
// weighted graph) or members of one strongly connected component of edges
// that are present in every live graph. Classes are sorted by first node.
std::vector<std::vector<NodeId>> symmetry_classes(const Instance& instance,
                                                  DiffusionModel model);

// Exhaustive search over all solutions within budget, one representative per
// symmetry orbit. Ties prefer lower cost, then fewer seeds, then the earlier
// solution in enumeration order. Evaluation is exact unless config.mode
// explicitly asks for Monte Carlo.
OracleResult solve_exact(const Instance& instance,
                         const OptimizerConfig& config,
                         const Objective& objective =
                             Objective::expected_delta_mov(),
                         const OracleLimits& limits = {});

}  // namespace mivote

#endif  // MIVOTE_ORACLE_HPP_
