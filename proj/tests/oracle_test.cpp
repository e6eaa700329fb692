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

#include <gtest/gtest.h>

#include "mivote/errors.hpp"
#include "mivote/instances.hpp"
#include "mivote/oracle.hpp"
#include "test_support.hpp"

namespace mivote {
namespace {

using testing::vec;

// Every solution with at most `budget` messages, evaluated one by one.
double brute_force_best(const Instance& inst, const OptimizerConfig& config,
                        const Objective& objective) {
  const SolutionEvaluator evaluator = make_evaluator(inst, config);
  const std::vector<MessageVector> vectors = all_message_vectors(
      inst.candidate_count(), config.budget, config.signs);
  double best = evaluator.evaluate(Solution(), objective).value;
  std::function<void(NodeId, const Solution&, int)> rec =
      [&](NodeId from, const Solution& s, int left) {
        for (NodeId v = from; v < inst.node_count(); ++v) {
          for (const MessageVector& m : vectors) {
            if (m.count() > left) continue;
            const Solution next = s.with(v, m);
            best = std::max(best, evaluator.evaluate(next, objective).value);
            rec(v + 1, next, left - m.count());
          }
        }
      };
  rec(0, Solution(), config.budget);
  return best;
}

TEST(OracleTest, FiveVoterCliqueOptimaByBudget) {
  const Instance inst = five_voter_clique();
  OptimizerConfig config;
  config.budget = 1;
  const OracleResult one = solve_exact(inst, config);
  EXPECT_DOUBLE_EQ(one.best_value, 1.0);
  config.budget = 2;
  const OracleResult two = solve_exact(inst, config);
  EXPECT_DOUBLE_EQ(two.best_value, 2.0);
  ASSERT_EQ(two.best_solution.size(), 1);
  EXPECT_EQ(two.best_solution.assignments()[0].vector, vec("(+,.,-,.,.)"));
  // The whole clique is one class per distinct ranking.
  EXPECT_EQ(two.class_count, 5);
}

TEST(OracleTest, MatchesBruteForceOnSmallInstances) {
  const RevisionRule rules[] = {RevisionRule::pessimistic(),
                                RevisionRule::optimistic(),
                                RevisionRule::score_based(0.25)};
  for (int trial = 0; trial < 12; ++trial) {
    RandomInstanceParams params;
    params.node_count = 4 + trial % 2;
    params.edge_probability = 0.3;
    params.certain_fraction = 0.5;
    params.seed = 300 + trial;
    params.lt_weights = true;
    const Instance inst = random_instance(params);
    OptimizerConfig config;
    config.rule = rules[trial % 3];
    config.budget = 2;
    config.bribed = trial % 4 == 3;
    config.model = trial % 2 ? DiffusionModel::kLinearThreshold
                             : DiffusionModel::kIndependentCascade;
    for (const Objective& obj :
         {Objective::expected_delta_mov(), Objective::probability_of_victory()}) {
      EXPECT_NEAR(solve_exact(inst, config, obj).best_value,
                  brute_force_best(inst, config, obj), 1e-9)
          << "trial " << trial;
    }
  }
}

TEST(OracleTest, SymmetryPruningKeepsTheOptimum) {
  for (int trial = 0; trial < 10; ++trial) {
    RandomInstanceParams params;
    params.node_count = 8 + trial % 3;
    params.edge_probability = 0.15;
    params.certain_fraction = 0.7;
    params.candidate_count = 3;
    params.seed = 700 + trial;
    const Instance inst = random_instance(params);
    OptimizerConfig config;
    config.rule = RevisionRule::optimistic();
    config.budget = 2;
    OracleLimits off;
    off.use_symmetry = false;
    off.max_classes = 64;
    const OracleResult pruned = solve_exact(inst, config);
    const OracleResult full =
        solve_exact(inst, config, Objective::expected_delta_mov(), off);
    EXPECT_NEAR(pruned.best_value, full.best_value, 1e-9);
    EXPECT_LE(pruned.explored, full.explored);
  }
}

TEST(OracleTest, SymmetryClassesOfCertainCycle) {
  VoterNetwork network(5, /*directed=*/true);
  network.add_edge(0, 1, 1.0);
  network.add_edge(1, 2, 1.0);
  network.add_edge(2, 0, 1.0);
  network.add_edge(2, 3, 0.5);
  network.add_edge(2, 4, 0.5);
  std::vector<Ranking> rankings(5, Ranking::from_indices({1, 0, 2}));
  const Instance inst(std::move(network), std::move(rankings), 3);
  const auto classes =
      symmetry_classes(inst, DiffusionModel::kIndependentCascade);
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_EQ(classes[0], (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(classes[1], (std::vector<NodeId>{3, 4}));
}

TEST(OracleTest, CostBudgetLimitsMessages) {
  const Instance base = five_voter_clique();
  VoterNetwork network = base.network();
  network.set_node_costs({3.0, 1.0, 1.0, 1.0, 1.0});
  const Instance inst(std::move(network),
                      std::vector<Ranking>(base.rankings().begin(),
                                           base.rankings().end()),
                      5);
  OptimizerConfig config;
  config.cost_budget = 2.0;
  const OracleResult out = solve_exact(inst, config);
  EXPECT_LE(out.best_solution.cost(inst.network()), 2.0);
  EXPECT_FALSE(out.best_solution.contains(0));
}

TEST(OracleTest, RefusesOversizedSearches) {
  const Instance inst = five_voter_clique();
  OptimizerConfig config;
  config.budget = 9;
  EXPECT_THROW(solve_exact(inst, config), CapacityError);
  RandomInstanceParams params;
  params.node_count = 40;
  params.edge_probability = 0.02;
  OptimizerConfig small;
  OracleLimits limits;
  limits.max_classes = 5;
  EXPECT_THROW(solve_exact(random_instance(params), small,
                           Objective::expected_delta_mov(), limits),
               CapacityError);
}

}  // namespace
}  // namespace mivote
