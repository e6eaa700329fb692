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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mivote/errors.hpp"
#include "mivote/instances.hpp"
#include "mivote/optimize.hpp"
#include "test_support.hpp"

namespace mivote {
namespace {

using testing::vec;

const double kOneMinusInvE = 1.0 - std::exp(-1.0);

RandomInstanceParams params_for(int trial) {
  RandomInstanceParams params;
  params.node_count = 6 + trial % 5;
  params.edge_probability = 0.2;
  params.p_min = 0.2;
  params.certain_fraction = 0.5;
  params.seed = 900 + trial;
  return params;
}

// Best expected influence over all k-subsets.
double best_k_set(const SolutionEvaluator& evaluator, int k) {
  const int n = evaluator.instance().node_count();
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  double best = 0.0;
  while (true) {
    best = std::max(best, evaluator.expected_influence(pick));
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

TEST(ApproximationRatioTest, MatchesClosedForm) {
  EXPECT_NEAR(approximation_ratio(4, 2), 3.0 / 16.0 * kOneMinusInvE, 1e-12);
  EXPECT_NEAR(approximation_ratio(2, 2), 1.0 / 8.0 * kOneMinusInvE, 1e-12);
  EXPECT_NEAR(approximation_ratio(3, 3), 1.0 / 18.0 * kOneMinusInvE, 1e-12);
}

TEST(GreedySeedsTest, LazyMatchesPlainGreedy) {
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_instance(params_for(trial));
    OptimizerConfig config;
    const SolutionEvaluator evaluator = make_evaluator(inst, config);
    const GreedySeeds lazy = greedy_influence_seeds(evaluator, 3);
    std::vector<NodeId> plain;
    for (int round = 0; round < 3; ++round) {
      const double base = evaluator.expected_influence(plain);
      NodeId best = -1;
      double best_gain = 0.0;
      for (NodeId v = 0; v < inst.node_count(); ++v) {
        if (std::find(plain.begin(), plain.end(), v) != plain.end()) continue;
        std::vector<NodeId> with = plain;
        with.push_back(v);
        const double gain = evaluator.expected_influence(with) - base;
        if (gain > best_gain + 1e-9) {
          best = v;
          best_gain = gain;
        }
      }
      if (best < 0) break;
      plain.push_back(best);
    }
    EXPECT_EQ(lazy.seeds, plain);
  }
}

TEST(GreedySeedsTest, WithinOneMinusInverseEOfBestSet) {
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_instance(params_for(trial));
    OptimizerConfig config;
    const SolutionEvaluator evaluator = make_evaluator(inst, config);
    for (int k = 1; k <= 3; ++k) {
      const GreedySeeds g = greedy_influence_seeds(evaluator, k);
      EXPECT_GE(g.expected_influence,
                kOneMinusInvE * best_k_set(evaluator, k) - 1e-9);
    }
  }
}

TEST(UniversalGreedyTest, SendsTheSmallestUniversalSet) {
  RandomInstanceParams params = params_for(3);
  const Instance inst = random_instance(params);
  OptimizerConfig config;
  config.rule = RevisionRule::optimistic();
  config.budget = 5;
  const UniversalGreedyResult out = universal_message_greedy(inst, config);
  EXPECT_EQ(out.universal.tau, 2);
  EXPECT_EQ(out.solution.size(), 2);
  for (const SeedAssignment& a : out.solution.assignments()) {
    EXPECT_EQ(a.vector, vec(".--"));
  }
  EXPECT_NEAR(out.ratio, approximation_ratio(5, 2), 1e-15);
}

TEST(UniversalGreedyTest, InapplicableWithoutUniversalSet) {
  const Instance inst = random_instance(params_for(0));
  OptimizerConfig config;
  config.rule = RevisionRule::pessimistic();
  EXPECT_THROW(universal_message_greedy(inst, config), InapplicableError);
  config.rule = RevisionRule::optimistic();
  config.signs = SignRestriction::kPositiveOnly;
  EXPECT_THROW(universal_message_greedy(inst, config), InapplicableError);
}

// A hub that already votes c0 reaches the most voters, yet converting it
// changes no vote. Influence alone does not bound the MoV gain from below.
TEST(UniversalGreedyTest, InfluenceHubOfFavoredVotersGainsNothing) {
  VoterNetwork network(8, /*directed=*/true);
  for (NodeId leaf = 1; leaf <= 5; ++leaf) network.add_edge(0, leaf, 1.0);
  network.add_edge(6, 7, 1.0);
  std::vector<Ranking> rankings(6, Ranking::from_indices({0, 1, 2}));
  rankings.push_back(Ranking::from_indices({1, 2, 0}));
  rankings.push_back(Ranking::from_indices({1, 2, 0}));
  const Instance inst(std::move(network), std::move(rankings), 3);
  OptimizerConfig config;
  config.rule = RevisionRule::optimistic();
  config.budget = 2;
  const UniversalGreedyResult out = universal_message_greedy(inst, config);
  ASSERT_EQ(out.seeds.seeds, std::vector<NodeId>{0});
  EXPECT_DOUBLE_EQ(out.seeds.expected_influence, 6.0);
  const SolutionEvaluator evaluator = make_evaluator(inst, config);
  EXPECT_DOUBLE_EQ(evaluator.evaluate(out.solution).delta_mov, 0.0);
  Solution other;
  other.assign(6, vec(".--"));
  EXPECT_DOUBLE_EQ(evaluator.evaluate(other).delta_mov, 4.0);
}

// Per live graph, a universal set raises MoV by at least the number of
// reached voters who did not already vote c0, and no solution raises it by
// more than twice its influence.
TEST(UniversalGreedyTest, MovGainBoundsHold) {
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(params_for(trial));
    OptimizerConfig config;
    config.rule = RevisionRule::optimistic();
    config.budget = 2 + trial % 3;
    const UniversalGreedyResult out = universal_message_greedy(inst, config);
    const SolutionEvaluator evaluator = make_evaluator(inst, config);
    const EvaluationSummary got = evaluator.evaluate(out.solution);
    double reached_rivals = 0.0;
    testing::for_each_live_graph(
        inst.network(), DiffusionModel::kIndependentCascade,
        [&](const LiveGraph& live, double prob) {
          const std::vector<char> hit = reachable(out.seeds.seeds, live);
          for (NodeId v = 0; v < inst.node_count(); ++v) {
            if (hit[v] && inst.ranking(v).top() != kFavored) {
              reached_rivals += prob;
            }
          }
        });
    EXPECT_GE(got.delta_mov, reached_rivals - 1e-9);
    EXPECT_LE(got.delta_mov, 2.0 * got.influence + 1e-9);
    Rng rng(derive_seed(8, trial));
    for (int k = 0; k < 5; ++k) {
      const Solution s = testing::random_solution(inst, 3, rng);
      const EvaluationSummary any = evaluator.evaluate(s);
      EXPECT_LE(any.delta_mov, 2.0 * any.influence + 1e-9);
    }
  }
}

TEST(BudgetedGreedyTest, UniformCostsReproduceUniversalGreedy) {
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(params_for(trial));
    OptimizerConfig config;
    config.rule = RevisionRule::optimistic();
    config.budget = 2 + trial % 5;
    const UniversalGreedyResult plain = universal_message_greedy(inst, config);
    const BudgetedResult budgeted = budgeted_greedy(inst, config);
    EXPECT_EQ(budgeted.seeds, plain.seeds.seeds) << "trial " << trial;
    EXPECT_EQ(budgeted.solution, plain.solution);
  }
}

TEST(BudgetedGreedyTest, SingletonPassPicksExpensiveCenter) {
  // Star A: center 0 with 9 leaves, cost 8. Star B: center 10 with 5
  // leaves, cost 2. Leaves cost more than the budget.
  VoterNetwork network(16, /*directed=*/true);
  for (NodeId leaf = 1; leaf <= 9; ++leaf) network.add_edge(0, leaf, 1.0);
  for (NodeId leaf = 11; leaf <= 15; ++leaf) network.add_edge(10, leaf, 1.0);
  std::vector<double> costs(16, 100.0);
  costs[0] = 8.0;
  costs[10] = 2.0;
  network.set_node_costs(costs);
  std::vector<Ranking> rankings(16, Ranking::from_indices({1, 2, 0}));
  const Instance inst(std::move(network), std::move(rankings), 3);
  OptimizerConfig config;
  config.rule = RevisionRule::optimistic();
  config.cost_budget = 16.0;  // tau = 2, so a center of cost 8 fits.
  const BudgetedResult out = budgeted_greedy(inst, config);
  EXPECT_TRUE(out.singleton_won);
  EXPECT_EQ(out.seeds, std::vector<NodeId>{0});
  EXPECT_DOUBLE_EQ(out.expected_influence, 10.0);
  EXPECT_DOUBLE_EQ(out.spent, 16.0);
}

TEST(BudgetedGreedyTest, WarnsWhenNothingIsAffordable) {
  VoterNetwork network(2, /*directed=*/true);
  network.add_edge(0, 1, 1.0);
  network.set_node_costs({5.0, 5.0});
  const Instance inst(std::move(network),
                      {Ranking::from_indices({1, 2, 0}),
                       Ranking::from_indices({1, 2, 0})},
                      3);
  OptimizerConfig config;
  config.rule = RevisionRule::optimistic();
  config.cost_budget = 3.0;
  const BudgetedResult out = budgeted_greedy(inst, config);
  EXPECT_TRUE(out.solution.empty());
  EXPECT_TRUE(out.warning.has_value());
}

TEST(FrontierTest, FiveVoterCliqueSingleAdditions) {
  const Instance inst = five_voter_clique();
  OptimizerConfig config;
  config.budget = 2;
  const std::vector<FrontierEntry> entries =
      frontier(inst, Solution(), config);
  ASSERT_FALSE(entries.empty());
  const double best =
      std::max_element(entries.begin(), entries.end(),
                       [](const FrontierEntry& a, const FrontierEntry& b) {
                         return a.gain_mov < b.gain_mov;
                       })
          ->gain_mov;
  EXPECT_DOUBLE_EQ(best, 2.0);
  for (const FrontierEntry& e : entries) {
    EXPECT_LE(e.vector.count(), 2);
    EXPECT_TRUE(e.gain_mov > 0 || e.gain_favored_votes > 0);
  }
  const GreedyLoopResult loop = greedy_approach_loop(inst, config);
  EXPECT_DOUBLE_EQ(loop.expected_delta_mov, 2.0);
}

TEST(FrontierTest, ExhaustedBudgetGivesEmptyFrontier) {
  const Instance inst = five_voter_clique();
  OptimizerConfig config;
  config.budget = 1;
  Solution s;
  s.assign(1, vec("(+,.,.,.,.)"));
  EXPECT_TRUE(frontier(inst, s, config).empty());
}

TEST(SelectionPolicyTest, BreaksTiesByNodeThenCode) {
  std::vector<FrontierEntry> entries(3);
  entries[0] = {4, vec("+.."), 1.0, 0.0, 0.0};
  entries[1] = {2, vec(".+."), 1.0, 0.0, 0.0};
  entries[2] = {2, vec("-.."), 1.0, 0.0, 2.0};
  EXPECT_EQ(max_gain_policy()(entries), 2u);
  entries[2].vector = vec("..+");
  EXPECT_EQ(max_gain_policy()(entries), 1u);
  EXPECT_EQ(runner_up_policy()(entries), 2u);
}

}  // namespace
}  // namespace mivote
