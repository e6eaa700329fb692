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
#include "mivote/model.hpp"

namespace mivote {
namespace {

TEST(RankingTest, PositionsAreInverseOfOrder) {
  const Ranking r = Ranking::from_indices({2, 0, 1});
  EXPECT_EQ(r.top(), CandidateId{2});
  EXPECT_EQ(r.position_of(CandidateId{0}), 1);
  EXPECT_EQ(r.position_of(CandidateId{1}), 2);
  EXPECT_EQ(r.to_string(), "c2>c0>c1");
  const Ranking s = r.with_swapped(0, 2);
  EXPECT_EQ(s.indices(), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(s.position_of(CandidateId{1}), 0);
}

TEST(RankingTest, RejectsNonPermutations) {
  EXPECT_THROW(Ranking::from_indices({0, 0, 1}), StructuralError);
  EXPECT_THROW(Ranking::from_indices({0, 3, 1}), StructuralError);
  EXPECT_THROW(Ranking::from_indices(std::span<const int>()), StructuralError);
}

TEST(RankingTest, OrdersLexicographically) {
  EXPECT_LT(Ranking::from_indices({0, 2, 1}), Ranking::from_indices({1, 0, 2}));
  EXPECT_EQ(Ranking::identity(3), Ranking::from_indices({0, 1, 2}));
}

TEST(VoterNetworkTest, RejectsBadEdges) {
  VoterNetwork g(3);
  g.add_edge(0, 1, 0.5);
  EXPECT_THROW(g.add_edge(0, 1, 0.5), StructuralError);
  EXPECT_THROW(g.add_edge(2, 2, 0.5), StructuralError);
  EXPECT_THROW(g.add_edge(0, 2, 0.0), StructuralError);
  EXPECT_THROW(g.add_edge(0, 2, 1.5), StructuralError);
  EXPECT_THROW(g.add_edge(0, 7, 1.0), StructuralError);
}

TEST(VoterNetworkTest, UndirectedEdgesBecomeTwoArcs) {
  VoterNetwork g(3, /*directed=*/false);
  g.add_edge(0, 1, 0.3, 0.5);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_THROW(g.add_edge(1, 0, 0.3), StructuralError);
  EXPECT_EQ(g.degree(0), 1);
  EXPECT_EQ(g.max_degree(), 1);
}

TEST(VoterNetworkTest, IncomingLtWeightsStayBelowOne) {
  VoterNetwork g(3);
  g.add_edge(0, 2, 1.0, 0.6);
  EXPECT_THROW(g.add_edge(1, 2, 1.0, 0.5), StructuralError);
  g.add_edge(1, 2, 1.0, 0.4);
  EXPECT_TRUE(g.has_lt_weights());
  g.add_edge(0, 1, 1.0);
  EXPECT_FALSE(g.has_lt_weights());
  EXPECT_THROW(g.require_lt_weights(), ConfigurationError);
}

TEST(VoterNetworkTest, NodeCostsDefaultToOne) {
  VoterNetwork g(2);
  EXPECT_DOUBLE_EQ(g.node_cost(1), 1.0);
  g.set_node_costs({2.0, 3.5});
  EXPECT_DOUBLE_EQ(g.node_cost(1), 3.5);
  EXPECT_THROW(g.set_node_costs({1.0}), StructuralError);
  EXPECT_THROW(g.set_node_costs({1.0, -1.0}), StructuralError);
}

TEST(InstanceTest, ValidatesRankings) {
  VoterNetwork g(2);
  EXPECT_THROW(Instance(g, {Ranking::identity(3)}, 3), StructuralError);
  EXPECT_THROW(Instance(g, {Ranking::identity(3), Ranking::identity(2)}, 3),
               StructuralError);
  EXPECT_THROW(Instance(VoterNetwork(1), {Ranking::identity(1)}, 1),
               StructuralError);
  EXPECT_THROW(Instance(VoterNetwork(1), {Ranking::identity(33)}, 33),
               StructuralError);
  EXPECT_NO_THROW(Instance(VoterNetwork(1), {Ranking::identity(32)}, 32));
}

TEST(TallyTest, MarginOfVictory) {
  VoterNetwork g(4);
  Instance instance(g,
                    {Ranking::from_indices({0, 1, 2}),
                     Ranking::from_indices({1, 0, 2}),
                     Ranking::from_indices({1, 2, 0}),
                     Ranking::from_indices({2, 1, 0})},
                    3);
  const Tally t = tally(instance, instance.rankings());
  EXPECT_EQ(t.counts()[0], 1);
  EXPECT_EQ(t.counts()[1], 2);
  EXPECT_EQ(t.counts()[2], 1);
  EXPECT_EQ(t.total(), 4);
  EXPECT_EQ(margin_of_victory(t), -1);
  EXPECT_EQ(runner_up_votes(t), 2);
  EXPECT_EQ(margin_of_victory(Tally({3, 3})), 0);
  EXPECT_THROW(margin_of_victory(Tally({3})), StructuralError);
  EXPECT_EQ(delta_mov(2, -1), 3);
}

}  // namespace
}  // namespace mivote
