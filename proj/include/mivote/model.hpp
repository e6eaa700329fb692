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

#ifndef MIVOTE_MODEL_HPP_
#define MIVOTE_MODEL_HPP_

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace mivote {

using NodeId = std::int32_t;

struct CandidateId {
  int index = 0;

  constexpr auto operator<=>(const CandidateId&) const = default;
};

// The candidate whose victory is being pursued.
inline constexpr CandidateId kFavored{0};

// A strict total order over candidates 0..n-1. Position 0 is the top.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<CandidateId> order);

  static Ranking from_indices(std::span<const int> indices);
  static Ranking from_indices(std::initializer_list<int> indices);
  static Ranking identity(int candidate_count);

  int size() const { return static_cast<int>(order_.size()); }
  CandidateId top() const { return order_.front(); }
  CandidateId at(int position) const { return order_[position]; }
  int position_of(CandidateId c) const { return position_[c.index]; }
  std::span<const CandidateId> order() const { return order_; }
  std::vector<int> indices() const;

  // Returns a copy with the candidates at positions i and j exchanged.
  Ranking with_swapped(int i, int j) const;

  // "c0>c1>c2".
  std::string to_string() const;

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.order_ == b.order_;
  }
  friend std::strong_ordering operator<=>(const Ranking& a, const Ranking& b) {
    return a.order_ <=> b.order_;
  }

 private:
  std::vector<CandidateId> order_;
  std::vector<int> position_;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  double p = 1.0;
  std::optional<double> lt_weight;
};

// Directed (or undirected, stored as two arcs) social graph with IC
// probabilities, optional LT weights and optional per-node seeding costs.
class VoterNetwork {
 public:
  explicit VoterNetwork(int node_count = 0, bool directed = true);

  // Undirected networks store the pair as two arcs with equal attributes.
  void add_edge(NodeId from, NodeId to, double p = 1.0,
                std::optional<double> lt_weight = std::nullopt);
  void set_node_costs(std::vector<double> costs);

  int node_count() const { return node_count_; }
  bool directed() const { return directed_; }
  std::span<const Edge> edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int index) const { return edges_[index]; }
  std::span<const int> out_edges(NodeId v) const { return out_[v]; }
  std::span<const int> in_edges(NodeId v) const { return in_[v]; }
  bool has_edge(NodeId from, NodeId to) const;

  // True when every arc carries an LT weight.
  bool has_lt_weights() const;
  // Throws ConfigurationError unless LT weights are present everywhere.
  void require_lt_weights() const;

  bool has_node_costs() const { return !costs_.empty(); }
  double node_cost(NodeId v) const { return costs_.empty() ? 1.0 : costs_[v]; }
  std::span<const double> node_costs() const { return costs_; }

  // Number of distinct neighbours, ignoring direction.
  int degree(NodeId v) const;
  int max_degree() const;

  void check_node(NodeId v) const;

 private:
  void add_arc(NodeId from, NodeId to, double p,
               std::optional<double> lt_weight);

  int node_count_ = 0;
  bool directed_ = true;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<double> in_weight_;
  std::unordered_set<std::uint64_t> arc_keys_;
  std::vector<double> costs_;
};

class Instance {
 public:
  Instance(VoterNetwork network, std::vector<Ranking> rankings,
           int candidate_count,
           std::optional<int> recommended_budget = std::nullopt);

  const VoterNetwork& network() const { return network_; }
  std::span<const Ranking> rankings() const { return rankings_; }
  const Ranking& ranking(NodeId v) const { return rankings_[v]; }
  int candidate_count() const { return candidate_count_; }
  int node_count() const { return network_.node_count(); }
  std::optional<int> recommended_budget() const { return recommended_budget_; }

 private:
  VoterNetwork network_;
  std::vector<Ranking> rankings_;
  int candidate_count_ = 0;
  std::optional<int> recommended_budget_;
};

class Tally {
 public:
  Tally() = default;
  explicit Tally(std::vector<int> votes) : votes_(std::move(votes)) {}

  int votes(CandidateId c) const { return votes_[c.index]; }
  int candidate_count() const { return static_cast<int>(votes_.size()); }
  int total() const;
  std::span<const int> counts() const { return votes_; }

  friend bool operator==(const Tally&, const Tally&) = default;

 private:
  std::vector<int> votes_;
};

// Plurality tally of the top choices in `rankings`.
Tally tally(const Instance& instance, std::span<const Ranking> rankings);
Tally tally_of_tops(int candidate_count, std::span<const CandidateId> tops);

// votes(c0) - max over other candidates. Requires at least two candidates.
int margin_of_victory(const Tally& tally);
// Largest vote count among candidates other than c0.
int runner_up_votes(const Tally& tally);

inline int delta_mov(int final_mov, int baseline_mov) {
  return final_mov - baseline_mov;
}

}  // namespace mivote

#endif  // MIVOTE_MODEL_HPP_
