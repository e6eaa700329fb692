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

#include "mivote/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "mivote/errors.hpp"

namespace mivote {
namespace {

constexpr double kWeightSlack = 1e-9;

std::uint64_t arc_key(NodeId from, NodeId to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

}  // namespace

Ranking::Ranking(std::vector<CandidateId> order) : order_(std::move(order)) {
  if (order_.empty()) throw StructuralError("ranking must not be empty");
  const int n = static_cast<int>(order_.size());
  position_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const int c = order_[i].index;
    if (c < 0 || c >= n) {
      throw StructuralError("ranking entry " + std::to_string(c) +
                            " is outside 0.." + std::to_string(n - 1));
    }
    if (position_[c] != -1) {
      throw StructuralError("ranking repeats candidate " + std::to_string(c));
    }
    position_[c] = i;
  }
}

Ranking Ranking::from_indices(std::span<const int> indices) {
  std::vector<CandidateId> order;
  order.reserve(indices.size());
  for (int c : indices) order.push_back(CandidateId{c});
  return Ranking(std::move(order));
}

Ranking Ranking::from_indices(std::initializer_list<int> indices) {
  return from_indices(std::span<const int>(indices.begin(), indices.size()));
}

Ranking Ranking::identity(int candidate_count) {
  std::vector<int> indices(candidate_count);
  std::iota(indices.begin(), indices.end(), 0);
  return from_indices(indices);
}

std::vector<int> Ranking::indices() const {
  std::vector<int> out;
  out.reserve(order_.size());
  for (CandidateId c : order_) out.push_back(c.index);
  return out;
}

Ranking Ranking::with_swapped(int i, int j) const {
  Ranking copy = *this;
  std::swap(copy.order_[i], copy.order_[j]);
  copy.position_[copy.order_[i].index] = i;
  copy.position_[copy.order_[j].index] = j;
  return copy;
}

std::string Ranking::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i > 0) out += '>';
    out += 'c';
    out += std::to_string(order_[i].index);
  }
  return out;
}

VoterNetwork::VoterNetwork(int node_count, bool directed)
    : node_count_(node_count), directed_(directed) {
  if (node_count < 0) throw StructuralError("negative node count");
  out_.resize(node_count);
  in_.resize(node_count);
  in_weight_.assign(node_count, 0.0);
}

void VoterNetwork::check_node(NodeId v) const {
  if (v < 0 || v >= node_count_) {
    throw StructuralError("node " + std::to_string(v) + " is outside 0.." +
                          std::to_string(node_count_ - 1));
  }
}

void VoterNetwork::add_edge(NodeId from, NodeId to, double p,
                            std::optional<double> lt_weight) {
  check_node(from);
  check_node(to);
  if (from == to) {
    throw StructuralError("self-loop at node " + std::to_string(from));
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw StructuralError("edge probability must lie in (0, 1]");
  }
  if (lt_weight && !(*lt_weight >= 0.0 && *lt_weight <= 1.0)) {
    throw StructuralError("LT weight must lie in [0, 1]");
  }
  if (has_edge(from, to) || (!directed_ && has_edge(to, from))) {
    throw StructuralError("duplicate edge " + std::to_string(from) + "->" +
                          std::to_string(to));
  }
  add_arc(from, to, p, lt_weight);
  if (!directed_) add_arc(to, from, p, lt_weight);
}

void VoterNetwork::add_arc(NodeId from, NodeId to, double p,
                           std::optional<double> lt_weight) {
  if (lt_weight) {
    if (in_weight_[to] + *lt_weight > 1.0 + kWeightSlack) {
      throw StructuralError("incoming LT weights of node " +
                            std::to_string(to) + " exceed 1");
    }
    in_weight_[to] += *lt_weight;
  }
  const int index = static_cast<int>(edges_.size());
  edges_.push_back(Edge{from, to, p, lt_weight});
  out_[from].push_back(index);
  in_[to].push_back(index);
  arc_keys_.insert(arc_key(from, to));
}

void VoterNetwork::set_node_costs(std::vector<double> costs) {
  if (!costs.empty() && static_cast<int>(costs.size()) != node_count_) {
    throw StructuralError("node cost vector has the wrong length");
  }
  for (double w : costs) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw StructuralError("node costs must be positive");
    }
  }
  costs_ = std::move(costs);
}

bool VoterNetwork::has_edge(NodeId from, NodeId to) const {
  return arc_keys_.count(arc_key(from, to)) > 0;
}

bool VoterNetwork::has_lt_weights() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.lt_weight.has_value(); });
}

void VoterNetwork::require_lt_weights() const {
  if (!has_lt_weights()) {
    throw ConfigurationError(
        "the linear threshold model needs an LT weight on every edge");
  }
}

int VoterNetwork::degree(NodeId v) const {
  std::set<NodeId> neighbours;
  for (int e : out_[v]) neighbours.insert(edges_[e].to);
  for (int e : in_[v]) neighbours.insert(edges_[e].from);
  return static_cast<int>(neighbours.size());
}

int VoterNetwork::max_degree() const {
  int best = 0;
  for (NodeId v = 0; v < node_count_; ++v) best = std::max(best, degree(v));
  return best;
}

Instance::Instance(VoterNetwork network, std::vector<Ranking> rankings,
                   int candidate_count, std::optional<int> recommended_budget)
    : network_(std::move(network)),
      rankings_(std::move(rankings)),
      candidate_count_(candidate_count),
      recommended_budget_(recommended_budget) {
  if (candidate_count_ < 2) {
    throw StructuralError("an election needs at least two candidates");
  }
  // Message sets are 64-bit masks, two bits per candidate.
  if (candidate_count_ > 32) {
    throw StructuralError("at most 32 candidates are supported");
  }
  if (static_cast<int>(rankings_.size()) != network_.node_count()) {
    throw StructuralError("expected one ranking per node");
  }
  for (const Ranking& r : rankings_) {
    if (r.size() != candidate_count_) {
      throw StructuralError("ranking " + r.to_string() + " does not cover " +
                            std::to_string(candidate_count_) + " candidates");
    }
  }
}

int Tally::total() const {
  return std::accumulate(votes_.begin(), votes_.end(), 0);
}

Tally tally_of_tops(int candidate_count, std::span<const CandidateId> tops) {
  std::vector<int> votes(candidate_count, 0);
  for (CandidateId c : tops) ++votes[c.index];
  return Tally(std::move(votes));
}

Tally tally(const Instance& instance, std::span<const Ranking> rankings) {
  std::vector<int> votes(instance.candidate_count(), 0);
  for (const Ranking& r : rankings) ++votes[r.top().index];
  return Tally(std::move(votes));
}

int runner_up_votes(const Tally& tally) {
  if (tally.candidate_count() < 2) {
    throw StructuralError("margin of victory needs at least two candidates");
  }
  int best = tally.counts()[1];
  for (int c = 2; c < tally.candidate_count(); ++c) {
    best = std::max(best, tally.counts()[c]);
  }
  return best;
}

int margin_of_victory(const Tally& tally) {
  return tally.votes(kFavored) - runner_up_votes(tally);
}

}  // namespace mivote
