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

#ifndef MIVOTE_DIFFUSION_HPP_
#define MIVOTE_DIFFUSION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mivote/model.hpp"
#include "mivote/revision.hpp"
#include "mivote/rng.hpp"

namespace mivote {

enum class DiffusionModel { kIndependentCascade, kLinearThreshold };

// At most one signed message per candidate.
class MessageVector {
 public:
  MessageVector() = default;
  explicit MessageVector(int candidate_count);

  // Throws StructuralError if `set` holds both signs for some candidate.
  static MessageVector from_set(int candidate_count, MessageSet set);
  // Accepts "(.,-,+)" or ".-+"; U+2212 is read as '-'.
  static MessageVector parse(std::string_view text);

  void set(CandidateId c, std::optional<MessageSign> sign);
  std::optional<MessageSign> at(CandidateId c) const;
  int count() const { return set_.size(); }
  bool empty() const { return set_.empty(); }
  int candidate_count() const { return candidate_count_; }
  MessageSet as_set() const { return set_; }
  int code() const { return code_from_message_set(candidate_count_, set_); }
  std::string to_string() const { return set_.to_string(candidate_count_); }

  friend bool operator==(const MessageVector&, const MessageVector&) = default;

 private:
  int candidate_count_ = 0;
  MessageSet set_;
};

// Non-empty vectors with at most `max_count` messages allowed by `signs`,
// ordered by base-3 code.
std::vector<MessageVector> all_message_vectors(int candidate_count,
                                               int max_count,
                                               SignRestriction signs);

struct SeedAssignment {
  NodeId node = 0;
  MessageVector vector;

  friend bool operator==(const SeedAssignment&,
                         const SeedAssignment&) = default;
};

// Seeds with their message vectors, kept sorted by node.
class Solution {
 public:
  Solution() = default;

  // Throws StructuralError on an empty vector or a repeated seed.
  void assign(NodeId node, MessageVector vector);
  Solution with(NodeId node, MessageVector vector) const;

  std::span<const SeedAssignment> assignments() const { return seeds_; }
  const MessageVector* vector_of(NodeId node) const;
  bool contains(NodeId node) const { return vector_of(node) != nullptr; }
  int size() const { return static_cast<int>(seeds_.size()); }
  bool empty() const { return seeds_.empty(); }
  std::vector<NodeId> seeds() const;
  // Sum of |I(s)|.
  int message_count() const;
  // Sum of |I(s)| * w(s).
  double cost(const VoterNetwork& network) const;
  std::string to_string() const;

  friend bool operator==(const Solution&, const Solution&) = default;

 private:
  std::vector<SeedAssignment> seeds_;
};

// Throws StructuralError/ArgumentError for out-of-range seeds, candidate
// count mismatches, or messages the sign restriction forbids.
void validate_solution(const Instance& instance, const Solution& solution,
                       SignRestriction signs = SignRestriction::kBoth);

// Subgraph of retained edges, stored as forward adjacency.
class LiveGraph {
 public:
  LiveGraph() = default;
  // `included_edges` are indices into network.edges().
  LiveGraph(const VoterNetwork& network, std::vector<int> included_edges);
  static LiveGraph full(const VoterNetwork& network);

  int node_count() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const int> included_edges() const { return edges_; }
  std::span<const NodeId> successors(NodeId v) const {
    return {targets_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

 private:
  std::vector<int> edges_;
  std::vector<int> offsets_{0};
  std::vector<NodeId> targets_;
};

// Each edge kept independently with probability p.
LiveGraph sample_live_graph_ic(const VoterNetwork& network, Rng& rng);
// Each node keeps at most one incoming edge, edge (u,v) with probability
// w(u,v). Throws ConfigurationError without LT weights.
LiveGraph sample_live_graph_lt(const VoterNetwork& network, Rng& rng);
LiveGraph sample_live_graph(const VoterNetwork& network, DiffusionModel model,
                            Rng& rng);

struct DiffusionOutcome {
  // Union of received messages before pair cancellation.
  std::vector<MessageSet> received;
  std::vector<Ranking> final_rankings;
  Tally final_tally;
  int mov = 0;
  int delta_mov = 0;
  bool favored_wins = false;
};

// Nodes reachable from `sources` in the live graph, sources included.
std::vector<char> reachable(std::span<const NodeId> sources,
                            const LiveGraph& live);

// Messages received by every node. Seeds receive their own messages; with
// `bribed` they receive only those.
std::vector<MessageSet> received_messages(const Instance& instance,
                                          const Solution& solution,
                                          const LiveGraph& live, bool bribed);

DiffusionOutcome diffuse(const Instance& instance, const Solution& solution,
                         const LiveGraph& live, const RevisionRule& rule,
                         bool bribed);

// Same result computed by the step-by-step spreading process, one active
// set per message and time step.
DiffusionOutcome diffuse_timed(const Instance& instance,
                               const Solution& solution, const LiveGraph& live,
                               const RevisionRule& rule, bool bribed);

// Number of nodes reachable from the seeds.
int influence(std::span<const NodeId> seeds, const LiveGraph& live);

}  // namespace mivote

#endif  // MIVOTE_DIFFUSION_HPP_
