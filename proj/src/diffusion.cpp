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

#include "mivote/diffusion.hpp"

#include <algorithm>
#include <sstream>

#include "mivote/errors.hpp"

namespace mivote {

MessageVector::MessageVector(int candidate_count)
    : candidate_count_(candidate_count) {
  if (candidate_count < 1 || candidate_count > MessageSet::kMaxCandidates) {
    throw ArgumentError("message vectors need 1..32 candidates");
  }
}

MessageVector MessageVector::from_set(int candidate_count, MessageSet set) {
  MessageVector v(candidate_count);
  for (const Message& m : set.messages()) {
    if (m.candidate.index >= candidate_count) {
      throw StructuralError("message refers to candidate " +
                            std::to_string(m.candidate.index));
    }
    if (v.at(m.candidate)) {
      throw StructuralError("a message vector holds one sign per candidate");
    }
    v.set(m.candidate, m.sign);
  }
  return v;
}

MessageVector MessageVector::parse(std::string_view text) {
  std::vector<std::optional<MessageSign>> entries;
  for (std::size_t i = 0; i < text.size();) {
    const unsigned char ch = static_cast<unsigned char>(text[i]);
    if (ch == '(' || ch == ')' || ch == ',' || ch == ' ' || ch == '\t') {
      ++i;
    } else if (ch == '+') {
      entries.emplace_back(MessageSign::kPositive);
      ++i;
    } else if (ch == '-') {
      entries.emplace_back(MessageSign::kNegative);
      ++i;
    } else if (ch == '.' || ch == '0') {
      entries.emplace_back(std::nullopt);
      ++i;
    } else if (text.substr(i, 3) == "\xE2\x88\x92") {  // U+2212
      entries.emplace_back(MessageSign::kNegative);
      i += 3;
    } else if (text.substr(i, 2) == "\xC2\xB7") {  // U+00B7
      entries.emplace_back(std::nullopt);
      i += 2;
    } else {
      throw ParseError("unexpected character in message vector '" +
                       std::string(text) + "'");
    }
  }
  if (entries.empty()) throw ParseError("empty message vector");
  MessageVector v(static_cast<int>(entries.size()));
  for (std::size_t c = 0; c < entries.size(); ++c) {
    v.set(CandidateId{static_cast<int>(c)}, entries[c]);
  }
  return v;
}

void MessageVector::set(CandidateId c, std::optional<MessageSign> sign) {
  if (c.index < 0 || c.index >= candidate_count_) {
    throw StructuralError("candidate " + std::to_string(c.index) +
                          " outside the message vector");
  }
  std::uint64_t bits = set_.bits() & ~(std::uint64_t{3} << (2 * c.index));
  set_ = MessageSet::from_bits(bits);
  if (sign) set_.insert(Message{c, *sign});
}

std::optional<MessageSign> MessageVector::at(CandidateId c) const {
  if (set_.contains(c, MessageSign::kPositive)) return MessageSign::kPositive;
  if (set_.contains(c, MessageSign::kNegative)) return MessageSign::kNegative;
  return std::nullopt;
}

std::vector<MessageVector> all_message_vectors(int candidate_count,
                                               int max_count,
                                               SignRestriction signs) {
  std::vector<MessageVector> out;
  const int codes = message_vector_code_count(candidate_count);
  for (int code = 1; code < codes; ++code) {
    const MessageSet s = message_set_from_code(candidate_count, code);
    if (s.size() > max_count || !permits(signs, s)) continue;
    out.push_back(MessageVector::from_set(candidate_count, s));
  }
  return out;
}

void Solution::assign(NodeId node, MessageVector vector) {
  if (vector.empty()) {
    throw StructuralError("seed " + std::to_string(node) +
                          " must send at least one message");
  }
  auto it = std::lower_bound(
      seeds_.begin(), seeds_.end(), node,
      [](const SeedAssignment& a, NodeId n) { return a.node < n; });
  if (it != seeds_.end() && it->node == node) {
    throw StructuralError("node " + std::to_string(node) +
                          " is seeded twice");
  }
  seeds_.insert(it, SeedAssignment{node, std::move(vector)});
}

Solution Solution::with(NodeId node, MessageVector vector) const {
  Solution copy = *this;
  copy.assign(node, std::move(vector));
  return copy;
}

const MessageVector* Solution::vector_of(NodeId node) const {
  auto it = std::lower_bound(
      seeds_.begin(), seeds_.end(), node,
      [](const SeedAssignment& a, NodeId n) { return a.node < n; });
  return it != seeds_.end() && it->node == node ? &it->vector : nullptr;
}

std::vector<NodeId> Solution::seeds() const {
  std::vector<NodeId> out;
  out.reserve(seeds_.size());
  for (const SeedAssignment& s : seeds_) out.push_back(s.node);
  return out;
}

int Solution::message_count() const {
  int total = 0;
  for (const SeedAssignment& s : seeds_) total += s.vector.count();
  return total;
}

double Solution::cost(const VoterNetwork& network) const {
  double total = 0.0;
  for (const SeedAssignment& s : seeds_) {
    total += s.vector.count() * network.node_cost(s.node);
  }
  return total;
}

std::string Solution::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < seeds_.size(); ++i) {
    if (i > 0) out << ", ";
    out << seeds_[i].node << ':' << seeds_[i].vector.to_string();
  }
  out << '}';
  return out.str();
}

void validate_solution(const Instance& instance, const Solution& solution,
                       SignRestriction signs) {
  for (const SeedAssignment& s : solution.assignments()) {
    instance.network().check_node(s.node);
    if (s.vector.candidate_count() != instance.candidate_count()) {
      throw StructuralError("message vector of seed " +
                            std::to_string(s.node) + " covers " +
                            std::to_string(s.vector.candidate_count()) +
                            " candidates, the instance has " +
                            std::to_string(instance.candidate_count()));
    }
    if (!permits(signs, s.vector.as_set())) {
      throw ArgumentError("seed " + std::to_string(s.node) +
                          " sends a message the sign restriction forbids");
    }
  }
}

LiveGraph::LiveGraph(const VoterNetwork& network,
                     std::vector<int> included_edges)
    : edges_(std::move(included_edges)) {
  std::sort(edges_.begin(), edges_.end());
  const int n = network.node_count();
  offsets_.assign(n + 1, 0);
  for (int e : edges_) ++offsets_[network.edge(e).from + 1];
  for (int v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  targets_.resize(edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (int e : edges_) targets_[cursor[network.edge(e).from]++] = network.edge(e).to;
}

LiveGraph LiveGraph::full(const VoterNetwork& network) {
  std::vector<int> all(network.edge_count());
  for (int e = 0; e < network.edge_count(); ++e) all[e] = e;
  return LiveGraph(network, std::move(all));
}

LiveGraph sample_live_graph_ic(const VoterNetwork& network, Rng& rng) {
  std::vector<int> kept;
  for (int e = 0; e < network.edge_count(); ++e) {
    const double p = network.edge(e).p;
    if (p >= 1.0 || uniform01(rng) < p) kept.push_back(e);
  }
  return LiveGraph(network, std::move(kept));
}

LiveGraph sample_live_graph_lt(const VoterNetwork& network, Rng& rng) {
  network.require_lt_weights();
  std::vector<int> kept;
  for (NodeId v = 0; v < network.node_count(); ++v) {
    const auto in = network.in_edges(v);
    if (in.empty()) continue;
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (int e : in) {
      cumulative += *network.edge(e).lt_weight;
      if (u < cumulative) {
        kept.push_back(e);
        break;
      }
    }
  }
  return LiveGraph(network, std::move(kept));
}

LiveGraph sample_live_graph(const VoterNetwork& network, DiffusionModel model,
                            Rng& rng) {
  return model == DiffusionModel::kIndependentCascade
             ? sample_live_graph_ic(network, rng)
             : sample_live_graph_lt(network, rng);
}

std::vector<char> reachable(std::span<const NodeId> sources,
                            const LiveGraph& live) {
  std::vector<char> seen(live.node_count(), 0);
  std::vector<NodeId> stack;
  for (NodeId s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : live.successors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

namespace {

void check_live_graph(const Instance& instance, const LiveGraph& live) {
  if (live.node_count() != instance.node_count()) {
    throw StructuralError("live graph does not match the instance");
  }
}

DiffusionOutcome finish(const Instance& instance,
                        std::vector<MessageSet> received,
                        const RevisionRule& rule) {
  DiffusionOutcome out;
  out.final_rankings.reserve(received.size());
  for (NodeId v = 0; v < instance.node_count(); ++v) {
    out.final_rankings.push_back(
        revise(rule, instance.ranking(v), received[v]));
  }
  out.received = std::move(received);
  out.final_tally = tally(instance, out.final_rankings);
  out.mov = margin_of_victory(out.final_tally);
  out.delta_mov =
      delta_mov(out.mov,
                margin_of_victory(tally(instance, instance.rankings())));
  out.favored_wins = out.mov > 0;
  return out;
}

}  // namespace

std::vector<MessageSet> received_messages(const Instance& instance,
                                          const Solution& solution,
                                          const LiveGraph& live, bool bribed) {
  validate_solution(instance, solution);
  check_live_graph(instance, live);
  std::vector<MessageSet> received(instance.node_count());
  for (const SeedAssignment& s : solution.assignments()) {
    const NodeId source[] = {s.node};
    const std::vector<char> seen = reachable(source, live);
    for (NodeId v = 0; v < instance.node_count(); ++v) {
      if (seen[v]) received[v] |= s.vector.as_set();
    }
  }
  if (bribed) {
    for (const SeedAssignment& s : solution.assignments()) {
      received[s.node] = s.vector.as_set();
    }
  }
  return received;
}

DiffusionOutcome diffuse(const Instance& instance, const Solution& solution,
                         const LiveGraph& live, const RevisionRule& rule,
                         bool bribed) {
  return finish(instance, received_messages(instance, solution, live, bribed),
                rule);
}

DiffusionOutcome diffuse_timed(const Instance& instance,
                               const Solution& solution, const LiveGraph& live,
                               const RevisionRule& rule, bool bribed) {
  validate_solution(instance, solution);
  check_live_graph(instance, live);
  const int n = instance.node_count();
  std::vector<MessageSet> received(n);
  for (int c = 0; c < instance.candidate_count(); ++c) {
    for (MessageSign sign : {MessageSign::kPositive, MessageSign::kNegative}) {
      const Message message{CandidateId{c}, sign};
      // A^0: seeds holding the message.
      std::vector<NodeId> frontier;
      std::vector<char> ever(n, 0);
      for (const SeedAssignment& s : solution.assignments()) {
        if (s.vector.as_set().contains(message)) {
          frontier.push_back(s.node);
          ever[s.node] = 1;
        }
      }
      while (!frontier.empty()) {
        std::vector<NodeId> next;
        for (NodeId u : frontier) {
          for (NodeId w : live.successors(u)) {
            if (!ever[w]) {
              ever[w] = 1;
              next.push_back(w);
            }
          }
        }
        frontier = std::move(next);
      }
      for (NodeId v = 0; v < n; ++v) {
        if (ever[v]) received[v].insert(message);
      }
    }
  }
  if (bribed) {
    for (const SeedAssignment& s : solution.assignments()) {
      received[s.node] = s.vector.as_set();
    }
  }
  return finish(instance, std::move(received), rule);
}

int influence(std::span<const NodeId> seeds, const LiveGraph& live) {
  const std::vector<char> seen = reachable(seeds, live);
  return static_cast<int>(std::count(seen.begin(), seen.end(), 1));
}

}  // namespace mivote
