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

#ifndef MIVOTE_REVISION_HPP_
#define MIVOTE_REVISION_HPP_

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mivote/model.hpp"

namespace mivote {

enum class MessageSign : std::uint8_t { kPositive, kNegative };

struct Message {
  CandidateId candidate;
  MessageSign sign = MessageSign::kPositive;

  friend bool operator==(const Message&, const Message&) = default;
};

// Set of signed messages, stored as a bitmask: bit 2c is (c,+) and bit 2c+1
// is (c,-). Duplicates collapse.
class MessageSet {
 public:
  static constexpr int kMaxCandidates = 32;

  MessageSet() = default;
  MessageSet(std::initializer_list<Message> messages);
  static MessageSet from_bits(std::uint64_t bits) {
    MessageSet s;
    s.bits_ = bits;
    return s;
  }
  // {(c0,+)} together with (c,-) for every other candidate.
  static MessageSet full_promotion(int candidate_count);

  void insert(Message m) { bits_ |= bit(m); }
  bool contains(Message m) const { return (bits_ & bit(m)) != 0; }
  bool contains(CandidateId c, MessageSign s) const {
    return contains(Message{c, s});
  }
  int size() const;
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }
  // Ordered by candidate, positive before negative.
  std::vector<Message> messages() const;
  int positive_count() const;
  int negative_count() const;

  MessageSet& operator|=(MessageSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  friend MessageSet operator|(MessageSet a, MessageSet b) { return a |= b; }
  friend bool operator==(MessageSet, MessageSet) = default;

  // "(+,.,-)" when no candidate has both signs, "{c0+,c0-}" otherwise.
  std::string to_string(int candidate_count) const;

 private:
  static std::uint64_t bit(Message m) {
    return std::uint64_t{1}
           << (2 * m.candidate.index +
               (m.sign == MessageSign::kNegative ? 1 : 0));
  }

  std::uint64_t bits_ = 0;
};

// Drops (c,+) and (c,-) whenever both are present.
MessageSet cancel_pairs(MessageSet set);

enum class SignRestriction { kBoth, kPositiveOnly, kNegativeOnly };

bool permits(SignRestriction restriction, MessageSet set);

// Explicit (ranking, message set) -> ranking table over a fixed candidate
// count. Only sets with two or more messages are consulted; the empty set and
// singletons follow apply_single like every other rule.
class CustomRuleTable {
 public:
  explicit CustomRuleTable(int candidate_count);

  int candidate_count() const { return candidate_count_; }
  void set(const Ranking& ranking, MessageSet messages, Ranking result);
  const Ranking* find(const Ranking& ranking, MessageSet messages) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::pair<Ranking, std::uint64_t>, Ranking>& entries() const {
    return entries_;
  }
  // True when every ranking and every pair-free set of size >= 2 is covered.
  bool is_total() const;

 private:
  int candidate_count_;
  std::map<std::pair<Ranking, std::uint64_t>, Ranking> entries_;
};

class RevisionRule {
 public:
  enum class Kind { kPessimistic, kOptimistic, kScoreBased, kCustom };

  static constexpr double kDefaultEpsilon = 0.25;

  static RevisionRule pessimistic();
  static RevisionRule optimistic();
  // Requires 0 < epsilon < 0.5.
  static RevisionRule score_based(double epsilon = kDefaultEpsilon);
  static RevisionRule custom(std::shared_ptr<const CustomRuleTable> table);

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  const CustomRuleTable* table() const { return table_.get(); }
  std::string name() const;

 private:
  RevisionRule(Kind kind, double epsilon,
               std::shared_ptr<const CustomRuleTable> table)
      : kind_(kind), epsilon_(epsilon), table_(std::move(table)) {}

  Kind kind_;
  double epsilon_;
  std::shared_ptr<const CustomRuleTable> table_;
};

// One message: (c,+) swaps c with the candidate right above it, (c,-) with
// the one right below; no effect at the boundary.
Ranking apply_single(const Ranking& ranking, Message message);

// Every ranking reachable by applying the messages one at a time in some
// order. Pairs are cancelled first.
std::set<Ranking> enumerate_orderings(const Ranking& ranking,
                                      MessageSet messages);

// Score of candidate c: (n - position) plus (1 + epsilon) for (c,+) and
// minus (1 + epsilon) for (c,-).
double score_with_messages(const Ranking& ranking, MessageSet messages,
                           CandidateId c, double epsilon);

Ranking revise(const RevisionRule& rule, const Ranking& ranking,
               MessageSet messages);

// All n! rankings in lexicographic order.
std::vector<Ranking> all_rankings(int candidate_count);

// Pair-free message sets indexed by base-3 code: digit c is 0 (none),
// 1 (c,+) or 2 (c,-), least significant digit for c0.
int message_vector_code_count(int candidate_count);
MessageSet message_set_from_code(int candidate_count, int code);
int code_from_message_set(int candidate_count, MessageSet set);

struct AxiomViolation {
  int axiom = 0;
  Ranking ranking;
  Ranking other_ranking;
  MessageSet messages;
  MessageSet other_messages;
  CandidateId before;
  CandidateId after;

  std::string describe(int candidate_count) const;
};

struct AxiomReport {
  std::uint64_t violation_count = 0;
  std::vector<AxiomViolation> examples;

  bool ok() const { return violation_count == 0; }
};

// Exhaustive check of both rationality axioms. Throws CapacityError above
// `exhaustive_cap` candidates.
AxiomReport check_axioms(const RevisionRule& rule, int candidate_count,
                         int exhaustive_cap = 5, int max_examples = 16);

// Whether the full promotion set lifts c0 to the top of every ranking that
// lists it last.
bool is_least_candidate_manipulable(const RevisionRule& rule,
                                    int candidate_count);

struct UniversalMessageSet {
  int tau = 0;
  MessageSet messages;
};

// Smallest message set (allowed by `signs`) that puts c0 on top of every
// ranking. Ties go to the lowest base-3 code.
std::optional<UniversalMessageSet> min_universal_message_set(
    const RevisionRule& rule, int candidate_count,
    SignRestriction signs = SignRestriction::kBoth, int exhaustive_cap = 5);

// Precomputed top choice per (ranking, received bitmask) for the rankings of
// an instance. Masks may contain both signs of a candidate; cancellation is
// part of the lookup.
class TopTable {
 public:
  static constexpr int kMaxTabulatedCandidates = 6;

  TopTable(const RevisionRule& rule, std::span<const Ranking> rankings,
           int candidate_count);

  // Slot of node v's ranking.
  int slot(NodeId v) const { return slot_of_node_[v]; }
  CandidateId top(int slot, std::uint64_t mask) const;
  int candidate_count() const { return candidate_count_; }

 private:
  RevisionRule rule_;
  int candidate_count_;
  std::vector<Ranking> distinct_;
  std::vector<int> slot_of_node_;
  std::size_t stride_ = 0;
  std::vector<std::uint8_t> table_;
};

}  // namespace mivote

#endif  // MIVOTE_REVISION_HPP_
