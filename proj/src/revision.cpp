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

#include "mivote/revision.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mivote/errors.hpp"

namespace mivote {
namespace {

constexpr std::uint64_t kPositiveBits = 0x5555555555555555ULL;

// Rankings packed four bits per position, position 0 in the most significant
// used nibble, so numeric order matches lexicographic order.
using Packed = std::uint64_t;

constexpr int kMaxPackedCandidates = 16;

Packed pack(const Ranking& r) {
  Packed p = 0;
  for (CandidateId c : r.order()) p = (p << 4) | static_cast<Packed>(c.index);
  return p;
}

Ranking unpack(Packed p, int n) {
  std::vector<int> indices(n);
  for (int i = n - 1; i >= 0; --i) {
    indices[i] = static_cast<int>(p & 0xF);
    p >>= 4;
  }
  return Ranking::from_indices(indices);
}

int packed_at(Packed p, int n, int position) {
  return static_cast<int>((p >> (4 * (n - 1 - position))) & 0xF);
}

int packed_position(Packed p, int n, int c) {
  for (int i = 0; i < n; ++i) {
    if (packed_at(p, n, i) == c) return i;
  }
  return -1;
}

Packed packed_swap(Packed p, int n, int i, int j) {
  const int si = 4 * (n - 1 - i);
  const int sj = 4 * (n - 1 - j);
  const Packed a = (p >> si) & 0xF;
  const Packed b = (p >> sj) & 0xF;
  p &= ~((Packed{0xF} << si) | (Packed{0xF} << sj));
  return p | (b << si) | (a << sj);
}

Packed packed_apply(Packed p, int n, Message m) {
  const int pos = packed_position(p, n, m.candidate.index);
  if (m.sign == MessageSign::kPositive) {
    return pos > 0 ? packed_swap(p, n, pos - 1, pos) : p;
  }
  return pos < n - 1 ? packed_swap(p, n, pos, pos + 1) : p;
}

void check_messages(const Ranking& ranking, MessageSet messages) {
  const int n = ranking.size();
  if (n > MessageSet::kMaxCandidates) {
    throw ArgumentError("too many candidates for a message set");
  }
  const std::uint64_t allowed =
      n >= 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * n)) - 1;
  if ((messages.bits() & ~allowed) != 0) {
    throw StructuralError("message refers to a candidate outside the ranking");
  }
}

// Sorted, duplicate-free packed outcomes of every application order.
std::vector<Packed> packed_orderings(const Ranking& ranking,
                                     MessageSet messages) {
  const int n = ranking.size();
  if (n > kMaxPackedCandidates) {
    throw CapacityError("ordering enumeration supports at most 16 candidates");
  }
  const std::vector<Message> list = messages.messages();
  const int k = static_cast<int>(list.size());
  std::vector<std::vector<Packed>> reach(std::size_t{1} << k);
  reach[0].push_back(pack(ranking));
  for (std::size_t mask = 1; mask < reach.size(); ++mask) {
    std::vector<Packed>& out = reach[mask];
    for (int i = 0; i < k; ++i) {
      if (!(mask & (std::size_t{1} << i))) continue;
      for (Packed p : reach[mask ^ (std::size_t{1} << i)]) {
        out.push_back(packed_apply(p, n, list[i]));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return reach.back();
}

int top_of(Packed p, int n) { return packed_at(p, n, 0); }

// Lexicographically smallest outcome whose top is `c`.
Ranking first_outcome_with_top(const std::vector<Packed>& outcomes, int n,
                               int c) {
  for (Packed p : outcomes) {
    if (top_of(p, n) == c) return unpack(p, n);
  }
  throw Error("internal: no ordering outcome with the chosen top");
}

Ranking revise_pessimistic(const Ranking& ranking, MessageSet messages) {
  const int n = ranking.size();
  const std::vector<Packed> outcomes = packed_orderings(ranking, messages);
  std::vector<int> tops;
  for (Packed p : outcomes) tops.push_back(top_of(p, n));
  std::sort(tops.begin(), tops.end());
  tops.erase(std::unique(tops.begin(), tops.end()), tops.end());

  std::vector<int> near;
  for (int c : tops) {
    if (ranking.position_of(CandidateId{c}) <= 1) near.push_back(c);
  }
  const std::vector<int>& pool = near.empty() ? tops : near;
  int best = pool.front();
  double best_score = -1e300;
  for (int c : pool) {
    const double s = score_with_messages(ranking, messages, CandidateId{c},
                                         RevisionRule::kDefaultEpsilon);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return first_outcome_with_top(outcomes, n, best);
}

Ranking revise_optimistic(const Ranking& ranking, MessageSet messages) {
  const int n = ranking.size();
  const std::vector<Packed> outcomes = packed_orderings(ranking, messages);
  int best = -1;
  int best_key = 0;
  int best_position = 0;
  for (Packed p : outcomes) {
    const int c = top_of(p, n);
    const int position = ranking.position_of(CandidateId{c});
    int key = n - position;
    if (messages.contains(CandidateId{c}, MessageSign::kPositive)) key += 1;
    if (messages.contains(CandidateId{c}, MessageSign::kNegative)) key -= 2;
    if (best < 0 || key > best_key ||
        (key == best_key && position > best_position)) {
      best = c;
      best_key = key;
      best_position = position;
    }
  }
  return first_outcome_with_top(outcomes, n, best);
}

Ranking revise_score(const Ranking& ranking, MessageSet messages,
                     double epsilon) {
  const int n = ranking.size();
  std::vector<CandidateId> order(ranking.order().begin(),
                                 ranking.order().end());
  std::vector<double> score(n);
  for (int c = 0; c < n; ++c) {
    score[c] = score_with_messages(ranking, messages, CandidateId{c}, epsilon);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](CandidateId a, CandidateId b) {
                     return score[a.index] > score[b.index];
                   });
  return Ranking(std::move(order));
}

}  // namespace

MessageSet::MessageSet(std::initializer_list<Message> messages) {
  for (const Message& m : messages) insert(m);
}

MessageSet MessageSet::full_promotion(int candidate_count) {
  MessageSet s;
  s.insert({kFavored, MessageSign::kPositive});
  for (int c = 1; c < candidate_count; ++c) {
    s.insert({CandidateId{c}, MessageSign::kNegative});
  }
  return s;
}

int MessageSet::size() const { return std::popcount(bits_); }

int MessageSet::positive_count() const {
  return std::popcount(bits_ & kPositiveBits);
}

int MessageSet::negative_count() const {
  return std::popcount(bits_ & ~kPositiveBits);
}

std::vector<Message> MessageSet::messages() const {
  std::vector<Message> out;
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    const int b = std::countr_zero(rest);
    out.push_back(Message{CandidateId{b / 2}, b % 2 == 0
                                                  ? MessageSign::kPositive
                                                  : MessageSign::kNegative});
  }
  return out;
}

std::string MessageSet::to_string(int candidate_count) const {
  const std::uint64_t pairs = bits_ & (bits_ >> 1) & kPositiveBits;
  std::string out;
  if (pairs == 0) {
    out = "(";
    for (int c = 0; c < candidate_count; ++c) {
      if (c > 0) out += ',';
      if (contains(CandidateId{c}, MessageSign::kPositive)) {
        out += '+';
      } else if (contains(CandidateId{c}, MessageSign::kNegative)) {
        out += '-';
      } else {
        out += '.';
      }
    }
    return out + ")";
  }
  out = "{";
  bool first = true;
  for (const Message& m : messages()) {
    if (!first) out += ',';
    first = false;
    out += 'c' + std::to_string(m.candidate.index);
    out += m.sign == MessageSign::kPositive ? '+' : '-';
  }
  return out + "}";
}

MessageSet cancel_pairs(MessageSet set) {
  const std::uint64_t b = set.bits();
  const std::uint64_t pairs = b & (b >> 1) & kPositiveBits;
  return MessageSet::from_bits(b & ~(pairs | (pairs << 1)));
}

bool permits(SignRestriction restriction, MessageSet set) {
  switch (restriction) {
    case SignRestriction::kBoth:
      return true;
    case SignRestriction::kPositiveOnly:
      return set.negative_count() == 0;
    case SignRestriction::kNegativeOnly:
      return set.positive_count() == 0;
  }
  return false;
}

CustomRuleTable::CustomRuleTable(int candidate_count)
    : candidate_count_(candidate_count) {
  if (candidate_count < 2 || candidate_count > kMaxPackedCandidates) {
    throw ArgumentError("custom rule tables need 2..16 candidates");
  }
}

void CustomRuleTable::set(const Ranking& ranking, MessageSet messages,
                          Ranking result) {
  if (ranking.size() != candidate_count_ || result.size() != candidate_count_) {
    throw StructuralError("rule table entry has the wrong candidate count");
  }
  check_messages(ranking, messages);
  if (cancel_pairs(messages) != messages) {
    throw StructuralError("rule table keys must not contain opposite pairs");
  }
  if (messages.size() < 2) {
    throw StructuralError(
        "rule table keys need at least two messages; smaller sets follow "
        "the single-message swap");
  }
  entries_.insert_or_assign({ranking, messages.bits()}, std::move(result));
}

const Ranking* CustomRuleTable::find(const Ranking& ranking,
                                     MessageSet messages) const {
  auto it = entries_.find({ranking, messages.bits()});
  return it == entries_.end() ? nullptr : &it->second;
}

bool CustomRuleTable::is_total() const {
  std::size_t keys_per_ranking = 0;
  for (int code = 0; code < message_vector_code_count(candidate_count_);
       ++code) {
    if (message_set_from_code(candidate_count_, code).size() >= 2) {
      ++keys_per_ranking;
    }
  }
  std::size_t rankings = 1;
  for (int i = 2; i <= candidate_count_; ++i) rankings *= i;
  return entries_.size() == rankings * keys_per_ranking;
}

RevisionRule RevisionRule::pessimistic() {
  return RevisionRule(Kind::kPessimistic, kDefaultEpsilon, nullptr);
}

RevisionRule RevisionRule::optimistic() {
  return RevisionRule(Kind::kOptimistic, kDefaultEpsilon, nullptr);
}

RevisionRule RevisionRule::score_based(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ArgumentError("score-based epsilon must lie in (0, 0.5)");
  }
  return RevisionRule(Kind::kScoreBased, epsilon, nullptr);
}

RevisionRule RevisionRule::custom(
    std::shared_ptr<const CustomRuleTable> table) {
  if (!table) throw ArgumentError("custom rule needs a table");
  return RevisionRule(Kind::kCustom, kDefaultEpsilon, std::move(table));
}

std::string RevisionRule::name() const {
  switch (kind_) {
    case Kind::kPessimistic:
      return "pessimistic";
    case Kind::kOptimistic:
      return "optimistic";
    case Kind::kScoreBased: {
      std::ostringstream out;
      out << "score:" << epsilon_;
      return out.str();
    }
    case Kind::kCustom:
      return "custom";
  }
  return "unknown";
}

Ranking apply_single(const Ranking& ranking, Message message) {
  const int n = ranking.size();
  if (message.candidate.index < 0 || message.candidate.index >= n) {
    throw StructuralError("message refers to a candidate outside the ranking");
  }
  const int pos = ranking.position_of(message.candidate);
  if (message.sign == MessageSign::kPositive) {
    return pos > 0 ? ranking.with_swapped(pos - 1, pos) : ranking;
  }
  return pos < n - 1 ? ranking.with_swapped(pos, pos + 1) : ranking;
}

std::set<Ranking> enumerate_orderings(const Ranking& ranking,
                                      MessageSet messages) {
  check_messages(ranking, messages);
  std::set<Ranking> out;
  for (Packed p : packed_orderings(ranking, cancel_pairs(messages))) {
    out.insert(unpack(p, ranking.size()));
  }
  return out;
}

double score_with_messages(const Ranking& ranking, MessageSet messages,
                           CandidateId c, double epsilon) {
  double s = ranking.size() - ranking.position_of(c);
  if (messages.contains(c, MessageSign::kPositive)) s += 1.0 + epsilon;
  if (messages.contains(c, MessageSign::kNegative)) s -= 1.0 + epsilon;
  return s;
}

Ranking revise(const RevisionRule& rule, const Ranking& ranking,
               MessageSet messages) {
  check_messages(ranking, messages);
  const MessageSet effective = cancel_pairs(messages);
  if (effective.empty()) return ranking;
  if (effective.size() == 1) {
    return apply_single(ranking, effective.messages().front());
  }
  switch (rule.kind()) {
    case RevisionRule::Kind::kPessimistic:
      return revise_pessimistic(ranking, effective);
    case RevisionRule::Kind::kOptimistic:
      return revise_optimistic(ranking, effective);
    case RevisionRule::Kind::kScoreBased:
      return revise_score(ranking, effective, rule.epsilon());
    case RevisionRule::Kind::kCustom: {
      if (rule.table()->candidate_count() != ranking.size()) {
        throw ArgumentError("custom rule table covers " +
                            std::to_string(rule.table()->candidate_count()) +
                            " candidates, ranking has " +
                            std::to_string(ranking.size()));
      }
      const Ranking* hit = rule.table()->find(ranking, effective);
      if (hit == nullptr) {
        throw RuleIncompleteError("custom rule has no entry for " +
                                  ranking.to_string() + " with " +
                                  effective.to_string(ranking.size()));
      }
      return *hit;
    }
  }
  throw Error("internal: unknown rule kind");
}

std::vector<Ranking> all_rankings(int candidate_count) {
  std::vector<int> indices(candidate_count);
  std::iota(indices.begin(), indices.end(), 0);
  std::vector<Ranking> out;
  do {
    out.push_back(Ranking::from_indices(indices));
  } while (std::next_permutation(indices.begin(), indices.end()));
  return out;
}

int message_vector_code_count(int candidate_count) {
  int count = 1;
  for (int i = 0; i < candidate_count; ++i) count *= 3;
  return count;
}

MessageSet message_set_from_code(int candidate_count, int code) {
  MessageSet s;
  for (int c = 0; c < candidate_count; ++c, code /= 3) {
    const int digit = code % 3;
    if (digit == 1) s.insert({CandidateId{c}, MessageSign::kPositive});
    if (digit == 2) s.insert({CandidateId{c}, MessageSign::kNegative});
  }
  return s;
}

int code_from_message_set(int candidate_count, MessageSet set) {
  int code = 0;
  for (int c = candidate_count - 1; c >= 0; --c) {
    code *= 3;
    if (set.contains(CandidateId{c}, MessageSign::kPositive)) {
      code += 1;
    } else if (set.contains(CandidateId{c}, MessageSign::kNegative)) {
      code += 2;
    }
  }
  return code;
}

std::string AxiomViolation::describe(int candidate_count) const {
  std::ostringstream out;
  out << "axiom " << axiom << ": ";
  if (axiom == 1) {
    out << ranking.to_string() << " with " << messages.to_string(candidate_count)
        << " tops c" << before.index << ", adding a negative message gives "
        << other_messages.to_string(candidate_count) << " which tops c"
        << after.index;
  } else {
    out << other_ranking.to_string() << " with "
        << messages.to_string(candidate_count) << " tops c" << before.index
        << " but the improved ranking " << ranking.to_string()
        << " tops c" << after.index;
  }
  return out.str();
}

namespace {

struct TopGrid {
  int n = 0;
  int codes = 0;
  std::vector<Ranking> rankings;
  std::map<Ranking, int> index;
  std::vector<std::uint8_t> tops;  // ranking * codes + code

  int top(int r, int code) const {
    return tops[static_cast<std::size_t>(r) * codes + code];
  }
};

TopGrid build_grid(const RevisionRule& rule, int n, int cap) {
  if (n < 2) throw ArgumentError("need at least two candidates");
  if (n > cap) {
    throw CapacityError("exhaustive rule analysis is capped at " +
                        std::to_string(cap) + " candidates");
  }
  TopGrid grid;
  grid.n = n;
  grid.codes = message_vector_code_count(n);
  grid.rankings = all_rankings(n);
  for (std::size_t i = 0; i < grid.rankings.size(); ++i) {
    grid.index.emplace(grid.rankings[i], static_cast<int>(i));
  }
  grid.tops.resize(grid.rankings.size() * grid.codes);
  for (std::size_t r = 0; r < grid.rankings.size(); ++r) {
    for (int code = 0; code < grid.codes; ++code) {
      grid.tops[r * grid.codes + code] = static_cast<std::uint8_t>(
          revise(rule, grid.rankings[r], message_set_from_code(n, code))
              .top()
              .index);
    }
  }
  return grid;
}

int digit_of(int code, int c) {
  for (int i = 0; i < c; ++i) code /= 3;
  return code % 3;
}

int power3(int c) {
  int p = 1;
  for (int i = 0; i < c; ++i) p *= 3;
  return p;
}

}  // namespace

AxiomReport check_axioms(const RevisionRule& rule, int candidate_count,
                         int exhaustive_cap, int max_examples) {
  const TopGrid grid = build_grid(rule, candidate_count, exhaustive_cap);
  const int n = candidate_count;
  AxiomReport report;
  auto record = [&](AxiomViolation v) {
    ++report.violation_count;
    if (static_cast<int>(report.examples.size()) < max_examples) {
      report.examples.push_back(std::move(v));
    }
  };

  // Axiom 1: a negative message about someone else never changes the top.
  // Adding (c,-) to a set holding (c,+) cancels the pair.
  for (std::size_t r = 0; r < grid.rankings.size(); ++r) {
    for (int code = 0; code < grid.codes; ++code) {
      const int before = grid.top(static_cast<int>(r), code);
      for (int c = 0; c < n; ++c) {
        if (c == before) continue;
        const int digit = digit_of(code, c);
        if (digit == 2) continue;
        const int other = digit == 0 ? code + 2 * power3(c) : code - power3(c);
        const int after = grid.top(static_cast<int>(r), other);
        if (after != before) {
          record(AxiomViolation{1, grid.rankings[r], grid.rankings[r],
                                message_set_from_code(n, code),
                                message_set_from_code(n, code) |
                                    MessageSet{{CandidateId{c},
                                                MessageSign::kNegative}},
                                CandidateId{before}, CandidateId{after}});
        }
      }
    }
  }

  // Axiom 2: ranking the winner higher from the start keeps it the winner.
  for (std::size_t r = 0; r < grid.rankings.size(); ++r) {
    const Ranking& worse = grid.rankings[r];
    for (int from = 1; from < n; ++from) {
      const CandidateId moved = worse.at(from);
      for (int to = 0; to < from; ++to) {
        std::vector<CandidateId> order(worse.order().begin(),
                                       worse.order().end());
        order.erase(order.begin() + from);
        order.insert(order.begin() + to, moved);
        const Ranking better(std::move(order));
        const int b = grid.index.at(better);
        for (int code = 0; code < grid.codes; ++code) {
          if (grid.top(static_cast<int>(r), code) != moved.index) continue;
          const int after = grid.top(b, code);
          if (after != moved.index) {
            const MessageSet m = message_set_from_code(n, code);
            record(AxiomViolation{2, better, worse, m, m, moved,
                                  CandidateId{after}});
          }
        }
      }
    }
  }
  return report;
}

bool is_least_candidate_manipulable(const RevisionRule& rule,
                                    int candidate_count) {
  if (candidate_count < 2) throw ArgumentError("need at least two candidates");
  const MessageSet full = MessageSet::full_promotion(candidate_count);
  std::vector<int> rest(candidate_count - 1);
  std::iota(rest.begin(), rest.end(), 1);
  do {
    std::vector<int> indices = rest;
    indices.push_back(0);
    if (revise(rule, Ranking::from_indices(indices), full).top() != kFavored) {
      return false;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return true;
}

std::optional<UniversalMessageSet> min_universal_message_set(
    const RevisionRule& rule, int candidate_count, SignRestriction signs,
    int exhaustive_cap) {
  const TopGrid grid = build_grid(rule, candidate_count, exhaustive_cap);
  std::vector<int> order(grid.codes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return message_set_from_code(candidate_count, a).size() <
           message_set_from_code(candidate_count, b).size();
  });
  for (int code : order) {
    const MessageSet m = message_set_from_code(candidate_count, code);
    if (m.empty() || !permits(signs, m)) continue;
    bool universal = true;
    for (std::size_t r = 0; r < grid.rankings.size() && universal; ++r) {
      universal = grid.top(static_cast<int>(r), code) == kFavored.index;
    }
    if (universal) return UniversalMessageSet{m.size(), m};
  }
  return std::nullopt;
}

TopTable::TopTable(const RevisionRule& rule, std::span<const Ranking> rankings,
                   int candidate_count)
    : rule_(rule), candidate_count_(candidate_count) {
  std::map<Ranking, int> slots;
  slot_of_node_.reserve(rankings.size());
  for (const Ranking& r : rankings) {
    auto [it, inserted] = slots.emplace(r, static_cast<int>(distinct_.size()));
    if (inserted) distinct_.push_back(r);
    slot_of_node_.push_back(it->second);
  }
  if (candidate_count_ > kMaxTabulatedCandidates) return;
  stride_ = std::size_t{1} << (2 * candidate_count_);
  table_.resize(distinct_.size() * stride_);
  // Masks that cancel to the same set share one revision call.
  std::vector<int> code_of_mask(stride_);
  for (std::size_t mask = 0; mask < stride_; ++mask) {
    code_of_mask[mask] = code_from_message_set(
        candidate_count_, cancel_pairs(MessageSet::from_bits(mask)));
  }
  const int codes = message_vector_code_count(candidate_count_);
  std::vector<std::uint8_t> by_code(codes);
  for (std::size_t s = 0; s < distinct_.size(); ++s) {
    for (int code = 0; code < codes; ++code) {
      by_code[code] = static_cast<std::uint8_t>(
          revise(rule_, distinct_[s],
                 message_set_from_code(candidate_count_, code))
              .top()
              .index);
    }
    for (std::size_t mask = 0; mask < stride_; ++mask) {
      table_[s * stride_ + mask] = by_code[code_of_mask[mask]];
    }
  }
}

CandidateId TopTable::top(int slot, std::uint64_t mask) const {
  if (!table_.empty()) {
    return CandidateId{table_[static_cast<std::size_t>(slot) * stride_ + mask]};
  }
  return revise(rule_, distinct_[slot], MessageSet::from_bits(mask)).top();
}

}  // namespace mivote
