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

#include "mivote/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "mivote/errors.hpp"
#include "parallel.hpp"

namespace mivote {
namespace {

constexpr double kTolerance = 1e-9;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTolerance * std::max(1.0, std::abs(a));
}

// Expected influence bookkeeping for greedy selection.
class CoverageState {
 public:
  explicit CoverageState(const SolutionEvaluator& evaluator)
      : ensemble_(evaluator.ensemble()),
        covered_(ensemble_.size() * ensemble_.words(), 0) {}

  double gain(NodeId v) const {
    const int words = ensemble_.words();
    internal::StableSum total;
    for (std::size_t g = 0; g < ensemble_.size(); ++g) {
      const std::uint64_t* r = ensemble_.reach(g, v, scratch_);
      const std::uint64_t* c = covered_.data() + g * words;
      int fresh = 0;
      for (int w = 0; w < words; ++w) fresh += std::popcount(r[w] & ~c[w]);
      if (fresh != 0) total.add(ensemble_.weight(g) * fresh);
    }
    return total.value();
  }

  void add(NodeId v) {
    const int words = ensemble_.words();
    for (std::size_t g = 0; g < ensemble_.size(); ++g) {
      const std::uint64_t* r = ensemble_.reach(g, v, scratch_);
      std::uint64_t* c = covered_.data() + g * words;
      for (int w = 0; w < words; ++w) c[w] |= r[w];
    }
  }

 private:
  const LiveGraphEnsemble& ensemble_;
  std::vector<std::uint64_t> covered_;
  mutable std::vector<std::uint64_t> scratch_;
};

UniversalMessageSet universal_set_or_throw(const Instance& instance,
                                           const OptimizerConfig& config) {
  const auto universal = min_universal_message_set(
      config.rule, instance.candidate_count(), config.signs);
  if (!universal) {
    throw InapplicableError(
        "rule " + config.rule.name() + " with " +
        std::to_string(instance.candidate_count()) +
        " candidates has no message set that makes c0 everyone's top choice");
  }
  return *universal;
}

double remaining_budget(const Instance& instance, const Solution& current,
                        const OptimizerConfig& config) {
  if (config.cost_budget) {
    return *config.cost_budget - current.cost(instance.network());
  }
  return config.budget - current.message_count();
}

double seed_cost(const Instance& instance, NodeId v, int messages,
                 const OptimizerConfig& config) {
  return config.cost_budget ? messages * instance.network().node_cost(v)
                            : messages;
}

bool better_entry(const FrontierEntry& a, const FrontierEntry& b) {
  if (!nearly_equal(a.gain_mov, b.gain_mov)) return a.gain_mov > b.gain_mov;
  if (!nearly_equal(a.gain_favored_votes, b.gain_favored_votes)) {
    return a.gain_favored_votes > b.gain_favored_votes;
  }
  if (a.node != b.node) return a.node < b.node;
  return a.vector.code() < b.vector.code();
}

}  // namespace

std::shared_ptr<const LiveGraphEnsemble> make_ensemble(
    const Instance& instance, const OptimizerConfig& config) {
  const VoterNetwork& network = instance.network();
  EstimationMode mode = EstimationMode::kMonteCarlo;
  if (config.mode) {
    mode = *config.mode;
  } else if (exact_feasible(network, config.model, config.exact_cap)) {
    mode = EstimationMode::kExact;
  }
  if (mode == EstimationMode::kExact) {
    return std::make_shared<const LiveGraphEnsemble>(
        LiveGraphEnsemble::exact(network, config.model, config.exact_cap));
  }
  return std::make_shared<const LiveGraphEnsemble>(LiveGraphEnsemble::sampled(
      network, config.model, config.replicates, config.master_seed));
}

SolutionEvaluator make_evaluator(const Instance& instance,
                                 const OptimizerConfig& config) {
  return SolutionEvaluator(instance, config.rule,
                           make_ensemble(instance, config), config.bribed);
}

GreedySeeds greedy_influence_seeds(const SolutionEvaluator& evaluator, int k) {
  if (k < 0) throw ArgumentError("seed count must be non-negative");
  const int n = evaluator.instance().node_count();
  k = std::min(k, n);
  CoverageState state(evaluator);
  std::vector<double> bound(n);
  std::vector<int> fresh_round(n, 1);
  std::vector<char> chosen(n, 0);
  for (NodeId v = 0; v < n; ++v) bound[v] = state.gain(v);

  GreedySeeds out;
  for (int round = 0; round < k; ++round) {
    // Lazy evaluation: bounds only shrink, so the largest fresh bound is the
    // true maximum. Every other node within tolerance of it is refreshed so
    // ties resolve to the lowest id.
    auto argmax = [&] {
      NodeId best = -1;
      for (NodeId v = 0; v < n; ++v) {
        if (chosen[v]) continue;
        if (best < 0 || bound[v] > bound[best] + kTolerance) best = v;
      }
      return best;
    };
    NodeId best = argmax();
    while (best >= 0 && fresh_round[best] != round + 1) {
      bound[best] = state.gain(best);
      fresh_round[best] = round + 1;
      best = argmax();
    }
    if (best < 0) break;
    const double top = bound[best];
    // Everything is already reached; further seeds change nothing.
    if (top <= kTolerance) break;
    for (NodeId v = 0; v < n; ++v) {
      if (!chosen[v] && fresh_round[v] != round + 1 &&
          bound[v] >= top - kTolerance) {
        bound[v] = state.gain(v);
        fresh_round[v] = round + 1;
      }
    }
    NodeId pick = -1;
    for (NodeId v = 0; v < n && pick < 0; ++v) {
      if (!chosen[v] && fresh_round[v] == round + 1 &&
          bound[v] >= top - kTolerance) {
        pick = v;
      }
    }
    chosen[pick] = 1;
    state.add(pick);
    out.seeds.push_back(pick);
    out.marginal_gains.push_back(bound[pick]);
  }
  out.expected_influence = evaluator.expected_influence(out.seeds);
  return out;
}

double approximation_ratio(int budget, int tau) {
  if (budget < 1 || tau < 1) {
    throw ArgumentError("budget and tau must be positive");
  }
  return static_cast<double>(budget - tau + 1) / (2.0 * tau * budget) *
         (1.0 - 1.0 / std::numbers::e);
}

UniversalGreedyResult universal_message_greedy(const Instance& instance,
                                               const OptimizerConfig& config) {
  if (config.budget < 1) throw ArgumentError("budget must be positive");
  UniversalGreedyResult out;
  out.universal = universal_set_or_throw(instance, config);
  out.ratio = approximation_ratio(config.budget, out.universal.tau);
  const SolutionEvaluator evaluator = make_evaluator(instance, config);
  out.seeds = greedy_influence_seeds(evaluator,
                                     config.budget / out.universal.tau);
  const MessageVector vector = MessageVector::from_set(
      instance.candidate_count(), out.universal.messages);
  for (NodeId s : out.seeds.seeds) out.solution.assign(s, vector);
  return out;
}

BudgetedResult budgeted_greedy(const Instance& instance,
                               const OptimizerConfig& config) {
  const double budget =
      config.cost_budget ? *config.cost_budget : config.budget;
  if (!(budget >= 0.0)) throw ArgumentError("budget must be non-negative");
  BudgetedResult out;
  const UniversalMessageSet universal = universal_set_or_throw(instance, config);
  out.tau = universal.tau;
  const SolutionEvaluator evaluator = make_evaluator(instance, config);
  const int n = instance.node_count();
  auto price = [&](NodeId v) {
    return universal.tau * instance.network().node_cost(v);
  };

  // Cost-benefit pass.
  CoverageState state(evaluator);
  std::vector<char> chosen(n, 0);
  std::vector<NodeId> ratio_seeds;
  double remaining = budget;
  while (true) {
    NodeId best = -1;
    double best_ratio = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v] || price(v) > remaining + kTolerance) continue;
      const double ratio = state.gain(v) / price(v);
      if (ratio > kTolerance && (best < 0 || ratio > best_ratio + kTolerance)) {
        best = v;
        best_ratio = ratio;
      }
    }
    if (best < 0) break;
    chosen[best] = 1;
    state.add(best);
    ratio_seeds.push_back(best);
    remaining -= price(best);
  }
  const double ratio_influence = evaluator.expected_influence(ratio_seeds);

  // Best single affordable seed.
  NodeId single = -1;
  double single_influence = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    if (price(v) > budget + kTolerance) continue;
    const NodeId one[] = {v};
    const double value = evaluator.expected_influence(one);
    if (single < 0 || value > single_influence + kTolerance) {
      single = v;
      single_influence = value;
    }
  }
  if (single < 0) {
    out.warning = "budget is below the cheapest seed cost; returning no seeds";
    return out;
  }

  if (single_influence > ratio_influence + kTolerance) {
    out.seeds = {single};
    out.expected_influence = single_influence;
    out.singleton_won = true;
  } else {
    out.seeds = ratio_seeds;
    out.expected_influence = ratio_influence;
  }
  const MessageVector vector =
      MessageVector::from_set(instance.candidate_count(), universal.messages);
  for (NodeId s : out.seeds) {
    out.solution.assign(s, vector);
    out.spent += price(s);
  }
  return out;
}

std::vector<FrontierEntry> frontier(const SolutionEvaluator& evaluator,
                                    const Solution& current,
                                    const OptimizerConfig& config,
                                    FrontierCriterion criterion) {
  const Instance& instance = evaluator.instance();
  validate_solution(instance, current, config.signs);
  const double remaining = remaining_budget(instance, current, config);
  std::vector<FrontierEntry> out;
  if (remaining < 1.0 - kTolerance && !config.cost_budget) return out;
  if (remaining <= kTolerance) return out;

  const int max_messages = instance.candidate_count();
  const std::vector<MessageVector> vectors = all_message_vectors(
      instance.candidate_count(), max_messages, config.signs);
  const EvaluationSummary base = evaluator.evaluate(current);

  struct Candidate {
    NodeId node;
    const MessageVector* vector;
  };
  std::vector<Candidate> candidates;
  for (NodeId v = 0; v < instance.node_count(); ++v) {
    if (current.contains(v)) continue;
    for (const MessageVector& m : vectors) {
      if (seed_cost(instance, v, m.count(), config) <= remaining + kTolerance) {
        candidates.push_back({v, &m});
      }
    }
  }
  std::vector<EvaluationSummary> results(candidates.size());
  internal::parallel_chunks(
      candidates.size(), resolve_workers(config.workers),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          results[i] = evaluator.evaluate(
              current.with(candidates[i].node, *candidates[i].vector));
        }
      });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    FrontierEntry entry;
    entry.node = candidates[i].node;
    entry.vector = *candidates[i].vector;
    const double base_mov = base.favored_votes - base.runner_up_votes;
    const double mov = results[i].favored_votes - results[i].runner_up_votes;
    entry.gain_mov = mov - base_mov;
    entry.gain_favored_votes = results[i].favored_votes - base.favored_votes;
    entry.gain_runner_up_loss =
        base.runner_up_votes - results[i].runner_up_votes;
    const bool qualifies =
        criterion == FrontierCriterion::kMovOrFavoredVotes
            ? entry.gain_mov > kTolerance ||
                  entry.gain_favored_votes > kTolerance
            : entry.gain_runner_up_loss > kTolerance;
    if (qualifies) out.push_back(std::move(entry));
  }
  return out;
}

std::vector<FrontierEntry> frontier(const Instance& instance,
                                    const Solution& current,
                                    const OptimizerConfig& config,
                                    FrontierCriterion criterion) {
  return frontier(make_evaluator(instance, config), current, config,
                  criterion);
}

SelectionPolicy max_gain_policy() {
  return [](std::span<const FrontierEntry> entries) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (better_entry(entries[i], entries[best])) best = i;
    }
    return best;
  };
}

SelectionPolicy runner_up_policy() {
  return [](std::span<const FrontierEntry> entries) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i) {
      const FrontierEntry& a = entries[i];
      const FrontierEntry& b = entries[best];
      if (!nearly_equal(a.gain_runner_up_loss, b.gain_runner_up_loss)) {
        if (a.gain_runner_up_loss > b.gain_runner_up_loss) best = i;
      } else if (better_entry(a, b)) {
        best = i;
      }
    }
    return best;
  };
}

GreedyLoopResult greedy_approach_loop(const Instance& instance,
                                      const OptimizerConfig& config,
                                      const SelectionPolicy& policy,
                                      FrontierCriterion criterion) {
  const SolutionEvaluator evaluator = make_evaluator(instance, config);
  GreedyLoopResult out;
  while (true) {
    const std::vector<FrontierEntry> options =
        frontier(evaluator, out.solution, config, criterion);
    if (options.empty()) break;
    const std::size_t pick = policy(options);
    if (pick >= options.size()) {
      throw ArgumentError("selection policy returned an invalid index");
    }
    out.solution.assign(options[pick].node, options[pick].vector);
    out.steps.push_back(options[pick]);
  }
  out.expected_delta_mov = evaluator.evaluate(out.solution).delta_mov;
  return out;
}

}  // namespace mivote
