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

#include "mivote/estimation.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "mivote/errors.hpp"
#include "parallel.hpp"

namespace mivote {
namespace {

constexpr double kProbabilitySlack = 1e-12;
constexpr int kMaxExactCap = 40;
// Precomputed reachability is skipped above this many 64-bit words.
constexpr std::size_t kMaxReachWords = std::size_t{1} << 25;

struct GraphMetrics {
  double delta_mov = 0.0;
  double favored_votes = 0.0;
  double influence = 0.0;
  double victory = 0.0;
};

double metric_for(const GraphMetrics& m, Objective::Kind kind) {
  switch (kind) {
    case Objective::Kind::kExpectedDeltaMov:
      return m.delta_mov;
    case Objective::Kind::kExpectedFavoredVotes:
      return m.favored_votes;
    case Objective::Kind::kExpectedInfluence:
      return m.influence;
    case Objective::Kind::kProbabilityOfVictory:
    case Objective::Kind::kVictoryAboveThreshold:
      return m.victory;
  }
  return 0.0;
}

GraphMetrics metrics_on(const Instance& instance, const Solution& solution,
                        const LiveGraph& live, const RevisionRule& rule,
                        bool bribed) {
  const DiffusionOutcome out = diffuse(instance, solution, live, rule, bribed);
  const std::vector<NodeId> seeds = solution.seeds();
  return GraphMetrics{static_cast<double>(out.delta_mov),
                      static_cast<double>(out.final_tally.votes(kFavored)),
                      static_cast<double>(influence(seeds, live)),
                      out.favored_wins ? 1.0 : 0.0};
}

Estimate finish_estimate(const Objective& objective, double value,
                         double std_error, std::int64_t replicates,
                         EstimationMode mode) {
  if (objective.kind == Objective::Kind::kVictoryAboveThreshold) {
    value = value + kProbabilitySlack >= objective.threshold ? 1.0 : 0.0;
  }
  return Estimate{value, std_error, replicates, mode};
}

}  // namespace

Objective Objective::victory_above_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ArgumentError("victory threshold must lie in [0, 1]");
  }
  return Objective{Kind::kVictoryAboveThreshold, t};
}

Objective Objective::parse(std::string_view text) {
  if (text == "delta-mov") return expected_delta_mov();
  if (text == "c0-votes") return expected_favored_votes();
  if (text == "influence") return expected_influence();
  if (text == "victory") return probability_of_victory();
  if (text.substr(0, 10) == "threshold:") {
    const std::string number(text.substr(10));
    char* end = nullptr;
    const double t = std::strtod(number.c_str(), &end);
    if (number.empty() || *end != '\0') {
      throw ArgumentError("bad victory threshold '" + number + "'");
    }
    return victory_above_threshold(t);
  }
  throw ArgumentError("unknown objective '" + std::string(text) + "'");
}

std::string Objective::name() const {
  switch (kind) {
    case Kind::kExpectedDeltaMov:
      return "delta-mov";
    case Kind::kExpectedFavoredVotes:
      return "c0-votes";
    case Kind::kExpectedInfluence:
      return "influence";
    case Kind::kProbabilityOfVictory:
      return "victory";
    case Kind::kVictoryAboveThreshold: {
      std::ostringstream out;
      out << "threshold:" << threshold;
      return out.str();
    }
  }
  return "unknown";
}

ExactLiveGraphSpace::ExactLiveGraphSpace(const VoterNetwork& network,
                                         DiffusionModel model, int exact_cap)
    : network_(&network), model_(model) {
  if (exact_cap < 0 || exact_cap > kMaxExactCap) {
    throw ArgumentError("exact cap must lie in 0..40");
  }
  if (model == DiffusionModel::kIndependentCascade) {
    for (int e = 0; e < network.edge_count(); ++e) {
      const double p = network.edge(e).p;
      if (p >= 1.0) {
        certain_.push_back(e);
      } else {
        digits_.push_back({Choice{e, p}, Choice{-1, 1.0 - p}});
      }
    }
  } else {
    network.require_lt_weights();
    for (NodeId v = 0; v < network.node_count(); ++v) {
      std::vector<Choice> options;
      double total = 0.0;
      for (int e : network.in_edges(v)) {
        const double w = *network.edge(e).lt_weight;
        total += w;
        if (w > 0.0) options.push_back(Choice{e, w});
      }
      const double none = 1.0 - total;
      if (none > kProbabilitySlack) options.push_back(Choice{-1, none});
      if (options.size() == 1) {
        if (options[0].edge >= 0) certain_.push_back(options[0].edge);
      } else if (options.size() > 1) {
        digits_.push_back(std::move(options));
      }
    }
  }
  for (const auto& digit : digits_) {
    log2_size_ += std::log2(static_cast<double>(digit.size()));
  }
  if (log2_size_ > exact_cap + 1e-9) {
    std::ostringstream msg;
    msg << "exact enumeration needs 2^" << log2_size_
        << " live graphs, above the cap 2^" << exact_cap;
    throw CapacityError(msg.str());
  }
  for (const auto& digit : digits_) size_ *= digit.size();
}

LiveGraph ExactLiveGraphSpace::graph(std::uint64_t index) const {
  std::vector<int> edges = certain_;
  for (const auto& digit : digits_) {
    const Choice& c = digit[index % digit.size()];
    index /= digit.size();
    if (c.edge >= 0) edges.push_back(c.edge);
  }
  return LiveGraph(*network_, std::move(edges));
}

double ExactLiveGraphSpace::probability(std::uint64_t index) const {
  double p = 1.0;
  for (const auto& digit : digits_) {
    p *= digit[index % digit.size()].probability;
    index /= digit.size();
  }
  return p;
}

bool exact_feasible(const VoterNetwork& network, DiffusionModel model,
                    int exact_cap) {
  try {
    ExactLiveGraphSpace space(network, model, exact_cap);
    return true;
  } catch (const CapacityError&) {
    return false;
  }
}

int baseline_mov(const Instance& instance) {
  return margin_of_victory(tally(instance, instance.rankings()));
}

Estimate estimate(const Instance& instance, const Solution& solution,
                  const RevisionRule& rule, const Objective& objective,
                  const EstimatorConfig& config) {
  validate_solution(instance, solution);
  if (config.model == DiffusionModel::kLinearThreshold) {
    instance.network().require_lt_weights();
  }
  const int workers = resolve_workers(config.workers);

  if (config.mode == EstimationMode::kExact) {
    const ExactLiveGraphSpace space(instance.network(), config.model,
                                    config.exact_cap);
    std::vector<double> weighted(space.size());
    internal::parallel_chunks(
        space.size(), workers, [&](std::size_t begin, std::size_t end) {
          for (std::size_t i = begin; i < end; ++i) {
            const GraphMetrics m = metrics_on(instance, solution,
                                              space.graph(i), rule,
                                              config.bribed);
            weighted[i] = space.probability(i) * metric_for(m, objective.kind);
          }
        });
    return finish_estimate(objective, pairwise_sum(weighted), 0.0,
                           static_cast<std::int64_t>(space.size()),
                           EstimationMode::kExact);
  }

  if (config.replicates < 1) {
    throw ArgumentError("Monte Carlo needs at least one replicate");
  }
  std::vector<double> values(config.replicates);
  internal::parallel_chunks(
      values.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          Rng rng(derive_seed(config.master_seed, i));
          const LiveGraph live =
              sample_live_graph(instance.network(), config.model, rng);
          values[i] = metric_for(
              metrics_on(instance, solution, live, rule, config.bribed),
              objective.kind);
        }
      });
  internal::Welford stats;
  for (double v : values) stats.add(v);
  return finish_estimate(objective, pairwise_sum(values) / values.size(),
                         stats.std_error(), config.replicates,
                         EstimationMode::kMonteCarlo);
}

LiveGraphEnsemble LiveGraphEnsemble::exact(const VoterNetwork& network,
                                           DiffusionModel model,
                                           int exact_cap) {
  const ExactLiveGraphSpace space(network, model, exact_cap);
  LiveGraphEnsemble out;
  out.mode_ = EstimationMode::kExact;
  out.node_count_ = network.node_count();
  out.weights_.reserve(space.size());
  out.graphs_.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    out.weights_.push_back(space.probability(i));
    out.graphs_.push_back(space.graph(i));
  }
  out.finalize();
  return out;
}

LiveGraphEnsemble LiveGraphEnsemble::sampled(const VoterNetwork& network,
                                             DiffusionModel model,
                                             int replicates,
                                             std::uint64_t master_seed) {
  if (replicates < 1) {
    throw ArgumentError("Monte Carlo needs at least one replicate");
  }
  if (model == DiffusionModel::kLinearThreshold) network.require_lt_weights();
  LiveGraphEnsemble out;
  out.mode_ = EstimationMode::kMonteCarlo;
  out.node_count_ = network.node_count();
  out.weights_.assign(replicates, 1.0 / replicates);
  out.graphs_.reserve(replicates);
  for (int i = 0; i < replicates; ++i) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    out.graphs_.push_back(sample_live_graph(network, model, rng));
  }
  out.finalize();
  return out;
}

namespace {

void fill_reach(const LiveGraph& graph, NodeId source, int words,
                std::uint64_t* out) {
  std::fill(out, out + words, 0);
  const NodeId sources[] = {source};
  const std::vector<char> seen = reachable(sources, graph);
  for (NodeId v = 0; v < static_cast<NodeId>(seen.size()); ++v) {
    if (seen[v]) out[v / 64] |= std::uint64_t{1} << (v % 64);
  }
}

}  // namespace

void LiveGraphEnsemble::finalize() {
  words_ = std::max(1, (node_count_ + 63) / 64);
  const std::size_t total =
      weights_.size() * static_cast<std::size_t>(node_count_) * words_;
  if (total > kMaxReachWords) return;
  reach_.assign(total, 0);
  for (std::size_t g = 0; g < graphs_.size(); ++g) {
    for (NodeId s = 0; s < node_count_; ++s) {
      fill_reach(graphs_[g], s, words_,
                 reach_.data() + (g * node_count_ + s) * words_);
    }
  }
  graphs_.clear();
  graphs_.shrink_to_fit();
}

const std::uint64_t* LiveGraphEnsemble::reach(
    std::size_t g, NodeId source, std::vector<std::uint64_t>& scratch) const {
  if (!reach_.empty()) {
    return reach_.data() +
           (g * static_cast<std::size_t>(node_count_) + source) * words_;
  }
  scratch.resize(words_);
  fill_reach(graphs_[g], source, words_, scratch.data());
  return scratch.data();
}

SolutionEvaluator::SolutionEvaluator(
    const Instance& instance, const RevisionRule& rule,
    std::shared_ptr<const LiveGraphEnsemble> ensemble, bool bribed)
    : instance_(&instance),
      rule_(rule),
      ensemble_(std::move(ensemble)),
      bribed_(bribed),
      tops_(rule, instance.rankings(), instance.candidate_count()),
      baseline_(baseline_mov(instance)) {
  if (ensemble_->node_count() != instance.node_count()) {
    throw StructuralError("ensemble does not match the instance");
  }
}

EvaluationSummary SolutionEvaluator::evaluate(const Solution& solution) const {
  validate_solution(*instance_, solution);
  const int n = instance_->node_count();
  const int words = ensemble_->words();
  const int candidates = instance_->candidate_count();
  const bool monte_carlo = ensemble_->mode() == EstimationMode::kMonteCarlo;

  std::vector<std::uint64_t> masks(n);
  std::vector<std::uint64_t> covered(words);
  std::vector<std::uint64_t> scratch;
  std::vector<int> votes(candidates);
  internal::StableSum delta_sum, favored_sum, runner_sum, influence_sum,
      victory_sum;
  internal::Welford delta_stats, favored_stats, influence_stats,
      victory_stats;

  for (std::size_t g = 0; g < ensemble_->size(); ++g) {
    std::fill(masks.begin(), masks.end(), 0);
    std::fill(covered.begin(), covered.end(), 0);
    for (const SeedAssignment& s : solution.assignments()) {
      const std::uint64_t* r = ensemble_->reach(g, s.node, scratch);
      const std::uint64_t bits = s.vector.as_set().bits();
      for (int w = 0; w < words; ++w) {
        covered[w] |= r[w];
        for (std::uint64_t rest = r[w]; rest != 0; rest &= rest - 1) {
          masks[w * 64 + std::countr_zero(rest)] |= bits;
        }
      }
    }
    if (bribed_) {
      for (const SeedAssignment& s : solution.assignments()) {
        masks[s.node] = s.vector.as_set().bits();
      }
    }
    std::fill(votes.begin(), votes.end(), 0);
    for (NodeId v = 0; v < n; ++v) {
      ++votes[tops_.top(tops_.slot(v), masks[v]).index];
    }
    int runner = votes[1];
    for (int c = 2; c < candidates; ++c) runner = std::max(runner, votes[c]);
    int reached = 0;
    for (std::uint64_t w : covered) reached += std::popcount(w);

    const double delta = votes[0] - runner - baseline_;
    const double victory = votes[0] > runner ? 1.0 : 0.0;
    const double weight = ensemble_->weight(g);
    delta_sum.add(weight * delta);
    favored_sum.add(weight * votes[0]);
    runner_sum.add(weight * runner);
    influence_sum.add(weight * reached);
    victory_sum.add(weight * victory);
    if (monte_carlo) {
      delta_stats.add(delta);
      favored_stats.add(votes[0]);
      influence_stats.add(reached);
      victory_stats.add(victory);
    }
  }

  EvaluationSummary out;
  out.delta_mov = delta_sum.value();
  out.favored_votes = favored_sum.value();
  out.runner_up_votes = runner_sum.value();
  out.influence = influence_sum.value();
  out.victory = victory_sum.value();
  if (monte_carlo) {
    out.delta_mov_se = delta_stats.std_error();
    out.favored_votes_se = favored_stats.std_error();
    out.influence_se = influence_stats.std_error();
    out.victory_se = victory_stats.std_error();
  }
  return out;
}

Estimate SolutionEvaluator::evaluate(const Solution& solution,
                                     const Objective& objective) const {
  const EvaluationSummary s = evaluate(solution);
  double value = 0.0;
  double se = 0.0;
  switch (objective.kind) {
    case Objective::Kind::kExpectedDeltaMov:
      value = s.delta_mov;
      se = s.delta_mov_se;
      break;
    case Objective::Kind::kExpectedFavoredVotes:
      value = s.favored_votes;
      se = s.favored_votes_se;
      break;
    case Objective::Kind::kExpectedInfluence:
      value = s.influence;
      se = s.influence_se;
      break;
    case Objective::Kind::kProbabilityOfVictory:
    case Objective::Kind::kVictoryAboveThreshold:
      value = s.victory;
      se = s.victory_se;
      break;
  }
  return finish_estimate(objective, value, se,
                         static_cast<std::int64_t>(ensemble_->size()),
                         ensemble_->mode());
}

double SolutionEvaluator::expected_influence(
    std::span<const NodeId> seeds) const {
  const int words = ensemble_->words();
  std::vector<std::uint64_t> covered(words);
  std::vector<std::uint64_t> scratch;
  internal::StableSum total;
  for (std::size_t g = 0; g < ensemble_->size(); ++g) {
    std::fill(covered.begin(), covered.end(), 0);
    for (NodeId s : seeds) {
      instance_->network().check_node(s);
      const std::uint64_t* r = ensemble_->reach(g, s, scratch);
      for (int w = 0; w < words; ++w) covered[w] |= r[w];
    }
    int reached = 0;
    for (std::uint64_t w : covered) reached += std::popcount(w);
    total.add(ensemble_->weight(g) * reached);
  }
  return total.value();
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIVOTE_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace mivote
