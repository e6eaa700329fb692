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

#ifndef MIVOTE_ESTIMATION_HPP_
#define MIVOTE_ESTIMATION_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mivote/diffusion.hpp"
#include "mivote/model.hpp"
#include "mivote/revision.hpp"

namespace mivote {

struct Objective {
  enum class Kind {
    kExpectedDeltaMov,
    kExpectedFavoredVotes,
    kExpectedInfluence,
    kProbabilityOfVictory,
    kVictoryAboveThreshold,
  };

  Kind kind = Kind::kExpectedDeltaMov;
  // Only used by kVictoryAboveThreshold.
  double threshold = 0.5;

  static Objective expected_delta_mov() { return {Kind::kExpectedDeltaMov}; }
  static Objective expected_favored_votes() {
    return {Kind::kExpectedFavoredVotes};
  }
  static Objective expected_influence() { return {Kind::kExpectedInfluence}; }
  static Objective probability_of_victory() {
    return {Kind::kProbabilityOfVictory};
  }
  // Value 1 when P(c0 wins) >= t, else 0.
  static Objective victory_above_threshold(double t);

  // "delta-mov", "c0-votes", "influence", "victory", "threshold:T".
  static Objective parse(std::string_view text);
  std::string name() const;
};

enum class EstimationMode { kMonteCarlo, kExact };

struct Estimate {
  double value = 0.0;
  // Zero in exact mode.
  double std_error = 0.0;
  // Live graphs enumerated (exact) or sampled (Monte Carlo).
  std::int64_t replicates = 0;
  EstimationMode mode = EstimationMode::kExact;
};

struct EstimatorConfig {
  DiffusionModel model = DiffusionModel::kIndependentCascade;
  bool bribed = false;
  EstimationMode mode = EstimationMode::kExact;
  int replicates = 1000;
  std::uint64_t master_seed = 1;
  // Exact mode enumerates at most 2^exact_cap live graphs.
  int exact_cap = 20;
  // 0 reads MIVOTE_WORKERS, defaulting to 1.
  int workers = 1;
};

// Finite distribution over live graphs. IC edges with p = 1 and LT nodes with
// a single certain choice contribute no branching.
class ExactLiveGraphSpace {
 public:
  ExactLiveGraphSpace(const VoterNetwork& network, DiffusionModel model,
                      int exact_cap);

  std::uint64_t size() const { return size_; }
  LiveGraph graph(std::uint64_t index) const;
  double probability(std::uint64_t index) const;
  // log2 of the number of live graphs.
  double log2_size() const { return log2_size_; }

 private:
  struct Choice {
    int edge = -1;  // -1: no edge.
    double probability = 1.0;
  };

  const VoterNetwork* network_;
  DiffusionModel model_;
  std::vector<int> certain_;
  // IC: one two-way digit per uncertain edge. LT: one digit per node.
  std::vector<std::vector<Choice>> digits_;
  std::uint64_t size_ = 1;
  double log2_size_ = 0.0;
};

// True when exact enumeration fits under the cap.
bool exact_feasible(const VoterNetwork& network, DiffusionModel model,
                    int exact_cap);

int baseline_mov(const Instance& instance);

Estimate estimate(const Instance& instance, const Solution& solution,
                  const RevisionRule& rule, const Objective& objective,
                  const EstimatorConfig& config);

// Weighted set of live graphs with per-source reachability bitsets, shared
// by every solution evaluated against it. Monte Carlo ensembles reuse the
// same samples for all solutions.
class LiveGraphEnsemble {
 public:
  static LiveGraphEnsemble exact(const VoterNetwork& network,
                                 DiffusionModel model, int exact_cap);
  static LiveGraphEnsemble sampled(const VoterNetwork& network,
                                   DiffusionModel model, int replicates,
                                   std::uint64_t master_seed);

  EstimationMode mode() const { return mode_; }
  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t g) const { return weights_[g]; }
  int node_count() const { return node_count_; }
  // 64-bit words per node bitset.
  int words() const { return words_; }
  // Bitset of nodes reachable from `source` in graph `g`. `scratch` is used
  // when reachability was too large to precompute.
  const std::uint64_t* reach(std::size_t g, NodeId source,
                             std::vector<std::uint64_t>& scratch) const;
  bool precomputed() const { return !reach_.empty(); }

 private:
  LiveGraphEnsemble() = default;
  void finalize();

  EstimationMode mode_ = EstimationMode::kExact;
  int node_count_ = 0;
  int words_ = 1;
  std::vector<double> weights_;
  std::vector<LiveGraph> graphs_;
  std::vector<std::uint64_t> reach_;
};

struct EvaluationSummary {
  double delta_mov = 0.0;
  double favored_votes = 0.0;
  double runner_up_votes = 0.0;
  double influence = 0.0;
  double victory = 0.0;
  double delta_mov_se = 0.0;
  double favored_votes_se = 0.0;
  double influence_se = 0.0;
  double victory_se = 0.0;
};

// Fast evaluation of many solutions on one ensemble.
class SolutionEvaluator {
 public:
  SolutionEvaluator(const Instance& instance, const RevisionRule& rule,
                    std::shared_ptr<const LiveGraphEnsemble> ensemble,
                    bool bribed);

  EvaluationSummary evaluate(const Solution& solution) const;
  Estimate evaluate(const Solution& solution, const Objective& objective) const;
  double expected_influence(std::span<const NodeId> seeds) const;

  const Instance& instance() const { return *instance_; }
  const RevisionRule& rule() const { return rule_; }
  const LiveGraphEnsemble& ensemble() const { return *ensemble_; }
  const TopTable& tops() const { return tops_; }
  bool bribed() const { return bribed_; }
  int baseline() const { return baseline_; }

 private:
  const Instance* instance_;
  RevisionRule rule_;
  std::shared_ptr<const LiveGraphEnsemble> ensemble_;
  bool bribed_;
  TopTable tops_;
  int baseline_;
};

// Resolves a worker count of 0 through MIVOTE_WORKERS.
int resolve_workers(int requested);

// Sum by recursive halving.
double pairwise_sum(std::span<const double> values);

}  // namespace mivote

#endif  // MIVOTE_ESTIMATION_HPP_
