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

#ifndef MIVOTE_OPTIMIZE_HPP_
#define MIVOTE_OPTIMIZE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mivote/diffusion.hpp"
#include "mivote/estimation.hpp"
#include "mivote/model.hpp"
#include "mivote/revision.hpp"

namespace mivote {

struct OptimizerConfig {
  // Message budget: sum of |I(s)|.
  int budget = 1;
  // When set, sum of |I(s)| * w(s) replaces the message budget.
  std::optional<double> cost_budget;
  SignRestriction signs = SignRestriction::kBoth;
  RevisionRule rule = RevisionRule::pessimistic();
  DiffusionModel model = DiffusionModel::kIndependentCascade;
  bool bribed = false;
  // Unset: exact when the live-graph space fits under exact_cap, otherwise
  // Monte Carlo with `replicates` samples.
  std::optional<EstimationMode> mode;
  int replicates = 1000;
  std::uint64_t master_seed = 1;
  int exact_cap = 20;
  int workers = 1;
};

std::shared_ptr<const LiveGraphEnsemble> make_ensemble(
    const Instance& instance, const OptimizerConfig& config);
SolutionEvaluator make_evaluator(const Instance& instance,
                                 const OptimizerConfig& config);

struct GreedySeeds {
  std::vector<NodeId> seeds;
  // Gain in expected influence of each pick, in selection order.
  std::vector<double> marginal_gains;
  double expected_influence = 0.0;
};

// Lazy greedy maximization of expected influence; ties go to the lowest id.
// Stops early once no node adds influence.
GreedySeeds greedy_influence_seeds(const SolutionEvaluator& evaluator, int k);

// ((B - tau + 1) / (2 tau B)) (1 - 1/e).
double approximation_ratio(int budget, int tau);

struct UniversalGreedyResult {
  Solution solution;
  UniversalMessageSet universal;
  GreedySeeds seeds;
  double ratio = 0.0;
};

// Picks floor(B / tau) seeds by greedy influence maximization and lets each
// send a smallest universal message set. Throws InapplicableError when the
// rule admits no universal set under the sign restriction.
UniversalGreedyResult universal_message_greedy(const Instance& instance,
                                               const OptimizerConfig& config);

struct BudgetedResult {
  Solution solution;
  std::vector<NodeId> seeds;
  double expected_influence = 0.0;
  double spent = 0.0;
  bool singleton_won = false;
  int tau = 0;
  std::optional<std::string> warning;
};

// Cost-benefit greedy over node costs, compared against the best affordable
// single seed. Each seed spends tau * w(s) of config.cost_budget (or of
// config.budget when no cost budget is set).
BudgetedResult budgeted_greedy(const Instance& instance,
                               const OptimizerConfig& config);

struct FrontierEntry {
  NodeId node = 0;
  MessageVector vector;
  double gain_mov = 0.0;
  double gain_favored_votes = 0.0;
  // Expected drop in the strongest rival's votes.
  double gain_runner_up_loss = 0.0;
};

enum class FrontierCriterion {
  // Expected MoV or expected c0 votes go up.
  kMovOrFavoredVotes,
  // The strongest rival expects to lose votes.
  kRunnerUpLoses,
};

// Single additions (s, I(s)) to `current` that fit the remaining budget and
// improve the criterion.
std::vector<FrontierEntry> frontier(
    const SolutionEvaluator& evaluator, const Solution& current,
    const OptimizerConfig& config,
    FrontierCriterion criterion = FrontierCriterion::kMovOrFavoredVotes);
std::vector<FrontierEntry> frontier(
    const Instance& instance, const Solution& current,
    const OptimizerConfig& config,
    FrontierCriterion criterion = FrontierCriterion::kMovOrFavoredVotes);

// Index of the chosen entry in a non-empty frontier.
using SelectionPolicy =
    std::function<std::size_t(std::span<const FrontierEntry>)>;

// Largest MoV gain, then largest c0-vote gain, then lowest node id, then
// lowest vector code.
SelectionPolicy max_gain_policy();
// Largest expected loss for the strongest rival, then as max_gain_policy.
SelectionPolicy runner_up_policy();

struct GreedyLoopResult {
  Solution solution;
  std::vector<FrontierEntry> steps;
  double expected_delta_mov = 0.0;
};

GreedyLoopResult greedy_approach_loop(
    const Instance& instance, const OptimizerConfig& config,
    const SelectionPolicy& policy = max_gain_policy(),
    FrontierCriterion criterion = FrontierCriterion::kMovOrFavoredVotes);

}  // namespace mivote

#endif  // MIVOTE_OPTIMIZE_HPP_
