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

#include "mivote/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>

#include "mivote/errors.hpp"
#include "parallel.hpp"

namespace mivote {
namespace {

constexpr double kTolerance = 1e-9;
constexpr double kCertain = 1.0 - 1e-12;

bool arc_certain(const Edge& e, DiffusionModel model) {
  if (model == DiffusionModel::kIndependentCascade) return e.p >= kCertain;
  return e.lt_weight && *e.lt_weight >= kCertain;
}

// Strongly connected components of the certain arcs (Kosaraju).
std::vector<int> certain_components(const Instance& instance,
                                    DiffusionModel model) {
  const VoterNetwork& g = instance.network();
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> order;
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto out = g.out_edges(v);
      bool pushed = false;
      while (next < out.size()) {
        const Edge& e = g.edge(out[next++]);
        if (arc_certain(e, model) && !seen[e.to]) {
          seen[e.to] = 1;
          stack.emplace_back(e.to, 0);
          pushed = true;
          break;
        }
      }
      if (!pushed) {
        order.push_back(stack.back().first);
        stack.pop_back();
      }
    }
  }
  std::vector<int> component(n, -1);
  int count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[*it] != -1) continue;
    std::vector<NodeId> stack{*it};
    component[*it] = count;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (int e : g.in_edges(v)) {
        const Edge& edge = g.edge(e);
        if (arc_certain(edge, model) && component[edge.from] == -1) {
          component[edge.from] = count;
          stack.push_back(edge.from);
        }
      }
    }
    ++count;
  }
  return component;
}

using ArcAttrs = std::tuple<NodeId, double, double>;

std::vector<ArcAttrs> neighbourhood(const VoterNetwork& g, NodeId v,
                                    NodeId skip, bool outgoing) {
  std::vector<ArcAttrs> out;
  for (int e : outgoing ? g.out_edges(v) : g.in_edges(v)) {
    const Edge& edge = g.edge(e);
    const NodeId other = outgoing ? edge.to : edge.from;
    if (other == skip) continue;
    out.emplace_back(other, edge.p, edge.lt_weight.value_or(-1.0));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::pair<double, double>> arc_attrs(const VoterNetwork& g,
                                                   NodeId from, NodeId to) {
  for (int e : g.out_edges(from)) {
    const Edge& edge = g.edge(e);
    if (edge.to == to) return std::make_pair(edge.p, edge.lt_weight.value_or(-1.0));
  }
  return std::nullopt;
}

bool twins(const Instance& instance, NodeId u, NodeId v) {
  const VoterNetwork& g = instance.network();
  if (instance.ranking(u) != instance.ranking(v)) return false;
  if (g.node_cost(u) != g.node_cost(v)) return false;
  if (arc_attrs(g, u, v) != arc_attrs(g, v, u)) return false;
  return neighbourhood(g, u, v, true) == neighbourhood(g, v, u, true) &&
         neighbourhood(g, u, v, false) == neighbourhood(g, v, u, false);
}

struct SearchSpace {
  const Instance* instance;
  const OptimizerConfig* config;
  const Objective* objective;
  const LiveGraphEnsemble* ensemble;
  const TopTable* tops;
  std::vector<std::vector<NodeId>> classes;
  std::vector<MessageVector> vectors;
  std::vector<std::uint16_t> vector_bits;
  int baseline = 0;
  double budget = 0.0;
};

double seed_price(const SearchSpace& space, NodeId v, int messages) {
  return space.config->cost_budget
             ? messages * space.instance->network().node_cost(v)
             : messages;
}

struct Best {
  double value = 0.0;
  double cost = 0.0;
  std::vector<std::pair<NodeId, int>> placements;
  bool set = false;
};

// Higher value, then lower cost, then fewer seeds. Remaining ties keep the
// earlier solution.
bool improves(double value, double cost, std::size_t seeds, const Best& best) {
  if (!best.set) return true;
  if (value > best.value + kTolerance) return true;
  if (value < best.value - kTolerance) return false;
  if (cost < best.cost - kTolerance) return true;
  if (cost > best.cost + kTolerance) return false;
  return seeds < best.placements.size();
}

// Depth-first enumeration keeping, per live graph, the messages each node
// has received so far.
class Searcher {
 public:
  explicit Searcher(const SearchSpace& space)
      : space_(space),
        n_(space.instance->node_count()),
        graphs_(space.ensemble->size()),
        layers_(1, std::vector<std::uint16_t>(graphs_ * n_, 0)),
        own_(n_, 0),
        is_seed_(n_, 0),
        votes_(space.instance->candidate_count()) {}

  void evaluate_current(double cost) {
    ++explored_;
    const std::vector<std::uint16_t>& masks = layers_[depth_];
    const bool bribed = space_.config->bribed;
    const int candidates = space_.instance->candidate_count();
    internal::StableSum total;
    for (std::size_t g = 0; g < graphs_; ++g) {
      const std::uint16_t* row = masks.data() + g * n_;
      std::fill(votes_.begin(), votes_.end(), 0);
      for (NodeId v = 0; v < n_; ++v) {
        const std::uint16_t mask = bribed && is_seed_[v] ? own_[v] : row[v];
        ++votes_[space_.tops->top(space_.tops->slot(v), mask).index];
      }
      int runner = votes_[1];
      for (int c = 2; c < candidates; ++c) runner = std::max(runner, votes_[c]);
      double x = 0.0;
      switch (space_.objective->kind) {
        case Objective::Kind::kExpectedDeltaMov:
          x = votes_[0] - runner - space_.baseline;
          break;
        case Objective::Kind::kExpectedFavoredVotes:
          x = votes_[0];
          break;
        case Objective::Kind::kExpectedInfluence: {
          int reached = 0;
          for (NodeId v = 0; v < n_; ++v) reached += row[v] != 0 ? 1 : 0;
          x = reached;
          break;
        }
        case Objective::Kind::kProbabilityOfVictory:
        case Objective::Kind::kVictoryAboveThreshold:
          x = votes_[0] > runner ? 1.0 : 0.0;
          break;
      }
      if (x != 0.0) total.add(space_.ensemble->weight(g) * x);
    }
    double value = total.value();
    if (space_.objective->kind == Objective::Kind::kVictoryAboveThreshold) {
      value = value + 1e-12 >= space_.objective->threshold ? 1.0 : 0.0;
    }
    if (improves(value, cost, placements_.size(), best_)) {
      best_.value = value;
      best_.cost = cost;
      best_.placements = placements_;
      best_.set = true;
    }
  }

  void push(NodeId node, int vector_index) {
    const std::uint16_t bits = space_.vector_bits[vector_index];
    if (static_cast<int>(layers_.size()) <= depth_ + 1) {
      layers_.emplace_back(graphs_ * n_, 0);
    }
    std::vector<std::uint16_t>& next = layers_[depth_ + 1];
    next = layers_[depth_];
    const int words = space_.ensemble->words();
    for (std::size_t g = 0; g < graphs_; ++g) {
      const std::uint64_t* r = space_.ensemble->reach(g, node, scratch_);
      std::uint16_t* row = next.data() + g * n_;
      for (int w = 0; w < words; ++w) {
        for (std::uint64_t rest = r[w]; rest != 0; rest &= rest - 1) {
          row[w * 64 + std::countr_zero(rest)] |= bits;
        }
      }
    }
    own_[node] = bits;
    is_seed_[node] = 1;
    placements_.emplace_back(node, vector_index);
    ++depth_;
  }

  void pop() {
    const NodeId node = placements_.back().first;
    own_[node] = 0;
    is_seed_[node] = 0;
    placements_.pop_back();
    --depth_;
  }

  // Places further seeds: class index non-decreasing, within a class the
  // next free slot, vector index non-decreasing.
  void extend(std::size_t class_index, std::size_t slot, int min_vector,
              double remaining, double cost) {
    for (std::size_t c = class_index; c < space_.classes.size(); ++c) {
      const std::size_t first_slot = c == class_index ? slot : 0;
      const int first_vector = c == class_index ? min_vector : 0;
      if (first_slot >= space_.classes[c].size()) continue;
      const NodeId node = space_.classes[c][first_slot];
      for (int vi = first_vector; vi < static_cast<int>(space_.vectors.size());
           ++vi) {
        const double price = seed_price(space_, node, space_.vectors[vi].count());
        if (price > remaining + kTolerance) continue;
        push(node, vi);
        evaluate_current(cost + price);
        extend(c, first_slot + 1, vi, remaining - price, cost + price);
        pop();
      }
    }
  }

  const Best& best() const { return best_; }
  std::uint64_t explored() const { return explored_; }

 private:
  const SearchSpace& space_;
  int n_;
  std::size_t graphs_;
  std::vector<std::vector<std::uint16_t>> layers_;
  std::vector<std::uint16_t> own_;
  std::vector<char> is_seed_;
  std::vector<int> votes_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::pair<NodeId, int>> placements_;
  int depth_ = 0;
  Best best_;
  std::uint64_t explored_ = 0;
};

}  // namespace

std::vector<std::vector<NodeId>> symmetry_classes(const Instance& instance,
                                                  DiffusionModel model) {
  const VoterNetwork& g = instance.network();
  const int n = g.node_count();
  const std::vector<int> component = certain_components(instance, model);
  std::vector<int> component_size(n, 0);
  for (NodeId v = 0; v < n; ++v) ++component_size[component[v]];

  std::vector<std::vector<NodeId>> classes;
  std::map<std::tuple<int, Ranking, double>, std::size_t> by_component;
  std::vector<char> assigned(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (component_size[component[v]] < 2) continue;
    const auto key =
        std::make_tuple(component[v], instance.ranking(v), g.node_cost(v));
    auto [it, inserted] = by_component.emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(v);
    assigned[v] = 1;
  }
  // Singleton component groups fall through to the twin pass.
  std::vector<std::vector<NodeId>> kept;
  for (auto& c : classes) {
    if (c.size() >= 2) {
      kept.push_back(std::move(c));
    } else {
      assigned[c.front()] = 0;
    }
  }
  std::vector<std::vector<NodeId>> twin_classes;
  for (NodeId v = 0; v < n; ++v) {
    if (assigned[v]) continue;
    bool placed = false;
    for (auto& c : twin_classes) {
      if (std::all_of(c.begin(), c.end(),
                      [&](NodeId u) { return twins(instance, u, v); })) {
        c.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) twin_classes.push_back({v});
  }
  for (auto& c : twin_classes) kept.push_back(std::move(c));
  std::sort(kept.begin(), kept.end());
  return kept;
}

OracleResult solve_exact(const Instance& instance, const OptimizerConfig& config,
                         const Objective& objective,
                         const OracleLimits& limits) {
  if (instance.candidate_count() > limits.max_candidates) {
    throw CapacityError("oracle supports at most " +
                        std::to_string(limits.max_candidates) + " candidates");
  }
  double budget = config.budget;
  double max_messages = config.budget;
  if (config.cost_budget) {
    budget = *config.cost_budget;
    double cheapest = instance.network().node_cost(0);
    for (NodeId v = 1; v < instance.node_count(); ++v) {
      cheapest = std::min(cheapest, instance.network().node_cost(v));
    }
    max_messages = std::floor(budget / cheapest + kTolerance);
  }
  if (budget < 0) throw ArgumentError("budget must be non-negative");
  if (max_messages > limits.max_budget) {
    throw CapacityError("oracle supports budgets of at most " +
                        std::to_string(limits.max_budget) + " messages");
  }
  if (config.model == DiffusionModel::kLinearThreshold) {
    instance.network().require_lt_weights();
  }

  SearchSpace space;
  space.instance = &instance;
  space.config = &config;
  space.objective = &objective;
  space.budget = budget;
  if (limits.use_symmetry) {
    space.classes = symmetry_classes(instance, config.model);
  } else {
    for (NodeId v = 0; v < instance.node_count(); ++v) space.classes.push_back({v});
  }
  if (static_cast<int>(space.classes.size()) > limits.max_classes) {
    throw CapacityError("oracle found " + std::to_string(space.classes.size()) +
                        " symmetry classes, above the cap " +
                        std::to_string(limits.max_classes));
  }
  space.vectors = all_message_vectors(instance.candidate_count(),
                                      static_cast<int>(max_messages),
                                      config.signs);
  for (const MessageVector& m : space.vectors) {
    space.vector_bits.push_back(static_cast<std::uint16_t>(m.as_set().bits()));
  }

  OptimizerConfig ensemble_config = config;
  if (!config.mode) ensemble_config.mode = EstimationMode::kExact;
  const auto ensemble = make_ensemble(instance, ensemble_config);
  const TopTable tops(config.rule, instance.rankings(),
                      instance.candidate_count());
  space.ensemble = ensemble.get();
  space.tops = &tops;
  space.baseline = baseline_mov(instance);

  // Top-level branches are independent; each runs its own searcher and the
  // results merge in branch order, so the answer does not depend on workers.
  struct Branch {
    std::size_t class_index;
    int vector_index;
  };
  std::vector<Branch> branches;
  for (std::size_t c = 0; c < space.classes.size(); ++c) {
    for (int vi = 0; vi < static_cast<int>(space.vectors.size()); ++vi) {
      const NodeId node = space.classes[c][0];
      if (seed_price(space, node, space.vectors[vi].count()) <=
          budget + kTolerance) {
        branches.push_back({c, vi});
      }
    }
  }
  std::vector<Best> branch_best(branches.size());
  std::vector<std::uint64_t> branch_explored(branches.size(), 0);
  internal::parallel_chunks(
      branches.size(), resolve_workers(config.workers),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
          Searcher searcher(space);
          const Branch& br = branches[b];
          const NodeId node = space.classes[br.class_index][0];
          const double price =
              seed_price(space, node, space.vectors[br.vector_index].count());
          searcher.push(node, br.vector_index);
          searcher.evaluate_current(price);
          searcher.extend(br.class_index, 1, br.vector_index, budget - price,
                          price);
          branch_best[b] = searcher.best();
          branch_explored[b] = searcher.explored();
        }
      });

  Searcher empty(space);
  empty.evaluate_current(0.0);
  Best best = empty.best();
  OracleResult out;
  out.explored = empty.explored();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    out.explored += branch_explored[b];
    if (branch_best[b].set &&
        improves(branch_best[b].value, branch_best[b].cost,
                 branch_best[b].placements.size(), best)) {
      best = branch_best[b];
    }
  }
  out.best_value = best.value;
  for (const auto& [node, vi] : best.placements) {
    out.best_solution.assign(node, space.vectors[vi]);
  }
  out.class_count = static_cast<int>(space.classes.size());
  return out;
}

}  // namespace mivote
