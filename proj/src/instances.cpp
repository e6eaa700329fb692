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

#include "mivote/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mivote/errors.hpp"
#include "mivote/optimize.hpp"
#include "mivote/oracle.hpp"
#include "mivote/rng.hpp"

namespace mivote {
namespace {

// `front` first, then the remaining non-favored candidates in index order,
// then c0 unless it already appears in `front`.
Ranking ranking_with_front(int candidate_count, std::vector<int> front) {
  std::vector<bool> used(candidate_count, false);
  for (int c : front) used[c] = true;
  for (int c = 1; c < candidate_count; ++c) {
    if (!used[c]) front.push_back(c);
  }
  if (!used[0]) front.push_back(0);
  return Ranking::from_indices(front);
}

void add_clique(VoterNetwork& network, std::span<const NodeId> nodes) {
  for (NodeId u : nodes) {
    for (NodeId v : nodes) {
      if (u != v) network.add_edge(u, v, 1.0);
    }
  }
}

void add_ring(VoterNetwork& network, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) return;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    network.add_edge(nodes[i], nodes[(i + 1) % nodes.size()], 1.0, 1.0);
  }
}

struct Padding {
  int m = 0;
  int n = 0;
  int h = 0;
  int extra_c2 = 0;
};

// Appends G2-G4 after `core_count` core nodes and fills their rankings.
ReductionLayout make_padded(int core_count, const Padding& pad, int last,
                            bool rings,
                            const std::function<void(VoterNetwork&)>& core) {
  const int candidates = last + 1;
  const int mn = pad.m + pad.n;
  std::vector<int> mixed_sizes = {2 * mn + pad.extra_c2,
                                  2 * mn + pad.m - pad.h + 1};
  for (int i = 3; i <= last; ++i) mixed_sizes.push_back(3 * mn + 1);
  const int mixed_total =
      std::accumulate(mixed_sizes.begin(), mixed_sizes.end(), 0);
  const int swing_size = pad.n + pad.h + 1;
  const int favored_size = 3 * mn + 2;
  const int total = core_count + mixed_total + swing_size + favored_size;

  std::vector<Ranking> rankings(total);
  ReductionLayout layout{Instance(VoterNetwork(0), {}, candidates), {}, {}, {},
                         {}, {}, {}};
  NodeId next = 0;
  for (int i = 0; i < core_count; ++i) {
    rankings[next] = ranking_with_front(candidates, {2, 1});
    layout.core.push_back(next++);
  }
  for (std::size_t g = 0; g < mixed_sizes.size(); ++g) {
    std::vector<int> front;
    if (g == 0) front = {2, 1};
    else if (g == 1) front = {1, 2};
    else front = {static_cast<int>(g) + 1, 2, 1};
    for (int i = 0; i < mixed_sizes[g]; ++i) {
      rankings[next] = ranking_with_front(candidates, front);
      layout.mixed.push_back(next++);
    }
  }
  for (int i = 0; i < swing_size; ++i) {
    rankings[next] = ranking_with_front(candidates, {1, 2});
    layout.swing.push_back(next++);
  }
  for (int i = 0; i < favored_size; ++i) {
    rankings[next] = Ranking::identity(candidates);
    layout.favored.push_back(next++);
  }

  VoterNetwork network(total, /*directed=*/true);
  core(network);
  for (const auto* group : {&layout.mixed, &layout.swing, &layout.favored}) {
    if (rings) add_ring(network, *group);
    else add_clique(network, *group);
  }
  layout.instance = Instance(std::move(network), std::move(rankings),
                             candidates, pad.h + 1);

  const Tally t = tally(layout.instance, layout.instance.rankings());
  if (t.votes(CandidateId{0}) != 3 * mn + 2 ||
      t.votes(CandidateId{1}) != 3 * mn + 2 ||
      t.votes(CandidateId{2}) != 3 * mn ||
      margin_of_victory(t) != 0) {
    throw ConstructionError("reduction tally self-check failed");
  }
  return layout;
}

void check_last(int last) {
  if (last < 2) throw ArgumentError("reduction needs at least 3 candidates");
}

}  // namespace

Instance five_voter_clique() {
  constexpr int kCandidates = 5;
  VoterNetwork network(5, /*directed=*/true);
  for (NodeId u = 0; u < 5; ++u) {
    for (NodeId v = 0; v < 5; ++v) {
      if (u != v) network.add_edge(u, v, 1.0);
    }
  }
  std::vector<Ranking> rankings = {
      Ranking::from_indices({0, 4, 1, 2, 3}),
      Ranking::from_indices({1, 0, 2, 3, 4}),
      Ranking::from_indices({1, 3, 0, 2, 4}),
      Ranking::from_indices({2, 3, 0, 1, 4}),
      Ranking::from_indices({2, 4, 0, 1, 3}),
  };
  return Instance(std::move(network), std::move(rankings), kCandidates, 2);
}

ReductionLayout set_cover_reduction(const SetCoverInstance& sc, int last) {
  check_last(last);
  const int m = static_cast<int>(sc.sets.size());
  const int n = sc.element_count;
  if (m < 1 || n < 1) throw ArgumentError("set cover needs sets and elements");
  if (sc.h < 1 || sc.h > m) throw ArgumentError("h must lie in [1, m]");
  for (const auto& set : sc.sets) {
    for (int z : set) {
      if (z < 0 || z >= n) throw ArgumentError("element out of range");
    }
  }
  ReductionLayout layout = make_padded(
      m + n, Padding{m, n, sc.h, 0}, last, /*rings=*/false,
      [&](VoterNetwork& network) {
        for (int x = 0; x < m; ++x) {
          std::vector<int> members = sc.sets[x];
          std::sort(members.begin(), members.end());
          members.erase(std::unique(members.begin(), members.end()),
                        members.end());
          for (int z : members) network.add_edge(x, m + z, 1.0);
        }
      });
  for (int x = 0; x < m; ++x) layout.set_nodes.push_back(x);
  for (int z = 0; z < n; ++z) layout.element_nodes.push_back(m + z);
  return layout;
}

Solution reduction_certificate(const ReductionLayout& layout,
                               std::span<const int> cover, int h) {
  const int candidates = layout.instance.candidate_count();
  const int available = static_cast<int>(layout.set_nodes.size());
  if (static_cast<int>(cover.size()) > h || h > available) {
    throw ArgumentError("cover larger than h");
  }
  std::vector<bool> chosen(available, false);
  for (int x : cover) {
    if (x < 0 || x >= available) throw ArgumentError("cover index out of range");
    chosen[x] = true;
  }
  int count = static_cast<int>(std::count(chosen.begin(), chosen.end(), true));
  for (int x = 0; x < available && count < h; ++x) {
    if (!chosen[x]) {
      chosen[x] = true;
      ++count;
    }
  }
  MessageVector promote_c1(candidates);
  promote_c1.set(CandidateId{1}, MessageSign::kPositive);
  MessageVector promote_c2(candidates);
  promote_c2.set(CandidateId{2}, MessageSign::kPositive);
  Solution solution;
  for (int x = 0; x < available; ++x) {
    if (chosen[x]) solution.assign(layout.set_nodes[x], promote_c1);
  }
  solution.assign(layout.swing.front(), promote_c2);
  return solution;
}

std::optional<std::vector<int>> min_set_cover(const SetCoverInstance& sc) {
  const int m = static_cast<int>(sc.sets.size());
  if (m > 24) throw CapacityError("set cover brute force limited to 24 sets");
  std::vector<std::uint64_t> masks(m, 0);
  for (int x = 0; x < m; ++x) {
    for (int z : sc.sets[x]) masks[x] |= std::uint64_t{1} << z;
  }
  const std::uint64_t full = sc.element_count >= 64
                                 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << sc.element_count) - 1;
  std::optional<std::vector<int>> best;
  // Subsets ordered by size then lexicographically via combinations.
  for (int size = 0; size <= m && !best; ++size) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::uint64_t covered = 0;
      for (int x : pick) covered |= masks[x];
      if ((covered & full) == full) {
        best = pick;
        break;
      }
      int i = size - 1;
      while (i >= 0 && pick[i] == m - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return best;
}

ReductionLayout vertex_cover_lt_reduction(const VertexCoverInstance& vc,
                                          int last) {
  check_last(last);
  const int m = vc.node_count;
  if (m < 1) throw ArgumentError("vertex cover needs nodes");
  if (vc.k < 1 || vc.k > m) throw ArgumentError("k must lie in [1, m]");
  std::vector<std::vector<int>> adjacency(m);
  for (auto [a, b] : vc.edges) {
    if (a < 0 || a >= m || b < 0 || b >= m || a == b) {
      throw ArgumentError("bad vertex cover edge");
    }
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    if (list.empty()) throw ArgumentError("isolated vertex in cover instance");
  }
  const int n = m - vc.k;
  ReductionLayout layout = make_padded(
      m, Padding{m, n, vc.k, n}, last, /*rings=*/true,
      [&](VoterNetwork& network) {
        for (int v = 0; v < m; ++v) {
          const double w = 1.0 / static_cast<double>(adjacency[v].size());
          for (int u : adjacency[v]) network.add_edge(u, v, 1.0, w);
        }
      });
  for (int v = 0; v < m; ++v) layout.set_nodes.push_back(v);
  return layout;
}

std::optional<std::vector<int>> min_vertex_cover(
    const VertexCoverInstance& vc) {
  SetCoverInstance sc;
  sc.element_count = static_cast<int>(vc.edges.size());
  sc.sets.resize(vc.node_count);
  for (int e = 0; e < sc.element_count; ++e) {
    sc.sets[vc.edges[e].first].push_back(e);
    sc.sets[vc.edges[e].second].push_back(e);
  }
  if (sc.element_count > 64) {
    throw CapacityError("vertex cover brute force limited to 64 edges");
  }
  return min_set_cover(sc);
}

Instance bribed_blowup(const Instance& base, int rho_prime, int h) {
  if (rho_prime < 1 || h < 0) throw ArgumentError("rho' >= 1 and h >= 0");
  const int copies = (h + 1) * rho_prime;
  const int base_nodes = base.node_count();
  const int total = base_nodes * copies;
  VoterNetwork network(total, /*directed=*/true);
  std::vector<Ranking> rankings(total);
  std::vector<double> costs(total);
  auto copy_of = [copies](NodeId v, int i) { return v * copies + i; };
  for (NodeId v = 0; v < base_nodes; ++v) {
    for (int i = 0; i < copies; ++i) {
      rankings[copy_of(v, i)] = base.ranking(v);
      costs[copy_of(v, i)] = base.network().node_cost(v);
      for (int j = 0; j < copies; ++j) {
        if (i != j) network.add_edge(copy_of(v, i), copy_of(v, j), 1.0);
      }
    }
  }
  for (const Edge& e : base.network().edges()) {
    for (int i = 0; i < copies; ++i) {
      for (int j = 0; j < copies; ++j) {
        network.add_edge(copy_of(e.from, i), copy_of(e.to, j), 1.0);
      }
    }
  }
  if (base.network().has_node_costs()) network.set_node_costs(costs);
  return Instance(std::move(network), std::move(rankings),
                  base.candidate_count(), h + 1);
}

Instance epsilon_connect(const Instance& instance,
                         std::span<const std::pair<NodeId, NodeId>> extra,
                         double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ArgumentError("epsilon must lie in (0, 1]");
  }
  VoterNetwork network = instance.network();
  for (auto [u, v] : extra) network.add_edge(u, v, epsilon);
  return Instance(std::move(network),
                  std::vector<Ranking>(instance.rankings().begin(),
                                       instance.rankings().end()),
                  instance.candidate_count(), instance.recommended_budget());
}

namespace {

OptimizerConfig trap_config(const RevisionRule& rule) {
  OptimizerConfig config;
  config.budget = 2;
  config.rule = rule;
  config.mode = EstimationMode::kExact;
  return config;
}

void fill_common(TrapReport& report, const Instance& instance,
                 const Solution& certificate, const OptimizerConfig& config) {
  report.max_degree = instance.network().max_degree();
  report.initial_tally = tally(instance, instance.rankings());
  const SolutionEvaluator evaluator = make_evaluator(instance, config);
  report.certificate_value = evaluator.evaluate(certificate).delta_mov;
  report.optimum = solve_exact(instance, config).best_value;
  report.initial_frontier = frontier(evaluator, Solution{}, config).size();
  report.greedy_values.push_back(
      greedy_approach_loop(instance, config, max_gain_policy())
          .expected_delta_mov);
  report.greedy_values.push_back(
      greedy_approach_loop(instance, config, runner_up_policy(),
                           FrontierCriterion::kRunnerUpLoses)
          .expected_delta_mov);
}

constexpr double kTrapTolerance = 1e-9;

bool near(double a, double b) { return std::abs(a - b) <= kTrapTolerance; }

}  // namespace

TrapReport verify_greedy_trap_ring(const Instance& instance,
                                  const Solution& certificate,
                                  const RevisionRule& rule) {
  TrapReport report;
  fill_common(report, instance, certificate, trap_config(rule));
  return report;
}

TrapInstance greedy_trap_ring(const RevisionRule& rule) {
  constexpr int kCandidates = 3;
  VoterNetwork network(19, /*directed=*/false);
  std::vector<Ranking> rankings(19);
  NodeId next = 0;
  auto component = [&](int size, bool cycle, std::vector<int> order) {
    const NodeId first = next;
    for (int i = 0; i < size; ++i) {
      rankings[next++] = Ranking::from_indices(order);
    }
    for (int i = 0; i + 1 < size; ++i) {
      network.add_edge(first + i, first + i + 1, 1.0);
    }
    if (cycle) network.add_edge(first + size - 1, first, 1.0);
    return first;
  };
  component(7, true, {0, 1, 2});
  component(4, true, {1, 2, 0});
  const NodeId a = component(3, true, {1, 2, 0});
  const NodeId b = component(2, false, {2, 1, 0});
  component(3, true, {2, 1, 0});

  Instance instance(std::move(network), std::move(rankings), kCandidates, 2);
  Solution certificate;
  MessageVector to_c2(kCandidates);
  to_c2.set(CandidateId{2}, MessageSign::kPositive);
  MessageVector to_c1(kCandidates);
  to_c1.set(CandidateId{1}, MessageSign::kPositive);
  certificate.assign(a, to_c2);
  certificate.assign(b, to_c1);

  TrapReport report = verify_greedy_trap_ring(instance, certificate, rule);
  bool ok = report.max_degree <= 2 && near(report.optimum, 1.0) &&
            near(report.certificate_value, 1.0) &&
            report.initial_frontier == 0;
  for (double g : report.greedy_values) ok = ok && near(g, 0.0);
  if (!ok) {
    throw ConstructionError("ring trap failed self-verification under " +
                            rule.name());
  }
  return TrapInstance{std::move(instance), std::move(certificate),
                      std::move(report)};
}

TrapReport verify_greedy_trap_tree(const Instance& instance,
                            const Solution& certificate, int /*r*/,
                            const RevisionRule& rule) {
  TrapReport report;
  fill_common(report, instance, certificate, trap_config(rule));
  return report;
}

TrapInstance greedy_trap_tree(int r, const RevisionRule& rule) {
  if (r < 2) throw ArgumentError("tree trap needs r >= 2");
  constexpr int kCandidates = 3;
  const int total = 19 * r;
  VoterNetwork network(total, /*directed=*/true);
  std::vector<Ranking> rankings(total);
  NodeId next = 0;
  auto star = [&](int size, std::vector<int> order) {
    const NodeId root = next;
    for (int i = 0; i < size; ++i) {
      rankings[next++] = Ranking::from_indices(order);
    }
    for (int i = 1; i < size; ++i) network.add_edge(root, root + i, 1.0);
    return root;
  };
  star(7 * r, {0, 1, 2});
  const NodeId x = star(2 * r, {1, 2, 0});
  star(5 * r, {1, 2, 0});
  const NodeId y = star(r, {2, 1, 0});
  star(4 * r, {2, 1, 0});

  Instance instance(std::move(network), std::move(rankings), kCandidates, 2);
  Solution certificate;
  MessageVector to_c2(kCandidates);
  to_c2.set(CandidateId{2}, MessageSign::kPositive);
  MessageVector to_c1(kCandidates);
  to_c1.set(CandidateId{1}, MessageSign::kPositive);
  certificate.assign(x, to_c2);
  certificate.assign(y, to_c1);

  TrapReport report = verify_greedy_trap_tree(instance, certificate, r, rule);
  bool ok = near(report.optimum, r) && near(report.certificate_value, r);
  for (double g : report.greedy_values) ok = ok && near(g, 2.0);
  if (!ok) {
    throw ConstructionError("tree trap failed self-verification under " +
                            rule.name());
  }
  return TrapInstance{std::move(instance), std::move(certificate),
                      std::move(report)};
}

Instance random_instance(const RandomInstanceParams& params) {
  if (params.node_count < 1 || params.candidate_count < 2) {
    throw ArgumentError("random instance needs nodes and two candidates");
  }
  if (!(params.p_min > 0.0 && params.p_min <= params.p_max &&
        params.p_max <= 1.0)) {
    throw ArgumentError("probability range must satisfy 0 < p_min <= p_max <= 1");
  }
  Rng rng(derive_seed(params.seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> prob(params.p_min, params.p_max);
  const int n = params.node_count;

  struct Arc {
    NodeId from;
    NodeId to;
    double p;
  };
  std::vector<Arc> arcs;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v || unit(rng) >= params.edge_probability) continue;
      const double p = unit(rng) < params.certain_fraction ? 1.0 : prob(rng);
      arcs.push_back({u, v, p});
    }
  }
  std::vector<double> weights(arcs.size(), 0.0);
  if (params.lt_weights) {
    std::vector<double> in_sum(n, 0.0);
    std::vector<double> target(n, 0.0);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      weights[i] = 0.05 + unit(rng);
      in_sum[arcs[i].to] += weights[i];
    }
    for (NodeId v = 0; v < n; ++v) target[v] = 0.5 + 0.49 * unit(rng);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      weights[i] *= target[arcs[i].to] / in_sum[arcs[i].to];
    }
  }
  VoterNetwork network(n, /*directed=*/true);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (params.lt_weights) {
      network.add_edge(arcs[i].from, arcs[i].to, arcs[i].p, weights[i]);
    } else {
      network.add_edge(arcs[i].from, arcs[i].to, arcs[i].p);
    }
  }
  std::vector<Ranking> rankings;
  rankings.reserve(n);
  std::vector<int> order(params.candidate_count);
  for (NodeId v = 0; v < n; ++v) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    rankings.push_back(Ranking::from_indices(order));
  }
  return Instance(std::move(network), std::move(rankings),
                  params.candidate_count);
}

}  // namespace mivote
