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

#include "mivote/cli.hpp"

#include <chrono>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mivote/errors.hpp"
#include "mivote/estimation.hpp"
#include "mivote/instances.hpp"
#include "mivote/io.hpp"
#include "mivote/optimize.hpp"
#include "mivote/oracle.hpp"
#include "mivote/revision.hpp"

namespace mivote {
namespace {

using Json = nlohmann::ordered_json;

struct Common {
  std::string instance = "-";
  std::string rule = "pessimistic";
  std::string model = "ic";
  std::string signs = "both";
  std::string objective = "delta-mov";
  std::string format = "json";
  std::optional<std::string> mode;
  std::optional<int> budget;
  std::optional<double> cost_budget;
  bool bribed = false;
  bool timings = false;
  int replicates = 1000;
  std::uint64_t seed = 1;
  int workers = 0;
  int exact_cap = 20;
  std::string solution;
};

struct BuildArgs {
  std::string kind;
  std::string set_cover;
  std::string vertex_cover;
  std::optional<int> h;
  std::optional<int> k;
  int last = 2;
  int rho = 2;
  int r = 4;
  int nodes = 10;
  double edge_probability = 0.2;
  double p_min = 0.1;
  double p_max = 1.0;
  int candidates = 3;
  bool lt_weights = false;
  double certain = 0.0;
  double epsilon = 0.01;
  std::string extra;
};

struct Extras {
  int candidates = 3;
  std::string criterion = "mov";
  std::string policy = "max-gain";
  bool no_symmetry = false;
  int max_classes = OracleLimits{}.max_classes;
  int max_budget = OracleLimits{}.max_budget;
  bool full_graph = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--instance", c.instance, "Instance file, '-' for stdin");
  sub->add_option("--rule", c.rule,
                  "pessimistic | optimistic | score[:EPS] | custom:FILE");
  sub->add_option("--model", c.model, "ic | lt");
  sub->add_option("--signs", c.signs, "both | pos | neg");
  sub->add_flag("--bribed", c.bribed, "Seeds ignore messages but their own");
  sub->add_option("--budget", c.budget, "Message budget");
  sub->add_option("--cost-budget", c.cost_budget, "Budget over seed costs");
  sub->add_option("--objective", c.objective,
                  "delta-mov | c0-votes | influence | victory | threshold:T");
  sub->add_option("--mode", c.mode, "exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  sub->add_option("--replicates", c.replicates, "Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--workers", c.workers,
                  "Worker threads; 0 reads MIVOTE_WORKERS");
  sub->add_option("--exact-cap", c.exact_cap,
                  "Largest exact live-graph space, as a power of two");
  sub->add_option("--format", c.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--timings", c.timings, "Report elapsed time");
}

Instance load_instance(const Common& c, std::istream& in) {
  return c.instance == "-" ? parse_instance(read_stream(in))
                           : parse_instance(read_file(c.instance));
}

// Inline JSON when the text starts with '[', otherwise a file name.
Solution load_solution(const std::string& text, int candidate_count) {
  if (text.empty()) return Solution();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    return parse_solution(text, candidate_count);
  }
  return parse_solution(read_file(text), candidate_count);
}

OptimizerConfig optimizer_config(const Common& c, const Instance& instance) {
  OptimizerConfig config;
  config.budget = c.budget.value_or(instance.recommended_budget().value_or(1));
  config.cost_budget = c.cost_budget;
  config.signs = parse_signs(c.signs);
  config.rule = parse_rule(c.rule);
  config.model = parse_model(c.model);
  config.bribed = c.bribed;
  if (c.mode) {
    config.mode = *c.mode == "exact" ? EstimationMode::kExact
                                     : EstimationMode::kMonteCarlo;
  }
  config.replicates = c.replicates;
  config.master_seed = c.seed;
  config.exact_cap = c.exact_cap;
  config.workers = resolve_workers(c.workers);
  return config;
}

Json solution_json(const Solution& s) {
  return Json::parse(format_solution(s));
}

std::string mode_name(EstimationMode mode) {
  return mode == EstimationMode::kExact ? "exact" : "mc";
}

std::string csv_cell(const Json& v) {
  std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  if (text.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : text) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return text;
}

bool is_scalar(const Json& v) { return !v.is_structured(); }

// CSV keeps scalar fields only. Results with a "rows" list print one line
// per row.
void write_csv(const Json& result, std::ostream& out) {
  std::vector<const Json*> rows;
  if (result.contains("rows") && result["rows"].is_array()) {
    for (const Json& row : result["rows"]) rows.push_back(&row);
  } else {
    rows.push_back(&result);
  }
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [key, value] : rows.front()->items()) {
    if (is_scalar(value)) keys.push_back(key);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out << (i ? "," : "") << keys[i];
  }
  out << "\n";
  for (const Json* row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "," : "") << csv_cell(row->value(keys[i], Json()));
    }
    out << "\n";
  }
}

void emit(const Json& result, const Common& c, std::ostream& out) {
  if (c.format == "csv") {
    write_csv(result, out);
  } else {
    out << result.dump(2) << "\n";
  }
}

using Clock = std::chrono::steady_clock;

void add_timing(Json& result, const Common& c, Clock::time_point start) {
  if (!c.timings) return;
  result["elapsed_ms"] =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::pair<NodeId, NodeId>> parse_extra_edges(
    const std::string& text) {
  std::vector<std::pair<NodeId, NodeId>> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ArgumentError("extra edges are written u:v,u:v");
    }
    try {
      out.emplace_back(std::stoi(item.substr(0, colon)),
                       std::stoi(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw ArgumentError("bad extra edge: " + item);
    }
  }
  return out;
}

Instance build_instance(const BuildArgs& b, const Common& c,
                        std::istream& in) {
  if (b.kind == "figure1" || b.kind == "five-voter-clique") {
    return five_voter_clique();
  }
  if (b.kind == "set-cover" || b.kind == "blowup") {
    if (b.set_cover.empty()) throw ArgumentError("--setcover FILE required");
    SetCoverInstance sc = parse_set_cover(read_file(b.set_cover));
    if (b.h) sc.h = *b.h;
    const ReductionLayout layout = set_cover_reduction(sc, b.last);
    if (b.kind == "set-cover") return layout.instance;
    return bribed_blowup(layout.instance, b.rho, sc.h);
  }
  if (b.kind == "vertex-cover") {
    if (b.vertex_cover.empty()) {
      throw ArgumentError("--vertex-cover FILE required");
    }
    VertexCoverInstance vc = parse_vertex_cover(read_file(b.vertex_cover));
    if (b.k) vc.k = *b.k;
    return vertex_cover_lt_reduction(vc, b.last).instance;
  }
  if (b.kind == "epsilon") {
    const Instance base = load_instance(c, in);
    return epsilon_connect(base, parse_extra_edges(b.extra), b.epsilon);
  }
  if (b.kind == "trap-ring") return greedy_trap_ring(parse_rule(c.rule)).instance;
  if (b.kind == "trap-tree") {
    return greedy_trap_tree(b.r, parse_rule(c.rule)).instance;
  }
  if (b.kind == "random") {
    RandomInstanceParams params;
    params.node_count = b.nodes;
    params.edge_probability = b.edge_probability;
    params.p_min = b.p_min;
    params.p_max = b.p_max;
    params.candidate_count = b.candidates;
    params.seed = c.seed;
    params.lt_weights = b.lt_weights;
    params.certain_fraction = b.certain;
    return random_instance(params);
  }
  throw ArgumentError("unknown build kind: " + b.kind);
}

Json frontier_row(const FrontierEntry& e) {
  Json row;
  row["node"] = e.node;
  row["vector"] = e.vector.to_string();
  row["gain_mov"] = e.gain_mov;
  row["gain_c0_votes"] = e.gain_favored_votes;
  row["gain_runner_up_loss"] = e.gain_runner_up_loss;
  return row;
}

FrontierCriterion parse_criterion(const std::string& text) {
  if (text == "mov") return FrontierCriterion::kMovOrFavoredVotes;
  if (text == "runner-up") return FrontierCriterion::kRunnerUpLoses;
  throw ArgumentError("unknown criterion: " + text);
}

Json summary_json(const SolutionEvaluator& evaluator, const Solution& s) {
  const EvaluationSummary summary = evaluator.evaluate(s);
  Json out;
  out["expected_delta_mov"] = summary.delta_mov;
  out["expected_c0_votes"] = summary.favored_votes;
  out["expected_influence"] = summary.influence;
  out["victory_probability"] = summary.victory;
  out["mode"] = mode_name(evaluator.ensemble().mode());
  return out;
}

void merge(Json& into, const Json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

// Set cover or vertex cover: oracle optimum against brute-force covers.
Json verify_reduction(const BuildArgs& b, const Common& c) {
  Json out;
  std::optional<ReductionLayout> layout;
  std::optional<std::vector<int>> cover;
  int h = 0;
  OptimizerConfig config;
  config.rule = parse_rule(c.rule);
  config.workers = resolve_workers(c.workers);
  config.exact_cap = c.exact_cap;
  config.mode = EstimationMode::kExact;
  if (!b.set_cover.empty()) {
    SetCoverInstance sc = parse_set_cover(read_file(b.set_cover));
    if (b.h) sc.h = *b.h;
    h = sc.h;
    layout = set_cover_reduction(sc, b.last);
    cover = min_set_cover(sc);
    out["problem"] = "set-cover";
  } else if (!b.vertex_cover.empty()) {
    VertexCoverInstance vc = parse_vertex_cover(read_file(b.vertex_cover));
    if (b.k) vc.k = *b.k;
    h = vc.k;
    layout = vertex_cover_lt_reduction(vc, b.last);
    cover = min_vertex_cover(vc);
    config.model = DiffusionModel::kLinearThreshold;
    out["problem"] = "vertex-cover";
  } else {
    throw ArgumentError("--setcover FILE or --vertex-cover FILE required");
  }
  config.budget = h + 1;
  const bool exists = cover && static_cast<int>(cover->size()) <= h;
  out["h"] = h;
  out["budget"] = config.budget;
  out["nodes"] = layout->instance.node_count();
  out["cover_exists"] = exists;
  out["min_cover_size"] = cover ? Json(cover->size()) : Json();
  const OracleResult best = solve_exact(layout->instance, config);
  out["oracle_delta_mov"] = best.best_value;
  if (exists) {
    const SolutionEvaluator evaluator =
        make_evaluator(layout->instance, config);
    out["certificate_delta_mov"] =
        evaluator.evaluate(reduction_certificate(*layout, *cover, h))
            .delta_mov;
  }
  const bool positive = best.best_value >= 1.0 - 1e-9;
  const bool nonpositive = best.best_value <= 1e-9;
  out["iff"] = (exists ? positive : nonpositive) ? "PASS" : "FAIL";
  out["solution"] = solution_json(best.best_solution);
  return out;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Election manipulation through multi-issue message diffusion",
               "mivote"};
  // Frees -h for the cover bound --h.
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);
  app.fallthrough(false);

  Common c;
  BuildArgs b;
  Extras x;

  CLI::App* build = app.add_subcommand("build", "Emit a named instance");
  add_common(build, c);
  build->add_option("kind", b.kind,
                    "figure1 | set-cover | vertex-cover | blowup | epsilon | "
                    "trap-ring | trap-tree | random")
      ->required();
  build->add_option("--setcover", b.set_cover, "Set cover file");
  build->add_option("--vertex-cover", b.vertex_cover, "Vertex cover file");
  build->add_option("--h", b.h, "Cover size bound");
  build->add_option("--k", b.k, "Vertex cover size bound");
  build->add_option("--last", b.last, "Index of the last candidate");
  build->add_option("--rho", b.rho, "Copies per unit of h + 1");
  build->add_option("--r", b.r, "Tree trap scale");
  build->add_option("--nodes", b.nodes, "Random instance size");
  build->add_option("--edge-prob", b.edge_probability, "Arc density");
  build->add_option("--p-min", b.p_min, "Smallest edge probability");
  build->add_option("--p-max", b.p_max, "Largest edge probability");
  build->add_option("--candidates", b.candidates, "Number of candidates");
  build->add_flag("--lt-weights", b.lt_weights, "Attach LT weights");
  build->add_option("--certain", b.certain, "Share of p = 1 edges");
  build->add_option("--epsilon", b.epsilon, "Probability of extra edges");
  build->add_option("--extra", b.extra, "Extra edges u:v,u:v");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Diffuse a solution on one live graph");
  add_common(simulate, c);
  simulate->add_option("--solution", c.solution, "Solution file or JSON");
  simulate->add_flag("--full", x.full_graph, "Keep every edge");

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "Expected objective of a solution");
  add_common(estimate_cmd, c);
  estimate_cmd->add_option("--solution", c.solution, "Solution file or JSON");

  CLI::App* greedy =
      app.add_subcommand("greedy", "Influence greedy with a universal set");
  add_common(greedy, c);

  CLI::App* budgeted =
      app.add_subcommand("budgeted", "Cost-aware greedy with singleton pass");
  add_common(budgeted, c);

  CLI::App* frontier_cmd =
      app.add_subcommand("frontier", "Improving single additions");
  add_common(frontier_cmd, c);
  frontier_cmd->add_option("--solution", c.solution, "Current solution");
  frontier_cmd->add_option("--criterion", x.criterion, "mov | runner-up");

  CLI::App* loop = app.add_subcommand("greedy-loop", "Repeated best addition");
  add_common(loop, c);
  loop->add_option("--policy", x.policy, "max-gain | runner-up");
  loop->add_option("--criterion", x.criterion, "mov | runner-up");

  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive optimum");
  add_common(oracle, c);
  oracle->add_flag("--no-symmetry", x.no_symmetry, "Disable orbit pruning");
  oracle->add_option("--max-classes", x.max_classes, "Class limit");
  oracle->add_option("--max-budget", x.max_budget, "Message limit");

  CLI::App* tau = app.add_subcommand("tau", "Smallest universal message set");
  add_common(tau, c);
  tau->add_option("--candidates", x.candidates, "Number of candidates");

  CLI::App* axioms =
      app.add_subcommand("check-axioms", "Exhaustive rationality check");
  add_common(axioms, c);
  axioms->add_option("--candidates", x.candidates, "Number of candidates");

  CLI::App* verify = app.add_subcommand(
      "verify-reduction", "Oracle optimum against brute-force covers");
  add_common(verify, c);
  verify->add_option("--setcover", b.set_cover, "Set cover file");
  verify->add_option("--vertex-cover", b.vertex_cover, "Vertex cover file");
  verify->add_option("--h", b.h, "Cover size bound");
  verify->add_option("--k", b.k, "Vertex cover size bound");
  verify->add_option("--last", b.last, "Index of the last candidate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = Clock::now();
  Json result;

  if (build->parsed()) {
    out << format_instance(build_instance(b, c, in));
    return kExitOk;
  }
  if (tau->parsed()) {
    const RevisionRule rule = parse_rule(c.rule);
    const auto found = min_universal_message_set(rule, x.candidates,
                                                 parse_signs(c.signs));
    result["rule"] = rule.name();
    result["candidates"] = x.candidates;
    result["signs"] = c.signs;
    result["tau"] = found ? Json(found->tau) : Json();
    result["witness"] =
        found ? Json(MessageVector::from_set(x.candidates, found->messages)
                         .to_string())
              : Json();
    result["least_candidate_manipulable"] =
        is_least_candidate_manipulable(rule, x.candidates);
    add_timing(result, c, start);
    emit(result, c, out);
    return kExitOk;
  }
  if (axioms->parsed()) {
    const RevisionRule rule = parse_rule(c.rule);
    const AxiomReport report = check_axioms(rule, x.candidates);
    result["rule"] = rule.name();
    result["candidates"] = x.candidates;
    result["violations"] = report.violation_count;
    result["ok"] = report.ok();
    Json examples = Json::array();
    for (const AxiomViolation& v : report.examples) {
      examples.push_back(v.describe(x.candidates));
    }
    result["examples"] = std::move(examples);
    add_timing(result, c, start);
    emit(result, c, out);
    return kExitOk;
  }
  if (verify->parsed()) {
    result = verify_reduction(b, c);
    add_timing(result, c, start);
    emit(result, c, out);
    return kExitOk;
  }

  const Instance instance = load_instance(c, in);
  const OptimizerConfig config = optimizer_config(c, instance);

  if (simulate->parsed()) {
    const Solution s =
        load_solution(c.solution, instance.candidate_count());
    validate_solution(instance, s, config.signs);
    Rng rng(derive_seed(c.seed, 0));
    const LiveGraph live = x.full_graph
                               ? LiveGraph::full(instance.network())
                               : sample_live_graph(instance.network(),
                                                   config.model, rng);
    const DiffusionOutcome o =
        diffuse(instance, s, live, config.rule, config.bribed);
    result["live_edges"] = live.included_edges().size();
    result["tally"] = std::vector<int>(o.final_tally.counts().begin(),
                                       o.final_tally.counts().end());
    result["mov"] = o.mov;
    result["delta_mov"] = o.delta_mov;
    result["c0_wins"] = o.favored_wins;
    std::vector<int> tops;
    for (const Ranking& r : o.final_rankings) tops.push_back(r.top().index);
    result["tops"] = tops;
  } else if (estimate_cmd->parsed()) {
    const Solution s =
        load_solution(c.solution, instance.candidate_count());
    validate_solution(instance, s, config.signs);
    const Objective objective = Objective::parse(c.objective);
    EstimatorConfig ec;
    ec.model = config.model;
    ec.bribed = config.bribed;
    ec.replicates = config.replicates;
    ec.master_seed = config.master_seed;
    ec.exact_cap = config.exact_cap;
    ec.workers = config.workers;
    ec.mode = config.mode.value_or(
        exact_feasible(instance.network(), config.model, config.exact_cap)
            ? EstimationMode::kExact
            : EstimationMode::kMonteCarlo);
    const Estimate e = estimate(instance, s, config.rule, objective, ec);
    result["objective"] = objective.name();
    result["value"] = e.value;
    result["std_error"] = e.std_error;
    result["replicates"] = e.replicates;
    result["mode"] = mode_name(e.mode);
  } else if (greedy->parsed()) {
    const UniversalGreedyResult g = universal_message_greedy(instance, config);
    result["tau"] = g.universal.tau;
    result["universal"] =
        MessageVector::from_set(instance.candidate_count(),
                                g.universal.messages)
            .to_string();
    result["ratio"] = g.ratio;
    result["seeds"] = g.seeds.seeds;
    merge(result, summary_json(make_evaluator(instance, config), g.solution));
    result["solution"] = solution_json(g.solution);
  } else if (budgeted->parsed()) {
    const BudgetedResult r = budgeted_greedy(instance, config);
    result["tau"] = r.tau;
    result["seeds"] = r.seeds;
    result["spent"] = r.spent;
    result["singleton_won"] = r.singleton_won;
    merge(result, summary_json(make_evaluator(instance, config), r.solution));
    if (r.warning) result["warning"] = *r.warning;
    result["solution"] = solution_json(r.solution);
  } else if (frontier_cmd->parsed()) {
    const Solution current =
        load_solution(c.solution, instance.candidate_count());
    const std::vector<FrontierEntry> entries =
        frontier(instance, current, config, parse_criterion(x.criterion));
    result["count"] = entries.size();
    Json rows = Json::array();
    for (const FrontierEntry& e : entries) rows.push_back(frontier_row(e));
    result["rows"] = std::move(rows);
  } else if (loop->parsed()) {
    SelectionPolicy policy;
    if (x.policy == "max-gain") {
      policy = max_gain_policy();
    } else if (x.policy == "runner-up") {
      policy = runner_up_policy();
    } else {
      throw ArgumentError("unknown policy: " + x.policy);
    }
    const GreedyLoopResult r = greedy_approach_loop(
        instance, config, policy, parse_criterion(x.criterion));
    result["steps"] = r.steps.size();
    merge(result, summary_json(make_evaluator(instance, config), r.solution));
    result["solution"] = solution_json(r.solution);
  } else if (oracle->parsed()) {
    OracleLimits limits;
    limits.use_symmetry = !x.no_symmetry;
    limits.max_classes = x.max_classes;
    limits.max_budget = x.max_budget;
    const Objective objective = Objective::parse(c.objective);
    const OracleResult r = solve_exact(instance, config, objective, limits);
    result["objective"] = objective.name();
    result["budget"] = config.budget;
    result["best_value"] = r.best_value;
    result["explored"] = r.explored;
    result["classes"] = r.class_count;
    result["solution"] = solution_json(r.best_solution);
  }
  add_timing(result, c, start);
  emit(result, c, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in,
            std::ostream& out, std::ostream& err) {
  try {
    return run(argc, argv, in, out, err);
  } catch (const InapplicableError& e) {
    err << "inapplicable: " << e.what() << "\n";
    return kExitInapplicable;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ArgumentError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace mivote
