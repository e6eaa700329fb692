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

#include "mivote/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mivote/errors.hpp"

namespace mivote {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

// Runs `body`, turning JSON type errors into ParseError.
template <typename F>
auto guarded(std::string_view what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  return object.at(name);
}

double parse_double(std::string_view token, std::string_view what) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("bad " + std::string(what) + ": " + std::string(token));
  }
  return value;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  return guarded("instance", [&] {
    const int candidates = field(doc, "candidates").get<int>();
    if (candidates < 2) throw StructuralError("need at least two candidates");
    const bool directed =
        doc.contains("directed") ? doc.at("directed").get<bool>() : true;
    const json& nodes = field(doc, "nodes");
    const int n = static_cast<int>(nodes.size());
    std::vector<Ranking> rankings(n);
    std::vector<char> seen(n, 0);
    std::vector<double> costs(n, 1.0);
    bool any_cost = false;
    for (const json& node : nodes) {
      const int id = field(node, "id").get<int>();
      if (id < 0 || id >= n || seen[id]) {
        throw StructuralError("node ids must be 0..n-1, each once");
      }
      seen[id] = 1;
      const auto order = field(node, "ranking").get<std::vector<int>>();
      if (static_cast<int>(order.size()) != candidates) {
        throw StructuralError("ranking of node " + std::to_string(id) +
                              " has the wrong length");
      }
      rankings[id] = Ranking::from_indices(order);
      if (node.contains("cost")) {
        costs[id] = node.at("cost").get<double>();
        if (!(costs[id] > 0.0)) throw StructuralError("costs must be positive");
        any_cost = true;
      }
    }
    VoterNetwork network(n, directed);
    if (doc.contains("edges")) {
      for (const json& e : doc.at("edges")) {
        std::optional<double> w;
        if (e.contains("lt_weight")) w = e.at("lt_weight").get<double>();
        const double p = e.contains("p") ? e.at("p").get<double>() : 1.0;
        network.add_edge(field(e, "from").get<int>(), field(e, "to").get<int>(),
                         p, w);
      }
    }
    if (any_cost) network.set_node_costs(costs);
    std::optional<int> budget;
    if (doc.contains("recommended_budget")) {
      budget = doc.at("recommended_budget").get<int>();
    }
    return Instance(std::move(network), std::move(rankings), candidates,
                    budget);
  });
}

Instance read_instance(std::istream& in) {
  return parse_instance(read_stream(in));
}

std::string format_instance(const Instance& instance) {
  const VoterNetwork& network = instance.network();
  ordered_json doc;
  doc["candidates"] = instance.candidate_count();
  doc["directed"] = network.directed();
  if (instance.recommended_budget()) {
    doc["recommended_budget"] = *instance.recommended_budget();
  }
  ordered_json nodes = ordered_json::array();
  for (NodeId v = 0; v < instance.node_count(); ++v) {
    ordered_json node;
    node["id"] = v;
    node["ranking"] = instance.ranking(v).indices();
    if (network.has_node_costs()) node["cost"] = network.node_cost(v);
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  // Undirected pairs are stored as consecutive arcs; emit the first.
  const int step = network.directed() ? 1 : 2;
  for (int i = 0; i < network.edge_count(); i += step) {
    const Edge& e = network.edge(i);
    ordered_json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    edge["p"] = e.p;
    if (e.lt_weight) edge["lt_weight"] = *e.lt_weight;
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

Solution parse_solution(std::string_view text, int candidate_count) {
  const json doc = parse_json(text);
  return guarded("solution", [&] {
    if (!doc.is_array()) throw ParseError("solution must be a list");
    Solution solution;
    for (const json& entry : doc) {
      const NodeId node = field(entry, "node").get<int>();
      MessageVector vector(candidate_count);
      for (const auto& [key, value] : field(entry, "messages").items()) {
        const int c = static_cast<int>(parse_double(key, "candidate index"));
        if (c < 0 || c >= candidate_count || std::to_string(c) != key) {
          throw StructuralError("candidate index out of range: " + key);
        }
        const std::string sign = value.get<std::string>();
        if (sign == "+") {
          vector.set(CandidateId{c}, MessageSign::kPositive);
        } else if (sign == "-" || sign == "−") {
          vector.set(CandidateId{c}, MessageSign::kNegative);
        } else {
          throw ParseError("message sign must be \"+\" or \"-\"");
        }
      }
      solution.assign(node, vector);
    }
    return solution;
  });
}

std::string format_solution(const Solution& solution) {
  ordered_json doc = ordered_json::array();
  for (const SeedAssignment& a : solution.assignments()) {
    ordered_json messages = ordered_json::object();
    for (int c = 0; c < a.vector.candidate_count(); ++c) {
      const auto sign = a.vector.at(CandidateId{c});
      if (sign) {
        messages[std::to_string(c)] =
            *sign == MessageSign::kPositive ? "+" : "-";
      }
    }
    ordered_json entry;
    entry["node"] = a.node;
    entry["messages"] = std::move(messages);
    doc.push_back(std::move(entry));
  }
  return doc.dump();
}

SetCoverInstance parse_set_cover(std::string_view text) {
  const json doc = parse_json(text);
  return guarded("set cover", [&] {
    SetCoverInstance sc;
    sc.element_count = field(doc, "elements").get<int>();
    sc.sets = field(doc, "sets").get<std::vector<std::vector<int>>>();
    sc.h = doc.contains("h") ? doc.at("h").get<int>() : 1;
    return sc;
  });
}

VertexCoverInstance parse_vertex_cover(std::string_view text) {
  const json doc = parse_json(text);
  return guarded("vertex cover", [&] {
    VertexCoverInstance vc;
    vc.node_count = field(doc, "nodes").get<int>();
    for (const auto& pair :
         field(doc, "edges").get<std::vector<std::vector<int>>>()) {
      if (pair.size() != 2) throw ParseError("edges are [u, v] pairs");
      vc.edges.emplace_back(pair[0], pair[1]);
    }
    vc.k = doc.contains("k") ? doc.at("k").get<int>() : 1;
    return vc;
  });
}

std::shared_ptr<CustomRuleTable> parse_rule_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::shared_ptr<CustomRuleTable> table;
  std::string line;
  int line_number = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("rule table line " + std::to_string(line_number) + ": " +
                     why);
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string t; words >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (!table) {
      if (tokens.size() != 2 || tokens[0] != "candidates") {
        fail("expected \"candidates N\"");
      }
      const int n = static_cast<int>(parse_double(tokens[1], "count"));
      if (n < 2 || n > 8) fail("candidate count must lie in 2..8");
      table = std::make_shared<CustomRuleTable>(n);
      continue;
    }
    const int n = table->candidate_count();
    const auto bar = std::find(tokens.begin(), tokens.end(), "|");
    const auto arrow = std::find(tokens.begin(), tokens.end(), "->");
    if (bar == tokens.end() || arrow == tokens.end() || arrow < bar) {
      fail("expected \"ranking | messages -> ranking\"");
    }
    auto read_ranking = [&](auto first, auto last) {
      std::vector<int> order;
      for (auto it = first; it != last; ++it) {
        order.push_back(static_cast<int>(parse_double(*it, "candidate")));
      }
      if (static_cast<int>(order.size()) != n) fail("ranking length");
      return Ranking::from_indices(order);
    };
    const Ranking from = read_ranking(tokens.begin(), bar);
    const Ranking to = read_ranking(arrow + 1, tokens.end());
    std::string signs;
    for (auto it = bar + 1; it != arrow; ++it) signs += *it;
    if (static_cast<int>(signs.size()) != n) fail("one sign per candidate");
    MessageSet set;
    for (int c = 0; c < n; ++c) {
      if (signs[c] == '+') {
        set.insert(Message{CandidateId{c}, MessageSign::kPositive});
      } else if (signs[c] == '-') {
        set.insert(Message{CandidateId{c}, MessageSign::kNegative});
      } else if (signs[c] != '.') {
        fail("signs are +, - or .");
      }
    }
    table->set(from, set, to);
  }
  if (!table) throw ParseError("rule table is empty");
  return table;
}

RevisionRule parse_rule(std::string_view text) {
  if (text == "pessimistic") return RevisionRule::pessimistic();
  if (text == "optimistic") return RevisionRule::optimistic();
  if (text == "score") return RevisionRule::score_based();
  if (text.starts_with("score:")) {
    return RevisionRule::score_based(parse_double(text.substr(6), "epsilon"));
  }
  if (text.starts_with("custom:")) {
    return RevisionRule::custom(
        parse_rule_table(read_file(std::string(text.substr(7)))));
  }
  throw ArgumentError("unknown rule: " + std::string(text));
}

DiffusionModel parse_model(std::string_view text) {
  if (text == "ic") return DiffusionModel::kIndependentCascade;
  if (text == "lt") return DiffusionModel::kLinearThreshold;
  throw ArgumentError("unknown model: " + std::string(text));
}

SignRestriction parse_signs(std::string_view text) {
  if (text == "both") return SignRestriction::kBoth;
  if (text == "pos") return SignRestriction::kPositiveOnly;
  if (text == "neg") return SignRestriction::kNegativeOnly;
  throw ArgumentError("unknown sign restriction: " + std::string(text));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  return read_stream(in);
}

std::string read_stream(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace mivote
