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

#ifndef MIVOTE_IO_HPP_
#define MIVOTE_IO_HPP_

#include <istream>
#include <memory>
#include <string>
#include <string_view>

#include "mivote/diffusion.hpp"
#include "mivote/instances.hpp"
#include "mivote/model.hpp"
#include "mivote/revision.hpp"

namespace mivote {

// JSON documents; see docs/formats.md. Readers throw ParseError on malformed
// input and StructuralError on inconsistent content.
Instance parse_instance(std::string_view text);
Instance read_instance(std::istream& in);
std::string format_instance(const Instance& instance);

Solution parse_solution(std::string_view text, int candidate_count);
std::string format_solution(const Solution& solution);

SetCoverInstance parse_set_cover(std::string_view text);
VertexCoverInstance parse_vertex_cover(std::string_view text);

// Line-oriented revision table:
//   candidates 3
//   0 1 2 | - . + -> 2 0 1
std::shared_ptr<CustomRuleTable> parse_rule_table(std::string_view text);

// "pessimistic", "optimistic", "score", "score:EPS" or "custom:PATH".
RevisionRule parse_rule(std::string_view text);

DiffusionModel parse_model(std::string_view text);
SignRestriction parse_signs(std::string_view text);

std::string read_file(const std::string& path);
std::string read_stream(std::istream& in);

}  // namespace mivote

#endif  // MIVOTE_IO_HPP_
