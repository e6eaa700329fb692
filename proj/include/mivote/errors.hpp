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

#ifndef MIVOTE_ERRORS_HPP_
#define MIVOTE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mivote {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph, ranking, or solution structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Out-of-range numeric argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Settings that cannot be combined, e.g. LT without weights.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration or oracle search beyond the configured caps.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The requested analysis does not apply to the rule.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

// A custom revision table has no entry for a query.
class RuleIncompleteError : public Error {
 public:
  using Error::Error;
};

// A constructed instance failed its own self-check.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Unreadable instance, solution, or rule-table file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mivote

#endif  // MIVOTE_ERRORS_HPP_
