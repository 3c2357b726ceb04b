// Copyright 2026 The increty Authors
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

#pragma once

#include <stdexcept>
#include <string>

#include "increty/symbol.hpp"

namespace increty {

class ParseError : public std::runtime_error {
 public:
  ParseError(Span at, const std::string& what)
      : std::runtime_error(std::to_string(at.line) + ":" + std::to_string(at.column) +
                           ": syntax error: " + what),
        span_(at) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

/// A typing (or security) failure at a specific node. `node` is the
/// pretty-printed failing subterm, `condition` the violated side condition.
class TypeError : public std::runtime_error {
 public:
  TypeError(Span at, std::string node, std::string condition)
      : std::runtime_error(format(at, node, condition)),
        span_(at),
        node_(std::move(node)),
        condition_(std::move(condition)) {}

  Span span() const { return span_; }
  const std::string& node() const { return node_; }
  const std::string& condition() const { return condition_; }

 private:
  static std::string format(Span at, const std::string& node, const std::string& cond) {
    std::string out;
    if (at.line > 0) out += std::to_string(at.line) + ":" + std::to_string(at.column) + ": ";
    out += "type error in `" + node + "`: " + cond;
    return out;
  }

  Span span_;
  std::string node_;
  std::string condition_;
};

/// Malformed cache files, unknown instance tags and similar I/O-level faults.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace increty
