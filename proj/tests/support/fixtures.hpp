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

// The factorial programs and their expected cache, shared by several suites.

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "increty.hpp"

namespace increty::testing {

inline constexpr std::string_view kFact =
    "let fact = fun fact (n : int) -> (if n >= 1 then n * fact (n - 1) else n : int) in fact 7";
inline constexpr std::string_view kFactPrime =
    "let fact = fun fact (n : int) -> (if n >= 3 then n * fact (n - 1) else n : int) in fact 7";

/// One cache row rendered as "term | name:type,... | type".
inline std::string row(std::string_view term, std::string_view env, std::string_view type) {
  return std::string(term) + " | " + std::string(env) + " | " + std::string(type);
}

/// The cache of the factorial program, written out by hand.
inline std::set<std::string> expected_fact_cache() {
  const std::string fun =
      "fun fact (n : int) -> (if n >= 1 then n * fact (n - 1) else n : int)";
  const std::string both = "fact:int -> int,n:int,";
  return {
      row(kFact, "", "int"),
      row("1", "", "int"),
      row("7", "", "int"),
      row(fun, "", "int -> int"),
      row("n", "n:int,", "int"),
      row("n - 1", "n:int,", "int"),
      row("n >= 1", "n:int,", "bool"),
      row("fact 7", "fact:int -> int,", "int"),
      row("fact", "fact:int -> int,", "int -> int"),
      row("if n >= 1 then n * fact (n - 1) else n", both, "int"),
      row("n * fact (n - 1)", both, "int"),
      row("fact (n - 1)", both, "int"),
  };
}

inline std::set<std::string> rows(const fun::CheckCache& cache) {
  std::set<std::string> out;
  cache.for_each([&](const CacheEntry<fun::FunCheck>& e) {
    std::string env;
    for (const auto& [name, t] : e.env.sorted_by_name()) env += name.name() + ":" + to_string(t) + ",";
    out.insert(row(fun::pretty(e.term), env, to_string(e.result)));
  });
  return out;
}

inline fun::CheckCache fact_cache() {
  fun::FunCheck inst;
  auto f = fun::parse_fun(kFact);
  return build_cache(annotate(f, {}, inst), {}, inst);
}

}  // namespace increty::testing
