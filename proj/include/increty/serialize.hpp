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

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "increty/cache.hpp"
#include "increty/error.hpp"
#include "increty/fun_check.hpp"
#include "increty/fun_infer.hpp"
#include "increty/fun_parser.hpp"
#include "increty/while_security.hpp"

namespace increty {

/// Per-instance text encoding of terms, bindings and results. An entry is
/// encoded as a whole so type variables can be named consistently across its
/// environment and result.
template <class L>
struct CacheCodec;

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// "name:τ," for each binding, sorted by name.
template <class T, class F>
std::string env_text(const Env<T>& env, F&& print) {
  std::string out;
  for (const auto& [name, value] : env.sorted_by_name()) {
    out += name.name();
    out += ':';
    out += print(value);
    out += ',';
  }
  return out;
}

template <class T, class F>
Env<T> parse_env(std::string_view text, F&& parse) {
  Env<T> env;
  if (text.empty()) return env;
  if (text.back() != ',') throw FormatError("environment must end with ','");
  text.remove_suffix(1);
  for (std::string_view item : split(text, ',')) {
    auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0) throw FormatError("malformed binding '" + std::string(item) + "'");
    Symbol name(item.substr(0, colon));
    if (env.contains(name)) throw FormatError("duplicate binding for " + name.name());
    env.insert_or_assign(name, parse(item.substr(colon + 1)));
  }
  return env;
}

}  // namespace detail

template <>
struct CacheCodec<fun::FunCheck> {
  static std::string term(const fun::Expr& e) { return fun::pretty(e); }
  static fun::Expr parse_term(std::string_view s) { return fun::parse_fun(s); }

  static std::pair<std::string, std::string> types(const fun::TypeEnv& env, const Type& r) {
    return {detail::env_text(env, [](Type t) { return to_string(t); }), to_string(r)};
  }

  struct Decoder {
    std::pair<fun::TypeEnv, Type> operator()(std::string_view env, std::string_view result) {
      auto parse = [](std::string_view s) { return fun::parse_type(s); };
      return {detail::parse_env<Type>(env, parse), parse(result)};
    }
    std::uint64_t min_fresh() const { return 0; }
  };
};

/// Type variables are renamed 'a, 'b, ... per entry, in order of appearance
/// across the environment, the type and the substitution. The result is
/// written `τ | {'a := τ, ...}`.
template <>
struct CacheCodec<fun::FunInfer> {
  static std::string term(const fun::Expr& e) { return fun::pretty(e); }
  static fun::Expr parse_term(std::string_view s) { return fun::parse_fun(s); }

  static std::pair<std::string, std::string> types(const fun::TypeEnv& env, const fun::Typing& r) {
    TypeVarNamer namer;
    std::string env_s = detail::env_text(env, [&](Type t) { return to_string(t, namer); });
    std::string out = to_string(r.type, namer) + " | {";
    std::vector<std::pair<std::string, Type>> binds;
    for (const auto& [v, t] : r.subst) binds.emplace_back(to_string(Type::Var(v), namer), t);
    std::sort(binds.begin(), binds.end(), [](const auto& a, const auto& b) {
      return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
    });
    for (std::size_t k = 0; k < binds.size(); ++k) {
      if (k) out += ", ";
      out += binds[k].first + " := " + to_string(binds[k].second, namer);
    }
    return {env_s, out + "}"};
  }

  struct Decoder {
    std::uint64_t next = 0;

    std::pair<fun::TypeEnv, fun::Typing> operator()(std::string_view env, std::string_view result) {
      std::map<std::string, std::uint32_t> ids;
      auto resolve = [&](const std::string& name) {
        auto [it, added] = ids.try_emplace(name, static_cast<std::uint32_t>(ids.size()));
        next = std::max<std::uint64_t>(next, it->second + 1);
        return Type::Var(it->second);
      };
      auto parse = [&](std::string_view s) { return fun::parse_type(s, resolve); };
      fun::TypeEnv g = detail::parse_env<Type>(env, parse);
      auto bar = result.find(" | {");
      if (bar == std::string_view::npos || result.back() != '}') throw FormatError("expected 'τ | {θ}'");
      Type tau = parse(result.substr(0, bar));
      std::string_view body = result.substr(bar + 4, result.size() - bar - 5);
      fun::Substitution::Map theta;
      if (!body.empty()) {
        for (std::string_view item : detail::split(body, ',')) {
          auto assign = item.find(":=");
          if (assign == std::string_view::npos) throw FormatError("malformed substitution binding");
          Type lhs = parse(item.substr(0, assign));
          if (!lhs.is_var()) throw FormatError("substitution must bind a type variable");
          theta.emplace(lhs.var_id(), parse(item.substr(assign + 2)));
        }
      }
      try {
        return {std::move(g), {tau, fun::Substitution::from(std::move(theta))}};
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
    }
    std::uint64_t min_fresh() const { return next; }
  };
};

template <>
struct CacheCodec<imp::WhileSecurity> {
  static std::string term(const imp::Phrase& p) { return imp::pretty(p); }
  static imp::Phrase parse_term(std::string_view s) { return imp::parse_while(s); }

  static std::pair<std::string, std::string> types(const imp::SecEnv& env, const imp::SecurityType& r) {
    return {detail::env_text(env, [](const imp::SecurityType& s) { return to_string(s); }), to_string(r)};
  }

  struct Decoder {
    std::pair<imp::SecEnv, imp::SecurityType> operator()(std::string_view env, std::string_view result) {
      auto parse = [](std::string_view s) {
        auto t = imp::parse_security_type(s);
        if (!t) throw FormatError("bad security type '" + std::string(s) + "'");
        return *t;
      };
      return {detail::parse_env<imp::SecurityType>(env, parse), parse(result)};
    }
    std::uint64_t min_fresh() const { return 0; }
  };
};

inline constexpr std::string_view kCacheMagic = "increty-cache v1";

/// Header line followed by one line per entry, entries sorted so that equal
/// caches dump to identical text.
template <LanguageInstance L>
std::string dump(const Cache<L>& cache) {
  using Codec = CacheCodec<L>;
  std::vector<std::string> lines;
  lines.reserve(cache.size());
  cache.for_each([&](const CacheEntry<L>& e) {
    auto [env, result] = Codec::types(e.env, e.result);
    lines.push_back(detail::hex64(e.term->hash()) + '\t' + Codec::term(e.term) + '\t' + env + '\t' + result);
  });
  std::sort(lines.begin(), lines.end());
  std::string out = std::string(kCacheMagic) + ' ' + std::string(L::name()) + " fresh=" +
                    std::to_string(cache.fresh_counter()) + '\n';
  for (const auto& l : lines) out += l + '\n';
  return out;
}

/// The instance tag of a dumped cache ("fun-check", "fun-infer", "while-sec").
inline std::string cache_instance(std::string_view text) {
  auto eol = text.find('\n');
  std::string_view header = text.substr(0, eol);
  if (!header.starts_with(kCacheMagic)) throw FormatError("not an increty cache (bad header)");
  auto parts = detail::split(header, ' ');
  if (parts.size() != 4 || !parts[3].starts_with("fresh=")) throw FormatError("malformed cache header");
  return std::string(parts[2]);
}

template <LanguageInstance L>
Cache<L> load(std::string_view text) {
  using Codec = CacheCodec<L>;
  std::string tag = cache_instance(text);
  if (tag != L::name()) throw FormatError("cache is for '" + tag + "', expected '" + std::string(L::name()) + "'");
  auto lines = detail::split(text, '\n');
  auto parts = detail::split(lines[0], ' ');
  std::uint64_t fresh = 0;
  auto digits = parts[3].substr(6);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), fresh);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) throw FormatError("malformed fresh counter");

  Cache<L> cache;
  typename Codec::Decoder decode;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    auto where = [&] { return "cache line " + std::to_string(i + 1) + ": "; };
    auto fields = detail::split(line, '\t');
    if (fields.size() != 4) throw FormatError(where() + "expected 4 tab-separated fields");
    typename L::Term term;
    try {
      term = Codec::parse_term(fields[1]);
    } catch (const ParseError& e) {
      throw FormatError(where() + e.what());
    }
    if (detail::hex64(term->hash()) != fields[0]) throw FormatError(where() + "key does not match term");
    try {
      auto [env, result] = decode(fields[2], fields[3]);
      if (!env.covers(term->free_vars()) || env.size() != term->free_vars().size())
        throw FormatError(where() + "environment is not restricted to FV(term)");
      if (!cache.insert({term, std::move(env), std::move(result)}))
        throw FormatError(where() + "duplicate entry");
    } catch (const ParseError& e) {
      throw FormatError(where() + e.what());
    }
  }
  cache.set_fresh_counter(std::max(fresh, decode.min_fresh()));
  return cache;
}

}  // namespace increty
