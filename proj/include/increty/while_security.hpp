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

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "increty/cache.hpp"
#include "increty/engine.hpp"
#include "increty/env.hpp"
#include "increty/error.hpp"
#include "increty/while_ast.hpp"

namespace increty::imp {

enum class Level : std::uint8_t { L, H };

inline Level join(Level a, Level b) { return (a == Level::H || b == Level::H) ? Level::H : Level::L; }
inline Level meet(Level a, Level b) { return (a == Level::L || b == Level::L) ? Level::L : Level::H; }
inline bool flows(Level a, Level b) { return a == Level::L || b == Level::H; }

/// ς ::= τ | τ var | τ cmd over the two-point lattice L ⊑ H.
struct SecurityType {
  enum class Kind : std::uint8_t { Base, Var, Cmd };
  Kind kind = Kind::Base;
  Level level = Level::L;

  static SecurityType base(Level l) { return {Kind::Base, l}; }
  static SecurityType var(Level l) { return {Kind::Var, l}; }
  static SecurityType cmd(Level l) { return {Kind::Cmd, l}; }

  friend bool operator==(const SecurityType&, const SecurityType&) = default;
};

inline std::string to_string(Level l) { return l == Level::L ? "L" : "H"; }

inline std::string to_string(const SecurityType& s) {
  switch (s.kind) {
    case SecurityType::Kind::Var: return to_string(s.level) + " var";
    case SecurityType::Kind::Cmd: return to_string(s.level) + " cmd";
    default: return to_string(s.level);
  }
}

inline std::optional<SecurityType> parse_security_type(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return std::nullopt;
  Level l;
  if (text[0] == 'L') l = Level::L;
  else if (text[0] == 'H') l = Level::H;
  else return std::nullopt;
  auto rest = trim(text.substr(1));
  if (rest.empty()) return SecurityType::base(l);
  if (rest == "var") return SecurityType::var(l);
  if (rest == "cmd") return SecurityType::cmd(l);
  return std::nullopt;
}

inline std::ostream& operator<<(std::ostream& os, const SecurityType& s) { return os << to_string(s); }

/// ς1 ⊆ ς2: L ⊆ H on levels, contravariant on commands, var types only
/// related to themselves.
inline bool subtype(const SecurityType& a, const SecurityType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SecurityType::Kind::Base: return flows(a.level, b.level);
    case SecurityType::Kind::Cmd: return flows(b.level, a.level);
    default: return a.level == b.level;
  }
}

using SecEnv = Env<SecurityType>;

namespace rules {

[[noreturn]] inline void fail(const Phrase& p, std::string condition) {
  throw TypeError(p->span(), pretty(p), std::move(condition));
}

/// Level of a phrase read in expression position: τ var is dereferenced to τ.
inline Level rvalue(const Phrase& p, const SecurityType& s) {
  if (s.kind == SecurityType::Kind::Cmd) fail(p, "expression position");
  return s.level;
}

inline SecurityType leaf(const SecEnv& env, const Phrase& p) {
  switch (p->kind()) {
    case PhraseKind::Num:
    case PhraseKind::True:
    case PhraseKind::False:
      return SecurityType::base(Level::L);
    case PhraseKind::Skip:
      return SecurityType::cmd(Level::H);
    case PhraseKind::Var: {
      const SecurityType* s = env.find(p->name());
      if (!s) fail(p, p->name().name() + " ∈ dom(Γ)");
      if (s->kind != SecurityType::Kind::Var) fail(p, "Γ(x) = τ var");
      return *s;
    }
    default:
      fail(p, "leaf phrase");
  }
}

inline Level cmd_level(const Phrase& p, const SecurityType& s) {
  if (s.kind != SecurityType::Kind::Cmd) fail(p, "command position");
  return s.level;
}

inline SecurityType join_node(const Phrase& p, std::span<const SecurityType> r) {
  const auto& kids = p->children();
  switch (p->kind()) {
    case PhraseKind::AOp:
    case PhraseKind::Or:
    case PhraseKind::Leq:
      return SecurityType::base(join(rvalue(kids[0], r[0]), rvalue(kids[1], r[1])));
    case PhraseKind::Not:
      return SecurityType::base(rvalue(kids[0], r[0]));
    case PhraseKind::Assign: {
      if (r[0].kind != SecurityType::Kind::Var) fail(p, "Γ(x) = τ_x var");
      Level target = r[0].level;
      if (!flows(rvalue(kids[1], r[1]), target)) fail(p, "τ_a = τ_x");
      return SecurityType::cmd(target);
    }
    case PhraseKind::Seq:
      return SecurityType::cmd(meet(cmd_level(kids[0], r[0]), cmd_level(kids[1], r[1])));
    case PhraseKind::If: {
      Level body = meet(cmd_level(kids[1], r[1]), cmd_level(kids[2], r[2]));
      if (!flows(rvalue(kids[0], r[0]), body)) fail(p, "τ_1 = τ_2 = τ_b");
      return SecurityType::cmd(body);
    }
    case PhraseKind::While: {
      Level body = cmd_level(kids[1], r[1]);
      if (!flows(rvalue(kids[0], r[0]), body)) fail(p, "τ_1 = τ_b");
      return SecurityType::cmd(body);
    }
    default:
      fail(p, "inner phrase");
  }
}

}  // namespace rules

/// Algorithm S with subsumption folded in: the least type for expressions
/// and the greatest τ cmd for commands. Γ ⊢ p : ς is derivable iff
/// subtype(check_S(Γ, p), ς).
inline SecurityType check_S(const SecEnv& env, const Phrase& p) {
  auto kids = p->children();
  if (kids.empty()) return rules::leaf(env, p);
  std::vector<SecurityType> r;
  r.reserve(kids.size());
  for (const Phrase& k : kids) r.push_back(check_S(env, k));
  return rules::join_node(p, r);
}

inline bool derivable(const SecEnv& env, const Phrase& p, const SecurityType& s) {
  try {
    return subtype(check_S(env, p), s);
  } catch (const TypeError&) {
    return false;
  }
}

/// ∀y ∈ FV(p). Γ(y) = Γ'(y), with both environments defined on FV(p).
inline bool compat_S(const SecEnv& env, const SecEnv& cached, const Phrase& p) {
  return env.agrees_on(cached, p->free_vars(), [](const SecurityType& a, const SecurityType& b) { return a == b; });
}

/// S as a language instance (algorithm IS). Every tr is the identity.
struct WhileSecurity {
  using Term = Phrase;
  using Binding = SecurityType;
  using Result = SecurityType;
  struct Frame {};

  static constexpr std::string_view name() { return "while-sec"; }

  std::span<const Phrase> subterms(const Phrase& p) const { return p->children(); }
  SecurityType base(const SecEnv& env, const Phrase& p) const { return check_S(env, p); }
  EnvRef<SecurityType> tr(const Phrase&, std::size_t, const SecEnv& env, std::span<const SecurityType>, Frame&) const {
    return env;
  }
  SecurityType checkjoin(const Phrase& p, const SecEnv&, std::span<const SecurityType> r, Frame&) const {
    return rules::join_node(p, r);
  }
  bool compat(const SecEnv& env, const SecEnv& cached, const Phrase& p) const { return compat_S(env, cached, p); }
  SecurityType reuse(const SecEnv&, const SecEnv&, const Phrase&, const SecurityType& r) const { return r; }
  EnvRef<SecurityType> rebuild_env(const Phrase&, std::size_t, const SecEnv& env, const SecurityType*,
                     std::span<const SecurityType>) const {
    return env;
  }
  bool equivalent(const SecEnv&, const SecurityType& a, const SecurityType& b) const { return a == b; }
};

using SecurityCache = Cache<WhileSecurity>;

inline Outcome<WhileSecurity> check_IS(const SecEnv& env, SecurityCache cache, const Phrase& p,
                                       bool record_trace = false) {
  WhileSecurity inst;
  return incremental_type(env, std::move(cache), p, inst, record_trace);
}

/// Reads `name=L|H` lines into an environment of τ var bindings. Blank lines
/// and lines starting with '#' are skipped.
inline SecEnv parse_levels(std::istream& in) {
  SecEnv env;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view text(line.data() + first, last - first + 1);
    auto eq = text.find('=');
    auto bad = [&] { return FormatError("levels line " + std::to_string(lineno) + ": expected name=L|H"); };
    if (eq == std::string_view::npos) throw bad();
    auto name = text.substr(0, eq);
    auto level = text.substr(eq + 1);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.remove_suffix(1);
    while (!level.empty() && (level.front() == ' ' || level.front() == '\t')) level.remove_prefix(1);
    if (name.empty() || (level != "L" && level != "H")) throw bad();
    env.insert_or_assign(Symbol(name), SecurityType::var(level == "L" ? Level::L : Level::H));
  }
  return env;
}

inline SecEnv parse_levels(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_levels(in);
}

/// Variables of `p` that `env` does not assign a level to, by name.
inline std::vector<std::string> missing_levels(const SecEnv& env, const Phrase& p) {
  std::vector<std::string> out;
  for (Symbol y : p->free_vars())
    if (!env.contains(y)) out.push_back(y.name());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace increty::imp
