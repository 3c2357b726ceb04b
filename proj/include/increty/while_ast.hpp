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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "increty/error.hpp"
#include "increty/lexer.hpp"
#include "increty/symbol.hpp"

namespace increty::imp {

enum class PhraseKind : std::uint8_t {
  // arithmetic
  Num, Var, AOp,
  // boolean
  True, False, Or, Not, Leq,
  // commands
  Skip, Assign, Seq, If, While,
};

enum class Sort : std::uint8_t { Arith, Bool, Cmd };

enum class AOp : std::uint8_t { Add, Sub, Mul };

inline std::string_view spelling(AOp op) {
  switch (op) {
    case AOp::Add: return "+";
    case AOp::Sub: return "-";
    case AOp::Mul: return "*";
  }
  return "?";
}

inline Sort sort_of(PhraseKind k) {
  switch (k) {
    case PhraseKind::Num:
    case PhraseKind::Var:
    case PhraseKind::AOp: return Sort::Arith;
    case PhraseKind::True:
    case PhraseKind::False:
    case PhraseKind::Or:
    case PhraseKind::Not:
    case PhraseKind::Leq: return Sort::Bool;
    default: return Sort::Cmd;
  }
}

class PhraseNode;
using Phrase = std::shared_ptr<const PhraseNode>;

/// A WHILE phrase: arithmetic expression, boolean expression or command.
/// `x := a` keeps the target as a Var child so it is typed like any subterm.
class PhraseNode {
 public:
  PhraseKind kind() const { return kind_; }
  Sort sort() const { return sort_of(kind_); }
  Span span() const { return span_; }

  std::uint64_t number() const { return number_; }
  Symbol name() const { return name_; }  // Var, and the target of Assign
  AOp op() const { return op_; }
  std::span<const Phrase> children() const { return children_; }
  const Phrase& child(std::size_t i) const { return children_[i]; }

  std::uint64_t hash() const { return hash_; }
  /// Every variable occurring in the phrase (WHILE has no binders), sorted by id.
  std::span<const Symbol> free_vars() const { return fv_; }
  std::size_t size() const { return size_; }

 private:
  friend Phrase make_phrase(PhraseKind, Span, std::vector<Phrase>, Symbol, std::uint64_t, AOp);
  PhraseNode() = default;

  PhraseKind kind_ = PhraseKind::Skip;
  Span span_;
  std::uint64_t number_ = 0;
  Symbol name_;
  AOp op_ = AOp::Add;
  std::vector<Phrase> children_;
  std::uint64_t hash_ = 0;
  std::vector<Symbol> fv_;
  std::size_t size_ = 1;
};

inline Phrase make_phrase(PhraseKind k, Span at, std::vector<Phrase> kids, Symbol name = {},
                          std::uint64_t number = 0, AOp op = AOp::Add) {
  PhraseNode n;
  n.kind_ = k;
  n.span_ = at;
  n.children_ = std::move(kids);
  n.name_ = name;
  n.number_ = number;
  n.op_ = op;
  std::uint64_t h = hash_combine(0x3a11ull, static_cast<std::uint64_t>(k));
  if (k == PhraseKind::Num) h = hash_combine(h, number);
  if (k == PhraseKind::Var) {
    h = hash_combine(h, name.hash());
    n.fv_ = {name};
  }
  if (k == PhraseKind::AOp) h = hash_combine(h, static_cast<std::uint64_t>(op));
  for (const Phrase& c : n.children_) {
    h = hash_combine(h, c->hash());
    n.size_ += c->size();
    std::vector<Symbol> merged;
    merged.reserve(n.fv_.size() + c->free_vars().size());
    std::set_union(n.fv_.begin(), n.fv_.end(), c->free_vars().begin(), c->free_vars().end(),
                   std::back_inserter(merged));
    n.fv_ = std::move(merged);
  }
  n.hash_ = h;
  return Phrase(new PhraseNode(std::move(n)));
}

namespace detail {
inline void require(const Phrase& p, Sort s, const char* what) {
  if (p->sort() != s) throw std::invalid_argument(std::string("expected ") + what);
}
}  // namespace detail

inline Phrase num(std::uint64_t n, Span at = {}) { return make_phrase(PhraseKind::Num, at, {}, {}, n); }
inline Phrase var(Symbol x, Span at = {}) { return make_phrase(PhraseKind::Var, at, {}, x); }
inline Phrase var(std::string_view x, Span at = {}) { return var(Symbol(x), at); }
inline Phrase aop(Phrase a1, AOp op, Phrase a2, Span at = {}) {
  detail::require(a1, Sort::Arith, "arithmetic operand");
  detail::require(a2, Sort::Arith, "arithmetic operand");
  return make_phrase(PhraseKind::AOp, at, {std::move(a1), std::move(a2)}, {}, 0, op);
}
inline Phrase tt(Span at = {}) { return make_phrase(PhraseKind::True, at, {}); }
inline Phrase ff(Span at = {}) { return make_phrase(PhraseKind::False, at, {}); }
inline Phrase or_(Phrase b1, Phrase b2, Span at = {}) {
  detail::require(b1, Sort::Bool, "boolean operand");
  detail::require(b2, Sort::Bool, "boolean operand");
  return make_phrase(PhraseKind::Or, at, {std::move(b1), std::move(b2)});
}
inline Phrase not_(Phrase b, Span at = {}) {
  detail::require(b, Sort::Bool, "boolean operand");
  return make_phrase(PhraseKind::Not, at, {std::move(b)});
}
inline Phrase leq(Phrase a1, Phrase a2, Span at = {}) {
  detail::require(a1, Sort::Arith, "arithmetic operand");
  detail::require(a2, Sort::Arith, "arithmetic operand");
  return make_phrase(PhraseKind::Leq, at, {std::move(a1), std::move(a2)});
}
inline Phrase skip(Span at = {}) { return make_phrase(PhraseKind::Skip, at, {}); }
inline Phrase assign(Symbol x, Phrase a, Span at = {}, Span target_at = {}) {
  detail::require(a, Sort::Arith, "arithmetic right-hand side");
  if (target_at.line == 0) target_at = at;
  return make_phrase(PhraseKind::Assign, at, {var(x, target_at), std::move(a)}, x);
}
inline Phrase assign(std::string_view x, Phrase a, Span at = {}) { return assign(Symbol(x), std::move(a), at); }
inline Phrase seq(Phrase c1, Phrase c2, Span at = {}) {
  detail::require(c1, Sort::Cmd, "command");
  detail::require(c2, Sort::Cmd, "command");
  return make_phrase(PhraseKind::Seq, at, {std::move(c1), std::move(c2)});
}
inline Phrase if_(Phrase b, Phrase c1, Phrase c2, Span at = {}) {
  detail::require(b, Sort::Bool, "boolean guard");
  detail::require(c1, Sort::Cmd, "command");
  detail::require(c2, Sort::Cmd, "command");
  return make_phrase(PhraseKind::If, at, {std::move(b), std::move(c1), std::move(c2)});
}
inline Phrase while_(Phrase b, Phrase c, Span at = {}) {
  detail::require(b, Sort::Bool, "boolean guard");
  detail::require(c, Sort::Cmd, "command");
  return make_phrase(PhraseKind::While, at, {std::move(b), std::move(c)});
}

/// Same node with new children.
inline Phrase with_children(const PhraseNode& p, std::vector<Phrase> kids) {
  if (p.kind() == PhraseKind::Assign) return assign(kids[0]->name(), kids[1], p.span(), kids[0]->span());
  return make_phrase(p.kind(), p.span(), std::move(kids), p.name(), p.number(), p.op());
}

inline bool structurally_equal(const PhraseNode& a, const PhraseNode& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.number() != b.number() || a.name() != b.name() || a.op() != b.op()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!structurally_equal(*a.child(i), *b.child(i))) return false;
  return true;
}
inline bool structurally_equal(const Phrase& a, const Phrase& b) { return structurally_equal(*a, *b); }

// Printing ------------------------------------------------------------------

namespace detail {

// Commands: 0 sequence, 1 simple. Booleans: 0 or, 1 not/atom.
// Arithmetic: 0 additive, 1 multiplicative, 2 atom.
inline int level_of(const PhraseNode& p) {
  switch (p.kind()) {
    case PhraseKind::Seq: return 0;
    case PhraseKind::Or: return 0;
    case PhraseKind::AOp: return p.op() == AOp::Mul ? 1 : 0;
    case PhraseKind::Num:
    case PhraseKind::Var: return 2;
    default: return 1;
  }
}

inline void print(std::string& out, const PhraseNode& p, int need) {
  const bool paren = level_of(p) < need;
  if (paren) out += '(';
  switch (p.kind()) {
    case PhraseKind::Num: out += std::to_string(p.number()); break;
    case PhraseKind::Var: out += p.name().name(); break;
    case PhraseKind::AOp: {
      const int own = level_of(p);
      print(out, *p.child(0), own);
      out += ' ';
      out += spelling(p.op());
      out += ' ';
      print(out, *p.child(1), own + 1);
      break;
    }
    case PhraseKind::True: out += "true"; break;
    case PhraseKind::False: out += "false"; break;
    case PhraseKind::Or:
      print(out, *p.child(0), 0);
      out += " or ";
      print(out, *p.child(1), 1);
      break;
    case PhraseKind::Not:
      out += "not ";
      print(out, *p.child(0), 1);
      break;
    case PhraseKind::Leq:
      print(out, *p.child(0), 0);
      out += " <= ";
      print(out, *p.child(1), 0);
      break;
    case PhraseKind::Skip: out += "skip"; break;
    case PhraseKind::Assign:
      out += p.name().name() + " := ";
      print(out, *p.child(1), 0);
      break;
    case PhraseKind::Seq:
      print(out, *p.child(0), 1);
      out += " ; ";
      print(out, *p.child(1), 0);
      break;
    case PhraseKind::If:
      out += "if ";
      print(out, *p.child(0), 0);
      out += " then ";
      print(out, *p.child(1), 1);
      out += " else ";
      print(out, *p.child(2), 1);
      break;
    case PhraseKind::While:
      out += "while ";
      print(out, *p.child(0), 0);
      out += " do ";
      print(out, *p.child(1), 1);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

/// Concrete syntax accepted by `parse_while`.
inline std::string pretty(const PhraseNode& p) {
  std::string out;
  detail::print(out, p, 0);
  return out;
}
inline std::string pretty(const Phrase& p) { return pretty(*p); }

// Parsing -------------------------------------------------------------------

namespace detail {

using increty::detail::TokenKind;
using increty::detail::TokenStream;

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kws[] = {"skip", "if", "then", "else", "while",
                                             "do",   "not", "or",  "true", "false"};
  for (auto k : kws)
    if (k == s) return true;
  return false;
}

class Parser {
 public:
  explicit Parser(TokenStream ts) : ts_(std::move(ts)) {}

  Phrase phrase() {
    const std::size_t start = ts_.position();
    // Commands, then booleans, then arithmetic; the first parse that
    // consumes the whole input wins. Otherwise report the error that got
    // furthest into the input.
    std::optional<ParseError> best;
    auto later = [](Span a, Span b) { return a.line != b.line ? a.line > b.line : a.column > b.column; };
    for (int attempt = 0; attempt < 3; ++attempt) {
      ts_.rewind(start);
      try {
        Phrase p = attempt == 0 ? command() : attempt == 1 ? boolean() : arith();
        if (ts_.at_end()) return p;
        ts_.fail("unexpected trailing input");
      } catch (const ParseError& e) {
        if (!best || later(e.span(), best->span())) best = e;
      }
    }
    throw *best;
  }

  Phrase command() {
    Phrase first = simple_command();
    const Span at = ts_.peek().span;
    if (ts_.accept(";")) return seq(first, command(), at);
    return first;
  }

 private:
  Symbol ident(const char* what) {
    const auto& t = ts_.peek();
    if (t.kind != TokenKind::Ident || is_keyword(t.text)) ts_.fail(std::string("expected ") + what);
    return Symbol(ts_.next().text);
  }

  Phrase simple_command() {
    const Span at = ts_.peek().span;
    if (ts_.accept("skip")) return skip(at);
    if (ts_.accept("if")) {
      Phrase b = boolean();
      ts_.expect("then");
      Phrase c1 = simple_command();
      ts_.expect("else");
      return if_(b, c1, simple_command(), at);
    }
    if (ts_.accept("while")) {
      Phrase b = boolean();
      ts_.expect("do");
      return while_(b, simple_command(), at);
    }
    if (ts_.accept("(")) {
      Phrase c = command();
      ts_.expect(")");
      return c;
    }
    Symbol x = ident("a command");
    ts_.expect(":=");
    return assign(x, arith(), at, at);
  }

  Phrase boolean() {
    Phrase lhs = bool_factor();
    for (;;) {
      const Span at = ts_.peek().span;
      if (!ts_.accept("or")) return lhs;
      lhs = or_(lhs, bool_factor(), at);
    }
  }

  Phrase bool_factor() {
    const Span at = ts_.peek().span;
    if (ts_.accept("not")) return not_(bool_factor(), at);
    if (ts_.accept("true")) return tt(at);
    if (ts_.accept("false")) return ff(at);
    if (ts_.is("(")) {
      // Either a parenthesised boolean or the left side of a comparison.
      const std::size_t save = ts_.position();
      try {
        ts_.expect("(");
        Phrase b = boolean();
        ts_.expect(")");
        if (!ts_.is("<=") && !ts_.is("+") && !ts_.is("-") && !ts_.is("*")) return b;
      } catch (const ParseError&) {
      }
      ts_.rewind(save);
    }
    Phrase a1 = arith();
    const Span op_at = ts_.peek().span;
    ts_.expect("<=");
    return leq(a1, arith(), op_at);
  }

  Phrase arith() {
    Phrase lhs = term();
    for (;;) {
      const Span at = ts_.peek().span;
      if (ts_.accept("+")) lhs = aop(lhs, AOp::Add, term(), at);
      else if (ts_.accept("-")) lhs = aop(lhs, AOp::Sub, term(), at);
      else return lhs;
    }
  }

  Phrase term() {
    Phrase lhs = factor();
    for (;;) {
      const Span at = ts_.peek().span;
      if (!ts_.accept("*")) return lhs;
      lhs = aop(lhs, AOp::Mul, factor(), at);
    }
  }

  Phrase factor() {
    const auto& t = ts_.peek();
    const Span at = t.span;
    if (t.kind == TokenKind::Int) {
      const std::string text = ts_.next().text;
      try {
        return num(std::stoull(text), at);
      } catch (const std::out_of_range&) {
        throw ParseError(at, "integer literal out of range");
      }
    }
    if (ts_.accept("(")) {
      Phrase a = arith();
      ts_.expect(")");
      return a;
    }
    return var(ident("an arithmetic expression"), at);
  }

  TokenStream ts_;
};

}  // namespace detail

/// Parses a WHILE phrase of any sort (command, boolean or arithmetic).
inline Phrase parse_while(std::string_view text) {
  detail::Parser p(increty::detail::TokenStream(increty::detail::tokenize(text)));
  return p.phrase();
}

}  // namespace increty::imp
