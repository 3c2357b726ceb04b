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

#include <functional>
#include <string>
#include <string_view>

#include "increty/error.hpp"
#include "increty/fun_ast.hpp"
#include "increty/lexer.hpp"

namespace increty::fun {

namespace detail {

using increty::detail::TokenKind;
using increty::detail::TokenStream;

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kws[] = {"fun", "let", "in",    "if",  "then",
                                             "else", "true", "false", "int", "bool"};
  for (auto k : kws)
    if (k == s) return true;
  return false;
}

/// Maps spelled type variables ('a) to ids; null means variables are rejected.
using TypeVarResolver = std::function<Type(const std::string&)>;

class Parser {
 public:
  Parser(TokenStream ts, TypeVarResolver tv) : ts_(std::move(ts)), tv_(std::move(tv)) {}

  Expr program() {
    Expr e = expr();
    if (!ts_.at_end()) ts_.fail("unexpected trailing input");
    return e;
  }

  Type type() {
    Type dom = type_atom();
    if (ts_.accept("->")) return Type::Arrow(dom, type());
    return dom;
  }

  TokenStream& tokens() { return ts_; }

 private:
  Type type_atom() {
    const auto& t = ts_.peek();
    if (ts_.accept("int")) return Type::Int();
    if (ts_.accept("bool")) return Type::Bool();
    if (t.kind == TokenKind::TypeVar) {
      if (!tv_) ts_.fail("type variables are not allowed here");
      return tv_(ts_.next().text);
    }
    if (ts_.accept("(")) {
      Type inner = type();
      ts_.expect(")");
      return inner;
    }
    ts_.fail("expected a type");
  }

  Symbol ident(const char* what) {
    const auto& t = ts_.peek();
    if (t.kind != TokenKind::Ident || is_keyword(t.text)) ts_.fail(std::string("expected ") + what);
    return Symbol(ts_.next().text);
  }

  Expr expr() {
    const Span at = ts_.peek().span;
    if (ts_.accept("let")) {
      Symbol x = ident("bound variable");
      ts_.expect("=");
      Expr bound = expr();
      ts_.expect("in");
      return let_in(x, bound, expr(), at);
    }
    if (ts_.accept("if")) {
      Expr c = expr();
      ts_.expect("then");
      Expr t = expr();
      ts_.expect("else");
      return cond(c, t, expr(), at);
    }
    if (ts_.accept("fun")) {
      Symbol f = ident("function name");
      if (ts_.accept("(")) {
        Symbol x = ident("parameter name");
        ts_.expect(":");
        Type px = type();
        ts_.expect(")");
        ts_.expect("->");
        ts_.expect("(");
        Expr body = expr();
        ts_.expect(":");
        Type pb = type();
        ts_.expect(")");
        return abs(f, x, px, body, pb, at);
      }
      Symbol x = ident("parameter name");
      ts_.expect("->");
      return abs_untyped(f, x, expr(), at);
    }
    return comparison();
  }

  Expr comparison() {
    Expr lhs = additive();
    const Span at = ts_.peek().span;
    for (BinOp op : {BinOp::Eq, BinOp::Le, BinOp::Ge}) {
      if (ts_.accept(spelling(op))) return binop(lhs, op, additive(), at);
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      const Span at = ts_.peek().span;
      if (ts_.accept("+")) lhs = binop(lhs, BinOp::Add, multiplicative(), at);
      else if (ts_.accept("-")) lhs = binop(lhs, BinOp::Sub, multiplicative(), at);
      else return lhs;
    }
  }

  Expr multiplicative() {
    Expr lhs = application();
    for (;;) {
      const Span at = ts_.peek().span;
      if (ts_.accept("*")) lhs = binop(lhs, BinOp::Mul, application(), at);
      else return lhs;
    }
  }

  bool starts_atom() const {
    const auto& t = ts_.peek();
    if (t.kind == TokenKind::Int) return true;
    if (t.kind == TokenKind::Ident) return !is_keyword(t.text) || t.text == "true" || t.text == "false";
    return t.kind == TokenKind::Punct && t.text == "(";
  }

  Expr application() {
    Expr fn = atom();
    while (starts_atom()) {
      const Span at = ts_.peek().span;
      fn = app(fn, atom(), at);
    }
    return fn;
  }

  Expr atom() {
    const auto& t = ts_.peek();
    const Span at = t.span;
    if (t.kind == TokenKind::Int) {
      const std::string text = ts_.next().text;
      try {
        return integer(std::stoll(text), at);
      } catch (const std::out_of_range&) {
        throw ParseError(at, "integer literal out of range");
      }
    }
    if (ts_.accept("true")) return boolean(true, at);
    if (ts_.accept("false")) return boolean(false, at);
    if (ts_.accept("(")) {
      Expr inner = expr();
      ts_.expect(")");
      return inner;
    }
    return var(ident("an expression"), at);
  }

  TokenStream ts_;
  TypeVarResolver tv_;
};

}  // namespace detail

/// Parses FUN concrete syntax (typed or untyped abstractions).
inline Expr parse_fun(std::string_view text) {
  detail::Parser p(increty::detail::TokenStream(increty::detail::tokenize(text)), nullptr);
  return p.program();
}

/// Parses a type; `'a`-style variables go through `resolve` when given.
inline Type parse_type(std::string_view text, detail::TypeVarResolver resolve = nullptr) {
  detail::Parser p(increty::detail::TokenStream(increty::detail::tokenize(text)), std::move(resolve));
  Type t = p.type();
  if (!p.tokens().at_end()) p.tokens().fail("unexpected trailing input");
  return t;
}

}  // namespace increty::fun
