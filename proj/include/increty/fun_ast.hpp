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
#include <unordered_map>
#include <vector>

#include "increty/fun_type.hpp"
#include "increty/symbol.hpp"

namespace increty::fun {

enum class ExprKind : std::uint8_t { Const, Var, Abs, Op, App, If, Let };

enum class BinOp : std::uint8_t { Add, Mul, Sub, Eq, Le, Ge };

inline std::string_view spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Mul: return "*";
    case BinOp::Sub: return "-";
    case BinOp::Eq: return "=";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

/// {+,*,-} are int x int -> int; {=,<=,>=} are int x int -> bool.
inline bool is_comparison(BinOp op) { return op == BinOp::Eq || op == BinOp::Le || op == BinOp::Ge; }
inline Type operand_type(BinOp) { return Type::Int(); }
inline Type result_type(BinOp op) { return is_comparison(op) ? Type::Bool() : Type::Int(); }

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// One node of a FUN expression. Immutable once built; children are shared.
/// The typed and untyped variants differ only in whether abstractions carry
/// parameter/body annotations.
class ExprNode {
 public:
  ExprKind kind() const { return kind_; }
  Span span() const { return span_; }

  // Const
  bool is_bool_literal() const { return literal_type_ == Type::Bool(); }
  std::int64_t int_value() const { return value_; }
  bool bool_value() const { return value_ != 0; }
  Type literal_type() const { return literal_type_; }

  // Var: the variable. Abs: the function name. Let: the bound variable.
  Symbol name() const { return name_; }
  // Abs
  Symbol param() const { return param_; }
  const std::optional<Type>& param_type() const { return param_type_; }
  const std::optional<Type>& body_type() const { return body_type_; }
  bool annotated() const { return param_type_.has_value(); }
  const Expr& body() const { return children_[0]; }
  // Op
  BinOp op() const { return op_; }
  // Let: children are (bound, body); If: (cond, then, else); Op/App: (lhs, rhs)
  std::span<const Expr> children() const { return children_; }
  const Expr& child(std::size_t i) const { return children_[i]; }

  std::uint64_t hash() const { return hash_; }
  /// Free variables, sorted by symbol id.
  std::span<const Symbol> free_vars() const { return fv_; }
  std::size_t size() const { return size_; }

 private:
  friend struct Builder;
  ExprNode() = default;

  ExprKind kind_ = ExprKind::Const;
  Span span_;
  std::int64_t value_ = 0;
  Type literal_type_;
  Symbol name_;
  Symbol param_;
  std::optional<Type> param_type_;
  std::optional<Type> body_type_;
  BinOp op_ = BinOp::Add;
  std::vector<Expr> children_;
  std::uint64_t hash_ = 0;
  std::vector<Symbol> fv_;
  std::size_t size_ = 1;
};

namespace detail {
inline std::vector<Symbol> union_sorted(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::vector<Symbol> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
inline std::vector<Symbol> minus(std::span<const Symbol> a, std::initializer_list<Symbol> drop) {
  std::vector<Symbol> out;
  out.reserve(a.size());
  for (Symbol s : a)
    if (std::find(drop.begin(), drop.end(), s) == drop.end()) out.push_back(s);
  return out;
}
inline std::uint64_t opt_type_hash(const std::optional<Type>& t) { return t ? t->hash() : 0x0ull; }
}  // namespace detail

struct Builder {
  static Expr finish(ExprNode&& n) {
    std::uint64_t h = hash_combine(0x5eedull, static_cast<std::uint64_t>(n.kind_));
    switch (n.kind_) {
      case ExprKind::Const:
        h = hash_combine(h, static_cast<std::uint64_t>(n.value_));
        h = hash_combine(h, n.literal_type_.hash());
        break;
      case ExprKind::Var:
        h = hash_combine(h, n.name_.hash());
        n.fv_ = {n.name_};
        break;
      case ExprKind::Abs:
        h = hash_combine(h, n.name_.hash());
        h = hash_combine(h, n.param_.hash());
        h = hash_combine(h, detail::opt_type_hash(n.param_type_));
        h = hash_combine(h, detail::opt_type_hash(n.body_type_));
        n.fv_ = detail::minus(n.children_[0]->free_vars(), {n.name_, n.param_});
        break;
      case ExprKind::Let:
        h = hash_combine(h, n.name_.hash());
        n.fv_ = detail::union_sorted(n.children_[0]->free_vars(),
                                     detail::minus(n.children_[1]->free_vars(), {n.name_}));
        break;
      case ExprKind::Op:
        h = hash_combine(h, static_cast<std::uint64_t>(n.op_));
        [[fallthrough]];
      case ExprKind::App:
      case ExprKind::If:
        n.fv_.assign(n.children_[0]->free_vars().begin(), n.children_[0]->free_vars().end());
        for (std::size_t i = 1; i < n.children_.size(); ++i)
          n.fv_ = detail::union_sorted(n.fv_, n.children_[i]->free_vars());
        break;
    }
    for (const Expr& c : n.children_) {
      h = hash_combine(h, c->hash());
      n.size_ += c->size();
    }
    n.hash_ = h;
    return Expr(new ExprNode(std::move(n)));
  }
  static ExprNode blank(ExprKind k, Span at) {
    ExprNode n;
    n.kind_ = k;
    n.span_ = at;
    return n;
  }
  static void set_literal(ExprNode& n, std::int64_t v, Type t) {
    n.value_ = v;
    n.literal_type_ = t;
  }
  static void set_names(ExprNode& n, Symbol name, Symbol param = {}) {
    n.name_ = name;
    n.param_ = param;
  }
  static void set_annotations(ExprNode& n, std::optional<Type> p, std::optional<Type> b) {
    n.param_type_ = p;
    n.body_type_ = b;
  }
  static void set_op(ExprNode& n, BinOp op) { n.op_ = op; }
  static void set_children(ExprNode& n, std::vector<Expr> c) { n.children_ = std::move(c); }
};

inline Expr integer(std::int64_t v, Span at = {}) {
  if (v < 0) throw std::invalid_argument("integer literals are natural numbers");
  auto n = Builder::blank(ExprKind::Const, at);
  Builder::set_literal(n, v, Type::Int());
  return Builder::finish(std::move(n));
}

inline Expr boolean(bool v, Span at = {}) {
  auto n = Builder::blank(ExprKind::Const, at);
  Builder::set_literal(n, v ? 1 : 0, Type::Bool());
  return Builder::finish(std::move(n));
}

inline Expr var(Symbol x, Span at = {}) {
  auto n = Builder::blank(ExprKind::Var, at);
  Builder::set_names(n, x);
  return Builder::finish(std::move(n));
}
inline Expr var(std::string_view x, Span at = {}) { return var(Symbol(x), at); }

/// fun f (x : param_type) -> (body : body_type)
inline Expr abs(Symbol f, Symbol x, Type param_type, Expr body, Type body_type, Span at = {}) {
  auto n = Builder::blank(ExprKind::Abs, at);
  Builder::set_names(n, f, x);
  Builder::set_annotations(n, param_type, body_type);
  Builder::set_children(n, {std::move(body)});
  return Builder::finish(std::move(n));
}
inline Expr abs(std::string_view f, std::string_view x, Type pt, Expr body, Type bt, Span at = {}) {
  return abs(Symbol(f), Symbol(x), pt, std::move(body), bt, at);
}

/// fun f x -> body
inline Expr abs_untyped(Symbol f, Symbol x, Expr body, Span at = {}) {
  auto n = Builder::blank(ExprKind::Abs, at);
  Builder::set_names(n, f, x);
  Builder::set_children(n, {std::move(body)});
  return Builder::finish(std::move(n));
}
inline Expr abs_untyped(std::string_view f, std::string_view x, Expr body, Span at = {}) {
  return abs_untyped(Symbol(f), Symbol(x), std::move(body), at);
}

inline Expr binop(Expr lhs, BinOp op, Expr rhs, Span at = {}) {
  auto n = Builder::blank(ExprKind::Op, at);
  Builder::set_op(n, op);
  Builder::set_children(n, {std::move(lhs), std::move(rhs)});
  return Builder::finish(std::move(n));
}

inline Expr app(Expr fn, Expr arg, Span at = {}) {
  auto n = Builder::blank(ExprKind::App, at);
  Builder::set_children(n, {std::move(fn), std::move(arg)});
  return Builder::finish(std::move(n));
}

inline Expr cond(Expr c, Expr then_branch, Expr else_branch, Span at = {}) {
  auto n = Builder::blank(ExprKind::If, at);
  Builder::set_children(n, {std::move(c), std::move(then_branch), std::move(else_branch)});
  return Builder::finish(std::move(n));
}

inline Expr let_in(Symbol x, Expr bound, Expr body, Span at = {}) {
  auto n = Builder::blank(ExprKind::Let, at);
  Builder::set_names(n, x);
  Builder::set_children(n, {std::move(bound), std::move(body)});
  return Builder::finish(std::move(n));
}
inline Expr let_in(std::string_view x, Expr bound, Expr body, Span at = {}) {
  return let_in(Symbol(x), std::move(bound), std::move(body), at);
}

/// Same node with new children (annotations, names and span kept).
inline Expr with_children(const ExprNode& e, std::vector<Expr> children) {
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Var:
      return Expr(Builder::finish(ExprNode(e)));
    case ExprKind::Abs:
      return e.annotated() ? abs(e.name(), e.param(), *e.param_type(), children[0], *e.body_type(), e.span())
                           : abs_untyped(e.name(), e.param(), children[0], e.span());
    case ExprKind::Op: return binop(children[0], e.op(), children[1], e.span());
    case ExprKind::App: return app(children[0], children[1], e.span());
    case ExprKind::If: return cond(children[0], children[1], children[2], e.span());
    case ExprKind::Let: return let_in(e.name(), children[0], children[1], e.span());
  }
  return nullptr;
}

/// Structural equality; spans are ignored.
inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case ExprKind::Const:
      return a.literal_type() == b.literal_type() && a.int_value() == b.int_value();
    case ExprKind::Var:
      return a.name() == b.name();
    case ExprKind::Abs:
      if (a.name() != b.name() || a.param() != b.param() || a.param_type() != b.param_type() ||
          a.body_type() != b.body_type())
        return false;
      break;
    case ExprKind::Let:
      if (a.name() != b.name()) return false;
      break;
    case ExprKind::Op:
      if (a.op() != b.op()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!structurally_equal(*a.child(i), *b.child(i))) return false;
  return true;
}
inline bool structurally_equal(const Expr& a, const Expr& b) { return structurally_equal(*a, *b); }

/// True iff no abstraction in `e` carries annotations.
inline bool is_untyped(const Expr& e) {
  if (e->kind() == ExprKind::Abs && e->annotated()) return false;
  for (const Expr& c : e->children())
    if (!is_untyped(c)) return false;
  return true;
}

/// True iff every abstraction in `e` is annotated.
inline bool is_typed(const Expr& e) {
  if (e->kind() == ExprKind::Abs && !e->annotated()) return false;
  for (const Expr& c : e->children())
    if (!is_typed(c)) return false;
  return true;
}

/// Drops all annotations, giving the untyped variant.
inline Expr erase(const Expr& e) {
  if (e->children().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->children().size());
  for (const Expr& c : e->children()) kids.push_back(erase(c));
  if (e->kind() == ExprKind::Abs) return abs_untyped(e->name(), e->param(), kids[0], e->span());
  return with_children(*e, std::move(kids));
}

/// Rebuilds `e` so that structurally equal subtrees share one node.
inline Expr share_subtrees(const Expr& e) {
  std::unordered_map<std::uint64_t, std::vector<Expr>> seen;
  auto go = [&](auto& self, const Expr& t) -> Expr {
    std::vector<Expr> kids;
    kids.reserve(t->children().size());
    bool changed = false;
    for (const Expr& c : t->children()) {
      kids.push_back(self(self, c));
      changed |= kids.back() != c;
    }
    Expr rebuilt = changed ? with_children(*t, std::move(kids)) : t;
    auto& bucket = seen[rebuilt->hash()];
    for (const Expr& s : bucket)
      if (structurally_equal(s, rebuilt)) return s;
    bucket.push_back(rebuilt);
    return rebuilt;
  };
  return go(go, e);
}

// Printing ------------------------------------------------------------------

namespace detail {

// 0: let/if/fun, 1: comparison, 2: additive, 3: multiplicative, 4: application, 5: atom
inline int level_of(const ExprNode& e) {
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Var: return 5;
    case ExprKind::App: return 4;
    case ExprKind::Op:
      if (is_comparison(e.op())) return 1;
      return e.op() == BinOp::Mul ? 3 : 2;
    default: return 0;
  }
}

inline void print(std::string& out, const ExprNode& e, int need) {
  const int own = level_of(e);
  const bool paren = own < need;
  if (paren) out += '(';
  switch (e.kind()) {
    case ExprKind::Const:
      if (e.is_bool_literal()) out += e.bool_value() ? "true" : "false";
      else out += std::to_string(e.int_value());
      break;
    case ExprKind::Var:
      out += e.name().name();
      break;
    case ExprKind::Abs:
      out += "fun " + e.name().name() + " ";
      if (e.annotated()) {
        out += "(" + e.param().name() + " : " + to_string(*e.param_type()) + ") -> (";
        print(out, *e.body(), 0);
        out += " : " + to_string(*e.body_type()) + ")";
      } else {
        out += e.param().name() + " -> ";
        print(out, *e.body(), 0);
      }
      break;
    case ExprKind::Op: {
      const bool cmp = is_comparison(e.op());
      print(out, *e.child(0), cmp ? own + 1 : own);
      out += ' ';
      out += spelling(e.op());
      out += ' ';
      print(out, *e.child(1), own + 1);
      break;
    }
    case ExprKind::App:
      print(out, *e.child(0), 4);
      out += ' ';
      print(out, *e.child(1), 5);
      break;
    case ExprKind::If:
      out += "if ";
      print(out, *e.child(0), 0);
      out += " then ";
      print(out, *e.child(1), 0);
      out += " else ";
      print(out, *e.child(2), 0);
      break;
    case ExprKind::Let:
      out += "let " + e.name().name() + " = ";
      print(out, *e.child(0), 0);
      out += " in ";
      print(out, *e.child(1), 0);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

/// Concrete syntax accepted by `parse_fun`.
inline std::string pretty(const ExprNode& e) {
  std::string out;
  detail::print(out, e, 0);
  return out;
}
inline std::string pretty(const Expr& e) { return pretty(*e); }

}  // namespace increty::fun
