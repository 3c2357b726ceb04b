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

#include <span>
#include <string_view>
#include <vector>

#include "increty/cache.hpp"
#include "increty/engine.hpp"
#include "increty/env.hpp"
#include "increty/error.hpp"
#include "increty/fun_ast.hpp"
#include "increty/fun_type.hpp"

namespace increty::fun {

using TypeEnv = Env<Type>;

namespace rules {

[[noreturn]] inline void fail(const Expr& e, std::string condition) {
  throw TypeError(e->span(), pretty(e), std::move(condition));
}

inline Type leaf(const TypeEnv& env, const Expr& e) {
  if (e->kind() == ExprKind::Const) return e->literal_type();
  if (const Type* t = env.find(e->name())) return *t;
  fail(e, e->name().name() + " ∈ dom(Γ)");
}

inline Type fn_type(const Expr& e) { return Type::Arrow(*e->param_type(), *e->body_type()); }

/// Γ[x ↦ τ_x, f ↦ τ_x → τ_e]
inline TypeEnv body_env(const Expr& e, const TypeEnv& env) {
  return env.bind(e->param(), *e->param_type()).bind(e->name(), fn_type(e));
}

inline Type join_abs(const Expr& e, Type body) {
  if (body != *e->body_type()) fail(e, "τ_body = τ_e");
  return fn_type(e);
}

inline Type join_op(const Expr& e, Type t1, Type t2) {
  if (t1 != t2) fail(e, "τ_1 = τ_2");
  if (t1 != operand_type(e->op())) fail(e, "τ_1 = " + to_string(operand_type(e->op())));
  return result_type(e->op());
}

inline Type join_app(const Expr& e, Type t1, Type t2) {
  if (!t1.is_arrow()) fail(e, "τ_1 = τ_x → τ_e");
  if (t1.domain() != t2) fail(e, "τ_x = τ_2");
  return t1.codomain();
}

inline Type join_if(const Expr& e, Type t1, Type t2, Type t3) {
  if (t1 != Type::Bool()) fail(e, "τ_1 = bool");
  if (t2 != t3) fail(e, "τ_2 = τ_3");
  return t2;
}

}  // namespace rules

/// Algorithm F: the simply-typed checker for annotated FUN. Recursive
/// functions type in one pass because the abstraction binds f to its
/// declared type before the body is checked.
inline Type check_F(const TypeEnv& env, const Expr& e) {
  switch (e->kind()) {
    case ExprKind::Const:
    case ExprKind::Var:
      return rules::leaf(env, e);
    case ExprKind::Abs:
      if (!e->annotated()) rules::fail(e, "abstraction is annotated");
      return rules::join_abs(e, check_F(rules::body_env(e, env), e->body()));
    case ExprKind::Op:
      return rules::join_op(e, check_F(env, e->child(0)), check_F(env, e->child(1)));
    case ExprKind::App:
      return rules::join_app(e, check_F(env, e->child(0)), check_F(env, e->child(1)));
    case ExprKind::If:
      return rules::join_if(e, check_F(env, e->child(0)), check_F(env, e->child(1)), check_F(env, e->child(2)));
    case ExprKind::Let: {
      Type bound = check_F(env, e->child(0));
      return check_F(env.bind(e->name(), bound), e->child(1));
    }
  }
  rules::fail(e, "known expression form");
}

/// ∀y ∈ FV(e). Γ(y) = Γ'(y), with both environments defined on FV(e).
inline bool compat_F(const TypeEnv& env, const TypeEnv& cached, const Expr& e) {
  return env.agrees_on(cached, e->free_vars(), [](Type a, Type b) { return a == b; });
}

/// F as a language instance for the engine (algorithm IF).
struct FunCheck {
  using Term = Expr;
  using Binding = Type;
  using Result = Type;
  struct Frame {};

  static constexpr std::string_view name() { return "fun-check"; }

  std::span<const Expr> subterms(const Expr& e) const { return e->children(); }

  Type base(const TypeEnv& env, const Expr& e) const { return check_F(env, e); }

  EnvRef<Type> tr(const Expr& e, std::size_t i, const TypeEnv& env, std::span<const Type> earlier, Frame&) const {
    switch (e->kind()) {
      case ExprKind::Abs:
        if (!e->annotated()) rules::fail(e, "abstraction is annotated");
        return rules::body_env(e, env);
      case ExprKind::Let:
        if (i == 1) return env.bind(e->name(), earlier[0]);
        return env;
      default:
        return env;
    }
  }

  Type checkjoin(const Expr& e, const TypeEnv&, std::span<const Type> r, Frame&) const {
    switch (e->kind()) {
      case ExprKind::Abs: return rules::join_abs(e, r[0]);
      case ExprKind::Op: return rules::join_op(e, r[0], r[1]);
      case ExprKind::App: return rules::join_app(e, r[0], r[1]);
      case ExprKind::If: return rules::join_if(e, r[0], r[1], r[2]);
      case ExprKind::Let: return r[1];
      default: rules::fail(e, "inner node");
    }
  }

  bool compat(const TypeEnv& env, const TypeEnv& cached, const Expr& e) const { return compat_F(env, cached, e); }

  Type reuse(const TypeEnv&, const TypeEnv&, const Expr&, const Type& r) const { return r; }

  EnvRef<Type> rebuild_env(const Expr& e, std::size_t i, const TypeEnv& env, const Type*,
                      std::span<const Type> earlier) const {
    Frame frame;
    return tr(e, i, env, earlier, frame);
  }

  bool equivalent(const TypeEnv&, const Type& a, const Type& b) const { return a == b; }
};

using CheckCache = Cache<FunCheck>;

inline Outcome<FunCheck> check_IF(const TypeEnv& env, CheckCache cache, const Expr& e, bool record_trace = false) {
  FunCheck inst;
  return incremental_type(env, std::move(cache), e, inst, record_trace);
}

}  // namespace increty::fun
