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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "increty/cache.hpp"
#include "increty/engine.hpp"
#include "increty/env.hpp"
#include "increty/error.hpp"
#include "increty/fun_ast.hpp"
#include "increty/fun_type.hpp"

namespace increty::fun {

using TypeEnv = Env<Type>;

class Substitution;
inline std::optional<Substitution> unify(Type a, Type b, std::string* why = nullptr);

/// A finite map from type variables to types. Values built by `unify` and
/// `from` are idempotent; `compose` is exact with respect to `apply` but does
/// not re-normalize.
class Substitution {
 public:
  using Map = std::map<std::uint32_t, Type>;

  Substitution() = default;

  static Substitution single(std::uint32_t var, Type t) {
    if (t == Type::Var(var)) return {};
    if (occurs_in(var, t)) throw std::invalid_argument("substitution binds a variable to a type containing it");
    Substitution s;
    s.map_.emplace(var, t);
    return s;
  }

  /// Normalizes `m` by applying it to its own images until nothing changes.
  /// Throws std::invalid_argument if the bindings are cyclic.
  static Substitution from(Map m) {
    Substitution s;
    s.map_ = std::move(m);
    for (std::size_t round = 0;; ++round) {
      bool changed = false;
      Map next;
      for (const auto& [v, t] : s.map_) {
        Type u = s.apply(t);
        changed |= u != t;
        next.emplace(v, u);
      }
      s.map_ = std::move(next);
      if (!changed) break;
      if (round > s.map_.size()) throw std::invalid_argument("cyclic substitution");
    }
    for (auto it = s.map_.begin(); it != s.map_.end();) {
      if (it->second == Type::Var(it->first)) it = s.map_.erase(it);
      else if (occurs_in(it->first, it->second)) throw std::invalid_argument("cyclic substitution");
      else ++it;
    }
    return s;
  }

  /// Simultaneous replacement in one pass.
  Type apply(Type t) const {
    if (map_.empty() || !t.has_vars()) return t;
    if (t.is_var()) {
      auto it = map_.find(t.var_id());
      return it == map_.end() ? t : it->second;
    }
    Type d = apply(t.domain());
    Type c = apply(t.codomain());
    return (d == t.domain() && c == t.codomain()) ? t : Type::Arrow(d, c);
  }

  TypeEnv apply(const TypeEnv& env) const {
    if (map_.empty()) return env;
    return env.map([&](Type t) { return apply(t); });
  }

  Type operator()(Type t) const { return apply(t); }

  const Type* find(std::uint32_t var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  Map::const_iterator begin() const { return map_.begin(); }
  Map::const_iterator end() const { return map_.end(); }
  const Map& bindings() const { return map_; }

  /// Keeps only the bindings whose variable satisfies `keep`.
  template <class Pred>
  Substitution restricted(Pred&& keep) const {
    Substitution s;
    for (const auto& [v, t] : map_)
      if (keep(v)) s.map_.emplace(v, t);
    return s;
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;

  friend Substitution compose(const Substitution& outer, const Substitution& inner);
  friend std::optional<Substitution> unify(Type a, Type b, std::string* why);

 private:
  Map map_;
};

/// outer ∘ inner, i.e. apply(result, τ) = apply(outer, apply(inner, τ)).
inline Substitution compose(const Substitution& outer, const Substitution& inner) {
  if (inner.empty()) return outer;
  if (outer.empty()) return inner;
  Substitution s;
  for (const auto& [v, t] : inner.map_) {
    Type u = outer.apply(t);
    if (u != Type::Var(v)) s.map_.emplace(v, u);
  }
  for (const auto& [v, t] : outer.map_)
    if (!inner.map_.contains(v)) s.map_.try_emplace(v, t);
  return s;
}

inline std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(Type::Var(v)) + " := " + to_string(t);
  }
  return out + "}";
}

/// Robinson unification. Returns an idempotent most general unifier, or
/// nothing on a constructor clash or occurs-check failure (the reason is
/// written to `why` when given).
inline std::optional<Substitution> unify(Type a, Type b, std::string* why) {
  Substitution::Map sigma;
  auto resolve = [&](Type t) {
    Substitution view;
    view.map_.swap(sigma);
    Type u = view.apply(t);
    view.map_.swap(sigma);
    return u;
  };
  std::vector<std::pair<Type, Type>> work{{a, b}};
  while (!work.empty()) {
    auto [l, r] = work.back();
    work.pop_back();
    l = resolve(l);
    r = resolve(r);
    if (l == r) continue;
    if (!l.is_var() && r.is_var()) std::swap(l, r);
    if (l.is_var()) {
      if (occurs_in(l.var_id(), r)) {
        if (why) *why = "occurs check: " + to_string(l) + " in " + to_string(r);
        return std::nullopt;
      }
      Substitution step = Substitution::single(l.var_id(), r);
      for (auto& [v, t] : sigma) t = step.apply(t);
      sigma.emplace(l.var_id(), r);
      continue;
    }
    if (l.is_arrow() && r.is_arrow()) {
      work.emplace_back(l.codomain(), r.codomain());
      work.emplace_back(l.domain(), r.domain());
      continue;
    }
    if (why) *why = "cannot unify " + to_string(l) + " with " + to_string(r);
    return std::nullopt;
  }
  Substitution out;
  out.map_ = std::move(sigma);
  return out;
}

/// Monotone supply of type-variable ids.
class FreshSupply {
 public:
  explicit FreshSupply(std::uint64_t next = 0) : next_(next) {}
  Type fresh() {
    if (next_ > UINT32_MAX) throw std::overflow_error("type variable supply exhausted");
    return Type::Var(static_cast<std::uint32_t>(next_++));
  }
  std::uint64_t next() const { return next_; }
  void advance_to(std::uint64_t n) { next_ = std::max(next_, n); }

 private:
  std::uint64_t next_;
};

/// (τ, θ): an inferred type and the substitution produced along the way.
struct Typing {
  Type type;
  Substitution subst;
  friend bool operator==(const Typing&, const Typing&) = default;
};

inline std::vector<std::uint32_t> type_vars(const TypeEnv& env) {
  std::vector<std::uint32_t> out;
  for (const auto& [name, t] : env) collect_type_vars(t, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t next_free_id(const TypeEnv& env) {
  auto vars = type_vars(env);
  return vars.empty() ? 0 : std::uint64_t{vars.back()} + 1;
}

/// Matches `from` onto `to` as a renaming: every variable of `from` maps to
/// a variable of `to`, injectively and consistently with `rho`.
class Renaming {
 public:
  bool match(Type from, Type to) {
    if (from.kind() != to.kind()) return false;
    switch (from.kind()) {
      case TypeKind::Var: {
        auto [fwd, added] = forward_.try_emplace(from.var_id(), to.var_id());
        if (!added) return fwd->second == to.var_id();
        auto [back, added_back] = backward_.try_emplace(to.var_id(), from.var_id());
        return added_back || back->second == from.var_id();
      }
      case TypeKind::Arrow:
        return match(from.domain(), to.domain()) && match(from.codomain(), to.codomain());
      default:
        return true;
    }
  }
  const std::uint32_t* find(std::uint32_t v) const {
    auto it = forward_.find(v);
    return it == forward_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<std::uint32_t, std::uint32_t> forward_;
  std::unordered_map<std::uint32_t, std::uint32_t> backward_;
};

/// Plain unifiability: ∀y ∈ FV(e). U(Γ(y), Γ'(y)), one binding at a time.
inline bool compat_W(const TypeEnv& env, const TypeEnv& cached, const Expr& e) {
  for (Symbol y : e->free_vars()) {
    const Type* a = env.find(y);
    const Type* b = cached.find(y);
    if (!a || !b || !unify(*a, *b)) return false;
  }
  return true;
}

/// Γ and Γ' agree on FV(e) up to a bijective renaming of type variables.
inline bool compat_renaming(const TypeEnv& env, const TypeEnv& cached, const Expr& e, Renaming* out = nullptr) {
  Renaming rho;
  for (Symbol y : e->free_vars()) {
    const Type* a = env.find(y);
    const Type* b = cached.find(y);
    if (!a || !b || !rho.match(*b, *a)) return false;
  }
  if (out) *out = std::move(rho);
  return true;
}

/// Two typings under Γ agree when the variables of Γ are held fixed and the
/// remaining variables correspond bijectively across τ and θ restricted to
/// the variables of Γ.
inline bool equivalent_typing(const TypeEnv& env, const Typing& a, const Typing& b) {
  const auto fixed = type_vars(env);
  auto is_fixed = [&](std::uint32_t v) { return std::binary_search(fixed.begin(), fixed.end(), v); };
  std::unordered_map<std::uint32_t, std::uint32_t> fwd, back;
  auto match = [&](auto& self, Type x, Type y) -> bool {
    if (x.kind() != y.kind()) return false;
    if (x.is_arrow()) return self(self, x.domain(), y.domain()) && self(self, x.codomain(), y.codomain());
    if (!x.is_var()) return true;
    if (is_fixed(x.var_id()) || is_fixed(y.var_id())) return x == y;
    auto [f, fa] = fwd.try_emplace(x.var_id(), y.var_id());
    auto [g, ga] = back.try_emplace(y.var_id(), x.var_id());
    return f->second == y.var_id() && g->second == x.var_id();
  };
  if (!match(match, a.type, b.type)) return false;
  for (std::uint32_t v : fixed)
    if (!match(match, a.subst.apply(Type::Var(v)), b.subst.apply(Type::Var(v)))) return false;
  return true;
}

/// Same type up to a bijective renaming of all variables.
inline bool alpha_equivalent(Type a, Type b) { return equivalent_typing(TypeEnv{}, {a, {}}, {b, {}}); }

namespace w {

[[noreturn]] inline void fail(const Expr& e, std::string condition) {
  throw TypeError(e->span(), pretty(e), std::move(condition));
}

inline Substitution unify_at(const Expr& e, Type a, Type b, std::string_view condition) {
  std::string why;
  auto s = unify(a, b, &why);
  if (!s) fail(e, std::string(condition) + " (" + why + ")");
  return *std::move(s);
}

/// Fresh variables chosen while descending into a node.
struct Frame {
  Type alpha_x;
  Type alpha_e;
};

inline Typing leaf(const TypeEnv& env, const Expr& e) {
  if (e->kind() == ExprKind::Const) return {e->literal_type(), {}};
  if (e->kind() == ExprKind::Abs || e->annotated()) fail(e, "untyped term");
  if (const Type* t = env.find(e->name())) return {*t, {}};
  fail(e, e->name().name() + " ∈ dom(Γ)");
}

inline TypeEnv child_env(const Expr& e, std::size_t i, const TypeEnv& env, std::span<const Typing> r, Frame& frame,
                         FreshSupply& supply) {
  switch (e->kind()) {
    case ExprKind::Abs:
      if (e->annotated()) fail(e, "untyped term");
      frame.alpha_x = supply.fresh();
      frame.alpha_e = supply.fresh();
      return env.bind(e->param(), frame.alpha_x).bind(e->name(), Type::Arrow(frame.alpha_x, frame.alpha_e));
    case ExprKind::Let:
      return i == 0 ? env : r[0].subst.apply(env).bind(e->name(), r[0].type);
    default: {
      if (i == 0) return env;
      TypeEnv g = r[0].subst.apply(env);
      return i == 1 ? g : r[1].subst.apply(g);
    }
  }
}

inline Typing join(const Expr& e, std::span<const Typing> r, const Frame& frame, FreshSupply& supply) {
  switch (e->kind()) {
    case ExprKind::Abs: {
      const auto& [te, se] = r[0];
      Substitution s1 = unify_at(e, te, se(frame.alpha_e), "θ_1 = U(τ_e, θ_e α_e)");
      return {Type::Arrow(s1(se(frame.alpha_x)), s1(te)), compose(s1, se)};
    }
    case ExprKind::Op: {
      const auto& [t1, s1] = r[0];
      const auto& [t2, s2] = r[1];
      Substitution s3 = unify_at(e, s2(t1), operand_type(e->op()), "θ_3 = U(θ_2 τ_1, τ_op)");
      Substitution s4 = unify_at(e, s3(t2), operand_type(e->op()), "θ_4 = U(θ_3 τ_2, τ_op)");
      return {result_type(e->op()), compose(s4, compose(s3, compose(s2, s1)))};
    }
    case ExprKind::App: {
      const auto& [t1, s1] = r[0];
      const auto& [t2, s2] = r[1];
      Type alpha = supply.fresh();
      Substitution s3 = unify_at(e, s2(t1), Type::Arrow(t2, alpha), "θ_3 = U(θ_2 τ_1, τ_2 → α)");
      return {s3(alpha), compose(s3, compose(s2, s1))};
    }
    case ExprKind::If: {
      const auto& [t1, s1] = r[0];
      const auto& [t2, s2] = r[1];
      const auto& [t3, s3] = r[2];
      Substitution s4 = unify_at(e, s3(s2(t1)), Type::Bool(), "θ_4 = U(θ_3 (θ_2 τ_1), bool)");
      Substitution s5 = unify_at(e, s4(t3), s4(s3(t2)), "θ_5 = U(θ_4 τ_3, θ_4 (θ_3 τ_2))");
      return {s5(s4(t3)), compose(s5, compose(s4, compose(s3, compose(s2, s1))))};
    }
    case ExprKind::Let:
      return {r[1].type, compose(r[1].subst, r[0].subst)};
    default:
      fail(e, "inner node");
  }
}

}  // namespace w

/// Algorithm W for untyped FUN. Let is monomorphic. Fresh variables are
/// drawn left to right: α_x and α_e on entering an abstraction, α for an
/// application after both operands.
inline Typing infer_W(const TypeEnv& env, const Expr& e, FreshSupply& supply) {
  auto kids = e->children();
  if (kids.empty()) return w::leaf(env, e);
  w::Frame frame;
  std::vector<Typing> r;
  r.reserve(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) r.push_back(infer_W(w::child_env(e, i, env, r, frame, supply), kids[i], supply));
  return w::join(e, r, frame, supply);
}

inline Typing infer_W(const TypeEnv& env, const Expr& e) {
  FreshSupply supply(next_free_id(env));
  return infer_W(env, e, supply);
}

/// W as a language instance (algorithm IW). A cache hit is accepted when the
/// cached environment matches the current one up to a bijective renaming of
/// type variables; the cached (τ, θ) is transported along that renaming and
/// its remaining variables are replaced by fresh ones.
class FunInfer {
 public:
  using Term = Expr;
  using Binding = Type;
  using Result = Typing;
  using Frame = w::Frame;

  explicit FunInfer(std::uint64_t first_fresh = 0) : supply_(first_fresh) {}

  static constexpr std::string_view name() { return "fun-infer"; }

  std::uint64_t fresh_counter() const { return supply_.next(); }
  void advance_fresh_counter(std::uint64_t n) { supply_.advance_to(n); }
  void observe_env(const TypeEnv& env) { supply_.advance_to(next_free_id(env)); }
  FreshSupply& supply() { return supply_; }

  std::span<const Expr> subterms(const Expr& e) const { return e->children(); }

  Typing base(const TypeEnv& env, const Expr& e) {
    observe_env(env);
    return infer_W(env, e, supply_);
  }

  EnvRef<Type> tr(const Expr& e, std::size_t i, const TypeEnv& env, std::span<const Typing> r, Frame& frame) {
    return w::child_env(e, i, env, r, frame, supply_);
  }

  Typing checkjoin(const Expr& e, const TypeEnv&, std::span<const Typing> r, Frame& frame) {
    return w::join(e, r, frame, supply_);
  }

  bool compat(const TypeEnv& env, const TypeEnv& cached, const Expr& e) const {
    return compat_renaming(env, cached, e);
  }

  Typing reuse(const TypeEnv& env, const TypeEnv& cached, const Expr& e, const Typing& r) {
    Renaming rho;
    compat_renaming(env, cached, e, &rho);
    std::unordered_map<std::uint32_t, Type> fresh;
    auto move = [&](auto& self, Type t) -> Type {
      if (!t.has_vars()) return t;
      if (t.is_arrow()) return Type::Arrow(self(self, t.domain()), self(self, t.codomain()));
      if (const auto* to = rho.find(t.var_id())) return Type::Var(*to);
      auto [it, added] = fresh.try_emplace(t.var_id());
      if (added) it->second = supply_.fresh();
      return it->second;
    };
    Substitution::Map theta;
    for (const auto& [v, t] : r.subst) {
      if (const auto* to = rho.find(v)) theta.emplace(*to, move(move, t));
    }
    Type tau = move(move, r.type);
    return {tau, Substitution::from(std::move(theta))};
  }

  /// Environments of the cache-building walk: the abstraction body sees
  /// Γ[x ↦ τ_x, f ↦ τ_f] read off the node's own result, let bodies see
  /// Γ[x ↦ τ_2].
  EnvRef<Type> rebuild_env(const Expr& e, std::size_t i, const TypeEnv& env, const Typing* node,
                      std::span<const Typing> earlier) {
    switch (e->kind()) {
      case ExprKind::Abs: {
        Type tf = node ? node->type : Type::Arrow(supply_.fresh(), supply_.fresh());
        return env.bind(e->param(), tf.domain()).bind(e->name(), tf);
      }
      case ExprKind::Let:
        if (i == 0) return env;
        return env.bind(e->name(), earlier[0].type);
      default:
        return env;
    }
  }

  /// Cached substitutions keep only the bindings for variables of the
  /// entry's environment; the rest name variables private to the run.
  Typing cache_result(const TypeEnv& env, const Typing& r) const {
    const auto vars = type_vars(env);
    return {r.type, r.subst.restricted([&](std::uint32_t v) { return std::binary_search(vars.begin(), vars.end(), v); })};
  }

  bool equivalent(const TypeEnv& env, const Typing& a, const Typing& b) const {
    return equivalent_typing(env, a, b);
  }

 private:
  FreshSupply supply_;
};

using InferCache = Cache<FunInfer>;

inline Outcome<FunInfer> infer_IW(const TypeEnv& env, InferCache cache, const Expr& e, bool record_trace = false) {
  FunInfer inst;
  return incremental_type(env, std::move(cache), e, inst, record_trace);
}

}  // namespace increty::fun
