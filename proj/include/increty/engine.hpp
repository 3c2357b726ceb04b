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
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "increty/cache.hpp"
#include "increty/env.hpp"
#include "increty/error.hpp"
#include "increty/instance.hpp"

namespace increty {

struct EngineStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t base_invocations = 0;
  std::size_t nodes_visited = 0;

  friend bool operator==(const EngineStats&, const EngineStats&) = default;
};

/// Which rule template fired at a node.
enum class Step : std::uint8_t { Hit, MissLeaf, MissInner };

template <class Term>
struct TraceEvent {
  Term term;
  Step step;
};

template <LanguageInstance L>
struct Outcome {
  std::optional<typename L::Result> result;
  std::optional<TypeError> error;
  Cache<L> cache;
  EngineStats stats;
  std::vector<TraceEvent<typename L::Term>> trace;

  bool ok() const { return result.has_value(); }
};

/// C(t) = ⟨Γ', R⟩ for the first entry compatible with Γ, if any.
template <LanguageInstance L>
std::optional<std::pair<Env<typename L::Binding>, typename L::Result>> lookup(
    const Cache<L>& cache, const typename L::Term& t, const Env<typename L::Binding>& env, L& inst) {
  if (const auto* e = cache.lookup(t, env, inst)) return std::make_pair(e->env, e->result);
  return std::nullopt;
}

template <LanguageInstance L>
bool miss(const Cache<L>& cache, const typename L::Term& t, const Env<typename L::Binding>& env, L& inst) {
  return cache.lookup(t, env, inst) == nullptr;
}

namespace detail {

template <LanguageInstance L>
typename L::Result stored_result(L& inst, const Env<typename L::Binding>& env, const typename L::Result& r) {
  if constexpr (TrimsCachedResults<L>) return inst.cache_result(env, r);
  else return r;
}

}  // namespace detail

/// Runs Γ, C ⊢_IA t : R ▷ C' against a cache updated in place. At each node
/// the hit template is tried first; otherwise leaves call A and inner nodes
/// recurse on their subterms and join.
template <LanguageInstance L>
class IncrementalTyper {
 public:
  using Term = typename L::Term;
  using Result = typename L::Result;
  using EnvT = Env<typename L::Binding>;

  IncrementalTyper(L& inst, Cache<L>& cache, std::vector<TraceEvent<Term>>* trace = nullptr)
      : inst_(inst), cache_(cache), trace_(trace) {}

  /// Throws TypeError at the first failing node; entries added before the
  /// failure stay in the cache.
  Result run(const EnvT& env, const Term& t) {
    if constexpr (HasFreshSupply<L>) inst_.advance_fresh_counter(cache_.fresh_counter());
    if constexpr (requires { inst_.observe_env(env); }) inst_.observe_env(env);
    struct Sync {
      IncrementalTyper& self;
      ~Sync() {
        if constexpr (HasFreshSupply<L>)
          self.cache_.set_fresh_counter(std::max(self.cache_.fresh_counter(),
                                                 static_cast<std::uint64_t>(self.inst_.fresh_counter())));
      }
    } sync{*this};
    return type(env, t);
  }

  const EngineStats& stats() const { return stats_; }

 private:
  void note(const Term& t, Step s) {
    if (trace_) trace_->push_back({t, s});
  }

  Result type(const EnvT& env, const Term& t) {
    ++stats_.nodes_visited;
    if (const auto* hit = cache_.lookup(t, env, inst_)) {
      ++stats_.hits;
      note(t, Step::Hit);
      return inst_.reuse(env, hit->env, t, hit->result);
    }
    ++stats_.misses;
    const auto subs = inst_.subterms(t);
    if (subs.empty()) {
      note(t, Step::MissLeaf);
      ++stats_.base_invocations;
      Result r = inst_.base(env, t);
      store(env, t, r);
      return r;
    }
    note(t, Step::MissInner);
    typename L::Frame frame{};
    std::vector<Result> results;
    results.reserve(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
      EnvRef<typename L::Binding> child_env = inst_.tr(t, i, env, results, frame);
      results.push_back(type(*child_env, subs[i]));
    }
    Result r = inst_.checkjoin(t, env, results, frame);
    store(env, t, r);
    return r;
  }

  void store(const EnvT& env, const Term& t, const Result& r) {
    EnvT restricted = restrict(env, t->free_vars());
    Result kept = detail::stored_result(inst_, restricted, r);
    cache_.insert({t, std::move(restricted), std::move(kept)});
  }

  L& inst_;
  Cache<L>& cache_;
  std::vector<TraceEvent<Term>>* trace_;
  EngineStats stats_;
};

/// Γ, C ⊢_IA t : R ▷ C'. The input cache is not modified.
template <LanguageInstance L>
Outcome<L> incremental_type(const Env<typename L::Binding>& env, Cache<L> cache, const typename L::Term& t,
                            L& inst, bool record_trace = false) {
  Outcome<L> out;
  IncrementalTyper<L> typer(inst, cache, record_trace ? &out.trace : nullptr);
  try {
    out.result = typer.run(env, t);
  } catch (const TypeError& e) {
    out.error = e;
  }
  out.stats = typer.stats();
  out.cache = std::move(cache);
  return out;
}

// Annotated trees ------------------------------------------------------------

/// A term whose every node carries A's result (or nothing, for ⊥) and its
/// free variables.
template <LanguageInstance L>
struct AnnotatedAST {
  typename L::Term node;
  std::optional<typename L::Result> result;
  std::vector<AnnotatedAST> children;
  std::vector<Symbol> fv;

  bool fully_typed() const {
    if (!result) return false;
    for (const auto& c : children)
      if (!c.fully_typed()) return false;
    return true;
  }
};

/// Subtree whose environment cannot be reconstructed (an earlier sibling
/// failed): every node is ⊥.
template <LanguageInstance L>
AnnotatedAST<L> annotate_unknown(const typename L::Term& t, L& inst) {
  AnnotatedAST<L> a;
  a.node = t;
  a.fv.assign(t->free_vars().begin(), t->free_vars().end());
  for (const auto& s : inst.subterms(t)) a.children.push_back(annotate_unknown<L>(s, inst));
  return a;
}

/// Annotates every node with A's result under the environment reconstructed
/// along the path from the root.
template <LanguageInstance L>
AnnotatedAST<L> annotate(const typename L::Term& t, const Env<typename L::Binding>& env, L& inst) {
  AnnotatedAST<L> a;
  a.node = t;
  a.fv.assign(t->free_vars().begin(), t->free_vars().end());
  try {
    a.result = inst.base(env, t);
  } catch (const TypeError&) {
  }
  const auto subs = inst.subterms(t);
  std::vector<typename L::Result> earlier;
  bool env_known = true;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (env_known) {
      EnvRef<typename L::Binding> child_env = inst.rebuild_env(t, i, env, a.result ? &*a.result : nullptr, earlier);
      a.children.push_back(annotate(subs[i], *child_env, inst));
      if (a.children.back().result) earlier.push_back(*a.children.back().result);
      else env_known = false;
    } else {
      a.children.push_back(annotate_unknown<L>(subs[i], inst));
    }
  }
  return a;
}

/// buildCache: one entry (t, Γ|FV(t), R) per node, visiting depth-first with
/// child environments reconstructed from the annotations. Throws
/// std::invalid_argument if any node is ⊥.
template <LanguageInstance L>
Cache<L> build_cache(const AnnotatedAST<L>& a, const Env<typename L::Binding>& env, L& inst) {
  Cache<L> out;
  auto go = [&](auto& self, const AnnotatedAST<L>& node, const Env<typename L::Binding>& g) -> void {
    if (!node.result) throw std::invalid_argument("build_cache: node does not type: " + pretty(node.node));
    auto restricted = restrict(g, node.node->free_vars());
    auto kept = detail::stored_result(inst, restricted, *node.result);
    out.insert({node.node, std::move(restricted), std::move(kept)});
    std::vector<typename L::Result> earlier;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      EnvRef<typename L::Binding> child_env = inst.rebuild_env(node.node, i, g, &*node.result, earlier);
      self(self, node.children[i], *child_env);
      earlier.push_back(*node.children[i].result);
    }
  };
  go(go, a, env);
  if constexpr (HasFreshSupply<L>) out.set_fresh_counter(inst.fresh_counter());
  return out;
}

template <class Term>
struct Violation {
  Term term;
  std::string reason;
};

/// Entries (t, Γ, R) for which A does not give Γ ⊢ t : R.
template <LanguageInstance L>
std::vector<Violation<typename L::Term>> verify_cache(const Cache<L>& cache, L& inst) {
  if constexpr (HasFreshSupply<L>) inst.advance_fresh_counter(cache.fresh_counter());
  std::vector<Violation<typename L::Term>> out;
  for (const auto* e : cache.entries()) {
    try {
      auto expected = inst.base(e->env, e->term);
      if (!inst.equivalent(e->env, detail::stored_result(inst, e->env, expected), e->result))
        out.push_back({e->term, "cached result differs from the base algorithm"});
    } catch (const TypeError& err) {
      out.push_back({e->term, std::string("base algorithm rejects the entry: ") + err.what()});
    }
  }
  return out;
}

}  // namespace increty
