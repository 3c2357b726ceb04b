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

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

#include "increty/env.hpp"
#include "increty/error.hpp"

namespace increty {

/// The bundle a typing algorithm A contributes to the incremental schema.
///
///   subterms(t)                   ordered subterms I_t (empty for leaves)
///   base(Γ, t)                    A itself; throws TypeError when t does not type
///   tr(t, i, Γ, R_<i, frame)      environment for the i-th subterm
///   checkjoin(t, Γ, R, frame)     combines subterm results; throws on failure
///   compat(Γ, Γ', t)              may a cached Γ' stand in for Γ on t?
///   reuse(Γ, Γ', t, R)            result of a hit (the cached R, possibly renamed)
///   rebuild_env(t, i, Γ, R?, R_<i) environment used when annotating and
///                                 building a cache from an annotated tree
///   equivalent(Γ, R1, R2)         result equality used by cache verification
///
/// `Frame` is per-node scratch shared between tr and checkjoin (fresh type
/// variables for inference). Terms are shared pointers to immutable nodes
/// exposing hash() and free_vars(), with an ADL `structurally_equal`.
template <class L>
concept LanguageInstance =
    requires(L& inst, const typename L::Term& t, const Env<typename L::Binding>& env,
             std::span<const typename L::Result> rs, typename L::Frame& frame,
             const typename L::Result& r, const typename L::Result* maybe_r) {
      typename L::Term;
      typename L::Binding;
      typename L::Result;
      typename L::Frame;
      { L::name() } -> std::convertible_to<std::string_view>;
      { t->hash() } -> std::convertible_to<std::uint64_t>;
      { t->free_vars() } -> std::convertible_to<std::span<const Symbol>>;
      { structurally_equal(t, t) } -> std::same_as<bool>;
      { inst.subterms(t) } -> std::convertible_to<std::span<const typename L::Term>>;
      { inst.base(env, t) } -> std::same_as<typename L::Result>;
      { inst.tr(t, std::size_t{}, env, rs, frame) } -> std::convertible_to<EnvRef<typename L::Binding>>;
      { inst.checkjoin(t, env, rs, frame) } -> std::same_as<typename L::Result>;
      { inst.compat(env, env, t) } -> std::same_as<bool>;
      { inst.reuse(env, env, t, r) } -> std::same_as<typename L::Result>;
      { inst.rebuild_env(t, std::size_t{}, env, maybe_r, rs) } -> std::convertible_to<EnvRef<typename L::Binding>>;
      { inst.equivalent(env, r, r) } -> std::same_as<bool>;
    };

/// Instances with a fresh-variable supply persisted in the cache.
template <class L>
concept HasFreshSupply = requires(L& inst, std::uint64_t n) {
  { inst.fresh_counter() } -> std::convertible_to<std::uint64_t>;
  inst.advance_fresh_counter(n);
};

/// Instances that normalise a result before it is stored.
template <class L>
concept TrimsCachedResults =
    requires(L& inst, const Env<typename L::Binding>& env, const typename L::Result& r) {
      { inst.cache_result(env, r) } -> std::same_as<typename L::Result>;
    };

}  // namespace increty
