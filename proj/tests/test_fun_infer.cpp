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

#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using namespace increty;
using namespace increty::testing;
using fun::Substitution;

const Type kInt = Type::Int();
const Type kBool = Type::Bool();
const Type a = Type::Var(0);
const Type b = Type::Var(1);
const Type c = Type::Var(2);

Type arrow(Type d, Type r) { return Type::Arrow(d, r); }

TEST(Substitution, Apply) {
  EXPECT_EQ(Substitution::single(0, kInt).apply(arrow(a, b)), arrow(kInt, b));
  EXPECT_EQ(Substitution{}.apply(arrow(a, b)), arrow(a, b));
  auto s = Substitution::from({{0, b}, {1, kInt}});
  EXPECT_EQ(s.apply(a), kInt);
  EXPECT_EQ(*s.find(0), kInt);
  EXPECT_EQ(*s.find(1), kInt);
}

TEST(Substitution, RejectsCyclesAndDropsIdentity) {
  EXPECT_THROW(Substitution::single(0, arrow(a, kInt)), std::invalid_argument);
  EXPECT_THROW(Substitution::from({{0, b}, {1, arrow(a, a)}}), std::invalid_argument);
  EXPECT_TRUE(Substitution::single(0, a).empty());
  EXPECT_TRUE(Substitution::from({{0, a}}).empty());
}

TEST(Substitution, Compose) {
  auto t = Substitution::single(0, b);
  EXPECT_EQ(fun::compose({}, t), t);
  EXPECT_EQ(fun::compose(t, {}), t);
  auto s = fun::compose(Substitution::single(1, kBool), Substitution::single(0, b));
  EXPECT_EQ(s.apply(arrow(a, b)), arrow(kBool, kBool));
  EXPECT_EQ(*s.find(0), kBool);
  EXPECT_EQ(*s.find(1), kBool);
}

// inner maps c to a and outer maps a back to c: c must stay fixed even
// though outer also binds c.
TEST(Substitution, ComposeWhenInnerBindingCollapsesToIdentity) {
  // {a := c, c := int}, not idempotent, as arises when composing unifiers.
  Substitution outer = fun::compose(Substitution::single(0, c), Substitution::single(2, kInt));
  Substitution inner = Substitution::single(2, a);
  auto s = fun::compose(outer, inner);
  EXPECT_EQ(s.apply(c), c);
  EXPECT_EQ(s.apply(arrow(a, c)), outer.apply(inner.apply(arrow(a, c))));
  EXPECT_EQ(s.find(2), nullptr);
}

TEST(Unify, Examples) {
  auto s = fun::unify(a, kInt);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, Substitution::single(0, kInt));

  std::string why;
  EXPECT_FALSE(fun::unify(kInt, kBool, &why));
  EXPECT_NE(why.find("cannot unify"), std::string::npos);
  EXPECT_FALSE(fun::unify(kInt, arrow(kInt, kInt)));
  EXPECT_FALSE(fun::unify(a, arrow(a, b), &why));
  EXPECT_NE(why.find("occurs"), std::string::npos);

  auto t = fun::unify(arrow(a, b), arrow(kInt, c));
  ASSERT_TRUE(t);
  EXPECT_EQ(t->apply(arrow(a, b)), t->apply(arrow(kInt, c)));
  EXPECT_EQ(t->apply(a), kInt);
}

TEST(Unify, ResultIsIdempotentAndSound) {
  auto universe = type_universe(2, {0, 1, 2});
  Rng rng(61);
  for (int i = 0; i < 5000; ++i) {
    Type x = rng.pick(universe), y = rng.pick(universe);
    auto s = fun::unify(x, y);
    if (!s) continue;
    EXPECT_EQ(s->apply(x), s->apply(y));
    EXPECT_EQ(fun::compose(*s, *s).apply(arrow(x, y)), s->apply(arrow(x, y)));
    for (const auto& [v, t] : *s) EXPECT_FALSE(occurs_in(v, t));
  }
}

TEST(InferW, Examples) {
  auto id = fun::infer_W({}, fun::parse_fun("fun f x -> x"));
  ASSERT_TRUE(id.type.is_arrow());
  EXPECT_TRUE(fun::alpha_equivalent(id.type, arrow(a, a)));
  EXPECT_EQ(id.type.domain(), id.type.codomain());

  EXPECT_EQ(fun::infer_W({}, fun::erase(fun::parse_fun(kFact))).type, kInt);

  Symbol x("x");
  fun::TypeEnv g{{x, a}};
  auto r = fun::infer_W(g, fun::parse_fun("if x then 1 else 2"));
  EXPECT_EQ(r.type, kInt);
  EXPECT_EQ(r.subst.apply(a), kBool);
}

TEST(InferW, ConditionalUnifiesBothBranches) {
  Symbol x("x"), y("y");
  fun::TypeEnv g{{x, a}, {y, b}};
  auto r = fun::infer_W(g, fun::parse_fun("if true then x else y + 1"));
  EXPECT_EQ(r.type, kInt);
  EXPECT_EQ(r.subst.apply(a), kInt);
  EXPECT_EQ(r.subst.apply(b), kInt);
}

TEST(InferW, LetThreadsTheBoundSubstitution) {
  Symbol x("x");
  auto r = fun::infer_W({{x, a}}, fun::parse_fun("let y = x + 1 in x"));
  EXPECT_EQ(r.type, kInt);
  EXPECT_EQ(r.subst.apply(a), kInt);
}

TEST(InferW, Failures) {
  EXPECT_THROW(fun::infer_W({}, fun::parse_fun("fun f x -> x x")), TypeError);
  EXPECT_THROW(fun::infer_W({}, fun::parse_fun("if 1 then 2 else 3")), TypeError);
  EXPECT_THROW(fun::infer_W({}, fun::parse_fun("z")), TypeError);
  // Let is monomorphic.
  EXPECT_THROW(fun::infer_W({}, fun::parse_fun("let i = fun i x -> x in if i true then i 1 else 2")), TypeError);
}

TEST(InferW, FreshVariablesAvoidTheEnvironment) {
  Symbol x("x");
  fun::TypeEnv g{{x, Type::Var(40)}};
  auto r = fun::infer_W(g, fun::parse_fun("fun f y -> x"));
  std::vector<std::uint32_t> vars;
  collect_type_vars(r.type, vars);
  for (auto v : vars)
    if (v != 40) {
      EXPECT_GT(v, 40u);
    }
}

TEST(CrossSystem, InferredTypeUnifiesWithDeclaredType) {
  Rng rng(62);
  for (int i = 0; i < 1000; ++i) {
    auto env = random_fun_env(rng);
    Type want = random_type(rng);
    auto e = gen_typed(rng, env, want, 4);
    ASSERT_EQ(fun::check_F(env, e), want);
    auto r = fun::infer_W(env, fun::erase(e));
    EXPECT_TRUE(fun::unify(r.type, want)) << fun::pretty(e);
  }
}

TEST(CompatW, Examples) {
  Symbol x("x");
  auto e = fun::var(x);
  EXPECT_TRUE(fun::compat_W({{x, a}}, {{x, kInt}}, e));
  EXPECT_FALSE(fun::compat_W({{x, kInt}}, {{x, kBool}}, e));
  EXPECT_FALSE(fun::compat_W({{x, arrow(a, a)}}, {{x, arrow(kInt, kBool)}}, e));
  EXPECT_FALSE(fun::compat_W({}, {{x, kInt}}, e));
}

TEST(CompatW, RenamingVariantIsBijective) {
  Symbol x("x"), y("y");
  auto e = fun::parse_fun("x y");
  EXPECT_TRUE(fun::compat_renaming({{x, arrow(a, b)}, {y, a}}, {{x, arrow(c, a)}, {y, c}}, e));
  EXPECT_FALSE(fun::compat_renaming({{x, arrow(a, a)}, {y, a}}, {{x, arrow(c, b)}, {y, c}}, e));
  EXPECT_FALSE(fun::compat_renaming({{x, arrow(a, b)}, {y, a}}, {{x, arrow(c, c)}, {y, c}}, e));
  EXPECT_FALSE(fun::compat_renaming({{x, a}, {y, a}}, {{x, kInt}, {y, kInt}}, e));
}

/// W with the cache accepting hits under unifiable (rather than renamed)
/// environments.
struct UnifiableHits : fun::FunInfer {
  static constexpr std::string_view name() { return "fun-infer-unifiable"; }
  bool compat(const fun::TypeEnv& env, const fun::TypeEnv& cached, const fun::Expr& e) const {
    return fun::compat_W(env, cached, e);
  }
};

TEST(CompatW, LiteralUnifiabilityLosesCoherence) {
  Symbol x("x");
  auto e = fun::var(x);
  Cache<UnifiableHits> cache;
  cache.insert({e, {{x, kInt}}, {kInt, {}}});
  fun::TypeEnv g{{x, a}};
  UnifiableHits inst;
  auto out = incremental_type(g, cache, e, inst);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.stats.hits, 1u);
  // W gives (α, id); the cached int is a different typing.
  auto direct = fun::infer_W(g, e);
  EXPECT_EQ(direct.type, a);
  EXPECT_FALSE(fun::equivalent_typing(g, *out.result, direct));

  // The renaming-based check misses and recomputes.
  fun::InferCache renamed;
  renamed.insert({e, {{x, kInt}}, {kInt, {}}});
  auto fixed = fun::infer_IW(g, renamed, e);
  EXPECT_EQ(fixed.stats.hits, 0u);
  EXPECT_TRUE(fun::equivalent_typing(g, *fixed.result, direct));
}

TEST(EquivalentTyping, HoldsEnvironmentVariablesFixed) {
  Symbol x("x");
  fun::TypeEnv g{{x, a}};
  EXPECT_TRUE(fun::equivalent_typing(g, {arrow(a, b), {}}, {arrow(a, c), {}}));
  EXPECT_FALSE(fun::equivalent_typing(g, {arrow(a, b), {}}, {arrow(c, b), {}}));
  EXPECT_TRUE(fun::equivalent_typing(g, {b, Substitution::single(0, arrow(b, kInt))},
                                     {c, Substitution::single(0, arrow(c, kInt))}));
  EXPECT_FALSE(fun::equivalent_typing(g, {b, Substitution::single(0, kInt)}, {b, {}}));
  EXPECT_EQ(canonical_typing(g, {arrow(a, b), {}}), canonical_typing(g, {arrow(a, c), {}}));
}

TEST(InferIW, EmptyCacheAgreesWithW) {
  Rng rng(63);
  int typed = 0;
  for (int i = 0; i < 500; ++i) {
    auto env = abstract_env(rng, random_fun_env(rng), 0, 0.5);
    auto e = fun::erase(mutate_typed(rng, gen_typed(rng, random_fun_env(rng), random_type(rng), 4), {}));
    std::optional<fun::Typing> direct;
    try { direct = fun::infer_W(env, e); } catch (const TypeError&) {}
    auto out = fun::infer_IW(env, {}, e);
    ASSERT_EQ(out.ok(), direct.has_value()) << fun::pretty(e);
    if (!direct) continue;
    EXPECT_EQ(canonical_typing(env, *out.result), canonical_typing(env, *direct)) << fun::pretty(e);
    ++typed;
  }
  EXPECT_GT(typed, 50);
}

TEST(InferIW, FullHitReturnsTheCachedPair) {
  auto e = fun::erase(fun::parse_fun(kFact));
  auto first = fun::infer_IW({}, {}, e);
  ASSERT_TRUE(first.ok());
  auto second = fun::infer_IW({}, first.cache, e);
  EXPECT_EQ(second.stats, (EngineStats{1, 0, 0, 1}));
  EXPECT_EQ(second.result->type, kInt);
  const auto* root = first.cache.find_exact(e, {});
  ASSERT_NE(root, nullptr);
  EXPECT_EQ(*second.result, root->result);
}

TEST(InferIW, ReusesTypeAndSubstitutionOfUnchangedBranch) {
  auto before = fun::infer_IW({}, {}, fun::erase(fun::parse_fun(kFact)));
  auto f2 = fun::erase(fun::parse_fun(kFactPrime));
  auto out = fun::infer_IW({}, before.cache, f2, true);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.result->type, kInt);
  std::set<std::string> hits;
  for (const auto& ev : out.trace)
    if (ev.step == Step::Hit) hits.insert(fun::pretty(ev.term));
  EXPECT_TRUE(hits.count("n * fact (n - 1)"));
  EXPECT_TRUE(hits.count("fact 7"));
  EXPECT_FALSE(hits.count("n >= 3"));

  // The reused entry carries the binding that makes fact : int -> int.
  bool found = false;
  before.cache.for_each([&](const CacheEntry<fun::FunInfer>& entry) {
    if (fun::pretty(entry.term) != "n * fact (n - 1)") return;
    found = true;
    EXPECT_EQ(entry.result.type, kInt);
    const Type tf = *entry.env.find(Symbol("fact"));
    EXPECT_EQ(entry.result.subst.apply(tf).codomain(), kInt);
  });
  EXPECT_TRUE(found);
}

TEST(InferIW, AgreesWithWOnMutants) {
  Rng rng(64);
  for (int i = 0; i < 400; ++i) {
    auto base_env = random_fun_env(rng);
    auto p = gen_typed(rng, base_env, random_type(rng), 4);
    auto env = abstract_env(rng, base_env, 0, 0.5);
    auto cache = fun::infer_IW(env, {}, fun::erase(p)).cache;
    auto mutant = fun::erase(mutate_typed(rng, p, base_env));
    auto env2 = rng.chance(0.5) ? env : abstract_env(rng, base_env, 100, 0.5);
    std::optional<fun::Typing> direct;
    try { direct = fun::infer_W(env2, mutant); } catch (const TypeError&) {}
    auto out = fun::infer_IW(env2, cache, mutant);
    ASSERT_EQ(out.ok(), direct.has_value()) << fun::pretty(mutant);
    if (direct) {
      EXPECT_EQ(canonical_typing(env2, *out.result), canonical_typing(env2, *direct)) << fun::pretty(mutant);
    }
  }
}

std::uint32_t max_var(const fun::InferCache& c) {
  std::uint32_t m = 0;
  c.for_each([&](const CacheEntry<fun::FunInfer>& e) {
    std::vector<std::uint32_t> vars;
    for (const auto& [name, t] : e.env) collect_type_vars(t, vars);
    collect_type_vars(e.result.type, vars);
    for (const auto& [v, t] : e.result.subst) {
      vars.push_back(v);
      collect_type_vars(t, vars);
    }
    for (auto v : vars) m = std::max(m, v + 1);
  });
  return m;
}

TEST(InferIW, FreshVariablesNeverCollideWithCachedOnes) {
  Rng rng(65);
  for (int i = 0; i < 200; ++i) {
    auto env = random_fun_env(rng);
    auto p = fun::erase(gen_typed(rng, env, random_type(rng), 4));
    auto first = fun::infer_IW({}, {}, fun::parse_fun("fun f x -> fun g y -> y x"));
    auto cache = merge(first.cache, fun::infer_IW(env, {}, p).cache);
    ASSERT_GE(cache.fresh_counter(), max_var(cache));
    const auto before = cache.fresh_counter();
    auto out = fun::infer_IW(env, cache, fun::erase(gen_typed(rng, env, random_type(rng), 4)));
    if (!out.ok()) continue;
    // Entries added by the run only use variables above the old counter
    // (or variables of Γ, and this Γ has none).
    out.cache.for_each([&](const CacheEntry<fun::FunInfer>& e) {
      if (cache.contains(e.term, e.env)) return;
      std::vector<std::uint32_t> vars;
      collect_type_vars(e.result.type, vars);
      for (const auto& [name, t] : e.env) collect_type_vars(t, vars);
      for (auto v : vars) EXPECT_GE(v, before);
    });
    EXPECT_GE(out.cache.fresh_counter(), max_var(out.cache));
  }
}

}  // namespace
