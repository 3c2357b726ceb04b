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
#include <string>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using namespace increty;
using namespace increty::testing;

std::set<std::string> names(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

TEST(FreeVars, Examples) {
  EXPECT_EQ(fv_names(fun::parse_fun("n - 1")), names({"n"}));
  EXPECT_TRUE(fun::parse_fun("7")->free_vars().empty());
  EXPECT_EQ(fv_names(fun::parse_fun("let x = y in x + z")), names({"y", "z"}));
  EXPECT_EQ(fv_names(fun::parse_fun("fun f x -> f (x + y)")), names({"y"}));
  EXPECT_TRUE(fun::parse_fun(kFact)->free_vars().empty());
  EXPECT_EQ(fv_names(imp::parse_while("x := y + 1; while z <= 1 do skip")), names({"x", "y", "z"}));
  EXPECT_TRUE(imp::parse_while("skip")->free_vars().empty());
}

TEST(FreeVars, MatchOccurrenceScanOnRandomTerms) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto env = random_fun_env(rng);
    auto e = gen_typed(rng, env, random_type(rng), 4);
    ASSERT_EQ(fv_names(e), naive_fv(e)) << fun::pretty(e);
    const auto fv = e->free_vars();
    ASSERT_TRUE(std::is_sorted(fv.begin(), fv.end()));
  }
}

TEST(Parse, GrammarImages) {
  auto let = fun::parse_fun("let x = 1 in x");
  ASSERT_EQ(let->kind(), fun::ExprKind::Let);
  EXPECT_EQ(let->name().name(), "x");
  EXPECT_EQ(let->child(0)->kind(), fun::ExprKind::Const);
  EXPECT_EQ(let->child(0)->int_value(), 1);
  EXPECT_EQ(let->child(1)->kind(), fun::ExprKind::Var);

  auto abs = fun::parse_fun("fun fact (n : int) -> (n : int)");
  ASSERT_EQ(abs->kind(), fun::ExprKind::Abs);
  EXPECT_EQ(abs->name().name(), "fact");
  EXPECT_EQ(abs->param().name(), "n");
  EXPECT_EQ(*abs->param_type(), Type::Int());
  EXPECT_EQ(*abs->body_type(), Type::Int());
  EXPECT_TRUE(structurally_equal(abs->body(), fun::var("n")));

  auto loop = imp::parse_while("while x <= 1 do skip");
  EXPECT_TRUE(structurally_equal(loop, imp::while_(imp::leq(imp::var("x"), imp::num(1)), imp::skip())));
}

TEST(Parse, ApplicationAndArrowAssociativity) {
  EXPECT_TRUE(structurally_equal(fun::parse_fun("f x y"),
                                 fun::app(fun::app(fun::var("f"), fun::var("x")), fun::var("y"))));
  EXPECT_EQ(fun::parse_type("int -> int -> bool"),
            Type::Arrow(Type::Int(), Type::Arrow(Type::Int(), Type::Bool())));
  EXPECT_EQ(to_string(Type::Arrow(Type::Arrow(Type::Int(), Type::Int()), Type::Bool())), "(int -> int) -> bool");
}

TEST(Parse, CommentsAreSkipped) {
  EXPECT_TRUE(structurally_equal(fun::parse_fun("(* one *) 1 + (* two *) 2"), fun::parse_fun("1 + 2")));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    fun::parse_fun("let x = in x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1u);
    EXPECT_EQ(e.span().column, 9u);
  }
  EXPECT_THROW(imp::parse_while("x := "), ParseError);
  EXPECT_THROW(imp::parse_while("if x then skip"), ParseError);
  EXPECT_THROW(fun::parse_fun("1 +"), ParseError);
}

TEST(Parse, FunRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto env = random_fun_env(rng);
    auto e = gen_typed(rng, env, random_type(rng), 4);
    if (rng.chance(0.5)) e = fun::erase(e);
    auto back = fun::parse_fun(fun::pretty(e));
    ASSERT_TRUE(structurally_equal(e, back)) << fun::pretty(e);
    ASSERT_EQ(e->hash(), back->hash());
  }
}

TEST(Parse, WhileRoundTrip) {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    auto p = gen_phrase(rng, static_cast<imp::Sort>(rng.below(3)), 5);
    auto back = imp::parse_while(imp::pretty(p));
    ASSERT_TRUE(structurally_equal(p, back)) << imp::pretty(p);
  }
}

TEST(Restrict, Examples) {
  Symbol n("n"), fact("fact"), x("x"), y("y"), z("z");
  fun::TypeEnv g{{n, Type::Int()}, {fact, Type::Arrow(Type::Int(), Type::Int())}};
  std::vector<Symbol> only_n{n};
  EXPECT_EQ(restrict(g, only_n), (fun::TypeEnv{{n, Type::Int()}}));
  EXPECT_TRUE(restrict(g, {}).empty());

  imp::SecEnv s{{x, imp::SecurityType::var(imp::Level::H)}, {y, imp::SecurityType::var(imp::Level::L)}};
  std::vector<Symbol> yz{y, z};
  std::sort(yz.begin(), yz.end());
  EXPECT_EQ(restrict(s, yz), (imp::SecEnv{{y, imp::SecurityType::var(imp::Level::L)}}));
}

TEST(Restrict, IdempotentAndIntersecting) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    auto env = random_fun_env(rng);
    std::vector<Symbol> vars;
    for (Symbol s : fun_names())
      if (rng.chance(0.5)) vars.push_back(s);
    std::sort(vars.begin(), vars.end());
    auto once = restrict(env, vars);
    EXPECT_EQ(restrict(once, vars), once);
    for (const auto& [name, t] : env) {
      bool wanted = std::binary_search(vars.begin(), vars.end(), name);
      EXPECT_EQ(once.contains(name), wanted);
      if (wanted) {
        EXPECT_EQ(*once.find(name), t);
      }
    }
    EXPECT_LE(once.size(), vars.size());
  }
}

TEST(Annotate, FactorialAndFailures) {
  fun::FunCheck inst;
  auto a = annotate(fun::parse_fun(kFact), {}, inst);
  ASSERT_TRUE(a.result);
  EXPECT_EQ(*a.result, Type::Int());
  EXPECT_TRUE(a.fully_typed());

  auto one = annotate(fun::parse_fun("1"), {}, inst);
  EXPECT_EQ(*one.result, Type::Int());
  EXPECT_TRUE(one.children.empty());

  auto bad = annotate(fun::parse_fun("1 + true"), {}, inst);
  EXPECT_FALSE(bad.result);
  ASSERT_EQ(bad.children.size(), 2u);
  EXPECT_EQ(*bad.children[0].result, Type::Int());
  EXPECT_EQ(*bad.children[1].result, Type::Bool());
}

TEST(Annotate, Deterministic) {
  Rng rng(5);
  fun::FunCheck inst;
  auto same = [](auto& self, const AnnotatedAST<fun::FunCheck>& a, const AnnotatedAST<fun::FunCheck>& b) -> bool {
    if (a.node != b.node || a.result != b.result || a.fv != b.fv || a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
      if (!self(self, a.children[i], b.children[i])) return false;
    return true;
  };
  for (int i = 0; i < 300; ++i) {
    auto env = random_fun_env(rng);
    auto e = mutate_typed(rng, gen_typed(rng, env, random_type(rng), 4), env);
    EXPECT_TRUE(same(same, annotate(e, env, inst), annotate(e, env, inst)));
  }
}

TEST(Terms, HashConsistentWithStructure) {
  auto a = fun::parse_fun("fun f (x : int) -> (x + 1 : int)");
  auto b = fun::parse_fun("fun f (x : int) -> (x + 1 : int)");
  auto c = fun::parse_fun("fun f (x : int) -> (x + 2 : int)");
  EXPECT_TRUE(structurally_equal(a, b));
  EXPECT_EQ(a->hash(), b->hash());
  EXPECT_FALSE(structurally_equal(a, c));
  // Alpha-variants are different keys.
  EXPECT_FALSE(structurally_equal(a, fun::parse_fun("fun f (y : int) -> (y + 1 : int)")));
}

}  // namespace
