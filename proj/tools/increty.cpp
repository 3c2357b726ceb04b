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

// increty: command-line front end for the incremental checkers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "increty.hpp"

namespace {

using namespace increty;

constexpr int kOk = 0;
constexpr int kTypeError = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

struct Options {
  std::string input;
  std::string cache_path;
  std::string cache_in;
  std::string cache_out;
  std::string levels;
  std::string format = "human";
  bool stats = false;

  unsigned depth = 12;
  std::vector<std::size_t> vars{1};
  std::vector<unsigned> diff_depths;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
};

void print_stats(const Options& o, const EngineStats& s) {
  if (o.format == "csv") {
    std::cout << "hits,misses,base_invocations,nodes_visited\n"
              << s.hits << ',' << s.misses << ',' << s.base_invocations << ',' << s.nodes_visited << '\n';
  } else {
    std::cout << "hits=" << s.hits << " misses=" << s.misses << " base=" << s.base_invocations
              << " visited=" << s.nodes_visited << '\n';
  }
}

template <LanguageInstance L>
Cache<L> input_cache(const std::string& path) {
  if (path.empty()) return {};
  return load<L>(read_file(path));
}

/// Runs one incremental pass, prints the result (via `show`) and the stats,
/// and writes the updated cache when asked.
template <LanguageInstance L, class Show>
int run_incremental(const Options& o, const Env<typename L::Binding>& env, Cache<L> cache,
                    const typename L::Term& term, L& inst, Show&& show) {
  auto out = incremental_type(env, std::move(cache), term, inst);
  if (!o.cache_out.empty()) write_file(o.cache_out, dump(out.cache));
  if (out.error) {
    std::cerr << "error: " << out.error->what() << '\n';
    if (o.stats) print_stats(o, out.stats);
    return kTypeError;
  }
  std::cout << show(*out.result) << '\n';
  if (o.stats) print_stats(o, out.stats);
  return kOk;
}

int cmd_check(const Options& o, std::string cache_in) {
  auto term = fun::parse_fun(read_file(o.input));
  if (!fun::is_typed(term)) throw UsageError("check expects annotated abstractions; use infer for untyped programs");
  fun::FunCheck inst;
  return run_incremental(o, fun::TypeEnv{}, input_cache<fun::FunCheck>(cache_in), term, inst,
                         [](const Type& t) { return to_string(t); });
}

int cmd_infer(const Options& o, std::string cache_in) {
  auto term = fun::erase(fun::parse_fun(read_file(o.input)));
  fun::FunInfer inst;
  return run_incremental(o, fun::TypeEnv{}, input_cache<fun::FunInfer>(cache_in), term, inst,
                         [](const fun::Typing& r) {
                           TypeVarNamer namer;
                           return to_string(r.type, namer);
                         });
}

int cmd_secure(const Options& o, std::string cache_in) {
  if (o.levels.empty()) throw UsageError("secure requires --levels");
  auto phrase = imp::parse_while(read_file(o.input));
  imp::SecEnv env = imp::parse_levels(read_file(o.levels));
  auto missing = imp::missing_levels(env, phrase);
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw UsageError("no security level declared for: " + names);
  }
  imp::WhileSecurity inst;
  return run_incremental(o, env, input_cache<imp::WhileSecurity>(cache_in), phrase, inst,
                         [](const imp::SecurityType& s) { return to_string(s); });
}

int cmd_diff(const Options& o) {
  std::string tag = cache_instance(read_file(o.cache_path));
  if (tag == fun::FunCheck::name()) return cmd_check(o, o.cache_path);
  if (tag == fun::FunInfer::name()) return cmd_infer(o, o.cache_path);
  if (tag == imp::WhileSecurity::name()) return cmd_secure(o, o.cache_path);
  throw UsageError("unknown cache instance '" + tag + "'");
}

template <LanguageInstance L>
int verify(const std::string& text) {
  auto cache = load<L>(text);
  L inst;
  auto bad = verify_cache(cache, inst);
  for (const auto& v : bad) std::cout << "violation: " << pretty(v.term) << ": " << v.reason << '\n';
  std::cout << cache.size() << " entries, " << bad.size() << " violations\n";
  return bad.empty() ? kOk : kTypeError;
}

int cmd_cache_verify(const Options& o) {
  std::string text = read_file(o.cache_path);
  std::string tag = cache_instance(text);
  if (tag == fun::FunCheck::name()) return verify<fun::FunCheck>(text);
  if (tag == fun::FunInfer::name()) return verify<fun::FunInfer>(text);
  if (tag == imp::WhileSecurity::name()) return verify<imp::WhileSecurity>(text);
  throw UsageError("unknown cache instance '" + tag + "'");
}

int cmd_bench(const Options& o) {
  std::vector<bench::SyntheticSpec> specs;
  for (std::size_t n : o.vars) specs.push_back({o.depth, n, o.seed});
  bench::TimingOptions timing;
  timing.trials = o.trials;
  std::vector<bench::BenchRecord> records;
  try {
    records = bench::bench(specs, o.diff_depths, timing);
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
  if (o.format == "csv") {
    std::cout << bench::emit_csv(records);
    return kOk;
  }
  std::printf("%5s %7s %10s %-18s %16s %6s\n", "depth", "nvars", "diff_nodes", "mode", "retypings/s", "trials");
  for (const auto& r : records)
    std::printf("%5u %7zu %10zu %-18s %16.2f %6zu\n", r.depth, r.nvars, r.diff_nodes, r.mode.c_str(),
                r.retypings_per_sec, r.trials);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental type checking, inference and security typing"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cache-out", o.cache_out, "Write the updated cache here");
    sub->add_flag("--stats", o.stats, "Print hit/miss statistics");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "csv"}));
  };

  auto* check = app.add_subcommand("check", "Type check an annotated FUN program");
  check->add_option("program", o.input)->required();
  check->add_option("--cache-in", o.cache_in, "Start from this cache");
  add_common(check);

  auto* infer = app.add_subcommand("infer", "Infer the type of a FUN program");
  infer->add_option("program", o.input)->required();
  infer->add_option("--cache-in", o.cache_in, "Start from this cache");
  add_common(infer);

  auto* secure = app.add_subcommand("secure", "Security type check a WHILE program");
  secure->add_option("program", o.input)->required();
  secure->add_option("--levels", o.levels, "name=L|H per line")->required();
  secure->add_option("--cache-in", o.cache_in, "Start from this cache");
  add_common(secure);

  auto* diff = app.add_subcommand("diff", "Re-type a program against an existing cache");
  diff->add_option("cache", o.cache_path)->required();
  diff->add_option("program", o.input)->required();
  diff->add_option("--levels", o.levels, "Levels file (while-sec caches)");
  add_common(diff);

  auto* bench_cmd = app.add_subcommand("bench", "Throughput on synthetic programs");
  bench_cmd->add_option("--depth", o.depth, "Tree depth")->check(CLI::Range(1u, 24u));
  bench_cmd->add_option("--vars", o.vars, "Distinct variables (repeatable)")->delimiter(',');
  bench_cmd->add_option("--diff-depths", o.diff_depths, "Comma-separated diff depths")->delimiter(',');
  bench_cmd->add_option("--trials", o.trials, "Timed trials per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", o.seed, "Leaf assignment seed");
  bench_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "csv"}));
  bench_cmd->callback([&] {
    if (bench_cmd->count("--format") == 0) o.format = "csv";
  });

  auto* verify_cmd = app.add_subcommand("cache-verify", "Re-check every cache entry with the base algorithm");
  verify_cmd->add_option("cache", o.cache_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(o, o.cache_in);
    if (*infer) return cmd_infer(o, o.cache_in);
    if (*secure) return cmd_secure(o, o.cache_in);
    if (*diff) return cmd_diff(o);
    if (*bench_cmd) return cmd_bench(o);
    if (*verify_cmd) return cmd_cache_verify(o);
  } catch (const TypeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTypeError;
  } catch (const ParseError& e) {
    std::cerr << o.input << ":" << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
