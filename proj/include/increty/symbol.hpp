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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace increty {

// FNV-1a over bytes; used for names so fingerprints are stable across runs.
inline std::uint64_t hash_bytes(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t hash_mix(std::uint64_t h) noexcept {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ull;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) noexcept {
  return hash_mix(seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)));
}

/// An interned identifier. Two symbols are equal iff their spellings are.
/// Ordering follows interning order, which is deterministic for a given
/// sequence of parses; use `name()` when a lexicographic order is needed.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name) : Symbol(intern(name)) {}

  const std::string& name() const { return table().names[id_]; }
  std::uint32_t id() const { return id_; }
  std::uint64_t hash() const { return table().hashes[id_]; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }
  friend std::ostream& operator<<(std::ostream& os, Symbol s) { return os << s.name(); }

 private:
  struct Table {
    std::mutex mu;
    std::deque<std::string> names{std::string()};
    std::deque<std::uint64_t> hashes{0};
    std::unordered_map<std::string_view, std::uint32_t> index;
  };
  static Table& table() {
    static Table t;
    return t;
  }
  static Symbol intern(std::string_view name) {
    Table& t = table();
    std::lock_guard lock(t.mu);
    if (auto it = t.index.find(name); it != t.index.end()) return Symbol(it->second);
    auto id = static_cast<std::uint32_t>(t.names.size());
    t.names.emplace_back(name);
    t.hashes.push_back(hash_bytes(name));
    t.index.emplace(t.names.back(), id);
    return Symbol(id);
  }
  explicit Symbol(std::uint32_t id) : id_(id) {}

  std::uint32_t id_ = 0;
};

struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

/// Source position, 1-based. Not part of structural identity.
struct Span {
  int line = 0;
  int column = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

}  // namespace increty

template <>
struct std::hash<increty::Symbol> {
  std::size_t operator()(increty::Symbol s) const noexcept { return s.id(); }
};
