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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "increty/symbol.hpp"

namespace increty {

enum class TypeKind : std::uint8_t { Int, Bool, Arrow, Var };

namespace detail {

struct TypeNode {
  TypeKind kind;
  std::uint32_t var = 0;
  const TypeNode* domain = nullptr;
  const TypeNode* codomain = nullptr;
  std::uint64_t hash = 0;
  bool has_vars = false;
};

// Types are hash-consed: structurally equal types share one node, so
// equality and hashing are pointer operations. Nodes live for the process.
class TypeArena {
 public:
  static TypeArena& get() {
    static TypeArena arena;
    return arena;
  }

  const TypeNode* int_type() const { return &int_; }
  const TypeNode* bool_type() const { return &bool_; }

  const TypeNode* arrow(const TypeNode* d, const TypeNode* c) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = arrows_.try_emplace(Key{d, c});
    if (inserted) {
      auto& node = storage_.emplace_back();
      node.kind = TypeKind::Arrow;
      node.domain = d;
      node.codomain = c;
      node.hash = hash_combine(hash_combine(0xa11ull, d->hash), c->hash);
      node.has_vars = d->has_vars || c->has_vars;
      it->second = &node;
    }
    return it->second;
  }

  const TypeNode* var(std::uint32_t id) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = vars_.try_emplace(id);
    if (inserted) {
      auto& node = storage_.emplace_back();
      node.kind = TypeKind::Var;
      node.var = id;
      node.hash = hash_combine(0x7a5ull, id);
      node.has_vars = true;
      it->second = &node;
    }
    return it->second;
  }

 private:
  struct Key {
    const TypeNode* d;
    const TypeNode* c;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return hash_combine(k.d->hash, k.c->hash);
    }
  };

  TypeArena() {
    int_.kind = TypeKind::Int;
    int_.hash = 0x1f1ull;
    bool_.kind = TypeKind::Bool;
    bool_.hash = 0xb001ull;
  }

  TypeNode int_;
  TypeNode bool_;
  std::mutex mu_;
  std::deque<TypeNode> storage_;
  std::unordered_map<Key, const TypeNode*, KeyHash> arrows_;
  std::unordered_map<std::uint32_t, const TypeNode*> vars_;
};

}  // namespace detail

/// A FUN type: int | bool | τ1 -> τ2, augmented with type variables for
/// inference. A default-constructed Type is empty and must not be inspected.
class Type {
 public:
  Type() = default;

  static Type Int() { return Type(detail::TypeArena::get().int_type()); }
  static Type Bool() { return Type(detail::TypeArena::get().bool_type()); }
  static Type Arrow(Type domain, Type codomain) {
    return Type(detail::TypeArena::get().arrow(domain.node_, codomain.node_));
  }
  static Type Var(std::uint32_t id) { return Type(detail::TypeArena::get().var(id)); }

  bool valid() const { return node_ != nullptr; }
  TypeKind kind() const { return node_->kind; }
  bool is_int() const { return kind() == TypeKind::Int; }
  bool is_bool() const { return kind() == TypeKind::Bool; }
  bool is_arrow() const { return kind() == TypeKind::Arrow; }
  bool is_var() const { return kind() == TypeKind::Var; }
  Type domain() const { return Type(node_->domain); }
  Type codomain() const { return Type(node_->codomain); }
  std::uint32_t var_id() const { return node_->var; }
  /// False for the simple types of the checking instance.
  bool has_vars() const { return node_->has_vars; }
  std::uint64_t hash() const { return node_->hash; }

  friend bool operator==(Type a, Type b) { return a.node_ == b.node_; }

 private:
  explicit Type(const detail::TypeNode* node) : node_(node) {}
  const detail::TypeNode* node_ = nullptr;
};

/// Type variables in first-occurrence order, without duplicates.
inline void collect_type_vars(Type t, std::vector<std::uint32_t>& out) {
  if (!t.has_vars()) return;
  switch (t.kind()) {
    case TypeKind::Var:
      if (std::find(out.begin(), out.end(), t.var_id()) == out.end()) out.push_back(t.var_id());
      return;
    case TypeKind::Arrow:
      collect_type_vars(t.domain(), out);
      collect_type_vars(t.codomain(), out);
      return;
    default:
      return;
  }
}

inline bool occurs_in(std::uint32_t var, Type t) {
  if (!t.has_vars()) return false;
  if (t.is_var()) return t.var_id() == var;
  if (t.is_arrow()) return occurs_in(var, t.domain()) || occurs_in(var, t.codomain());
  return false;
}

/// Names type variables 'a, 'b, ... in the order they are first printed.
class TypeVarNamer {
 public:
  std::string name(std::uint32_t id) {
    auto [it, inserted] = names_.try_emplace(id, names_.size());
    return spell(it->second);
  }
  bool known(std::uint32_t id) const { return names_.count(id) != 0; }

  static std::string spell(std::size_t index) {
    std::string s = "'";
    std::string letters;
    do {
      letters.insert(letters.begin(), static_cast<char>('a' + index % 26));
      index /= 26;
    } while (index-- > 0);
    return s + letters;
  }

 private:
  std::map<std::uint32_t, std::size_t> names_;
};

namespace detail {
inline void print_type(std::string& out, Type t, TypeVarNamer* namer) {
  switch (t.kind()) {
    case TypeKind::Int: out += "int"; return;
    case TypeKind::Bool: out += "bool"; return;
    case TypeKind::Var:
      if (namer) out += namer->name(t.var_id());
      else out += "'t" + std::to_string(t.var_id());
      return;
    case TypeKind::Arrow:
      if (t.domain().is_arrow()) {
        out += '(';
        print_type(out, t.domain(), namer);
        out += ')';
      } else {
        print_type(out, t.domain(), namer);
      }
      out += " -> ";
      print_type(out, t.codomain(), namer);
      return;
  }
}
}  // namespace detail

/// Raw form: variables print as 't<id>.
inline std::string to_string(Type t) {
  std::string out;
  detail::print_type(out, t, nullptr);
  return out;
}

/// Canonical form: variables renamed 'a, 'b, ... via `namer`.
inline std::string to_string(Type t, TypeVarNamer& namer) {
  std::string out;
  detail::print_type(out, t, &namer);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, Type t) { return os << to_string(t); }

}  // namespace increty

template <>
struct std::hash<increty::Type> {
  std::size_t operator()(increty::Type t) const noexcept { return t.hash(); }
};
