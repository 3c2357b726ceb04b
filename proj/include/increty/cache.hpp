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
#include <functional>
#include <unordered_map>
#include <vector>

#include "increty/env.hpp"
#include "increty/instance.hpp"

namespace increty {

template <class L>
struct CacheEntry {
  typename L::Term term;
  Env<typename L::Binding> env;
  typename L::Result result;
};

/// A set of (term, Γ|FV(term), result) triples, bucketed by structural
/// fingerprint. Hits are confirmed by structural term equality; a term may
/// have several entries under different environments.
template <class L>
class Cache {
 public:
  using Term = typename L::Term;
  using EnvT = Env<typename L::Binding>;
  using Entry = CacheEntry<L>;

  /// First entry for `t` whose environment satisfies compat, or null.
  const Entry* lookup(const Term& t, const EnvT& env, L& inst) const {
    auto it = buckets_.find(t->hash());
    if (it == buckets_.end()) return nullptr;
    for (const Entry& e : it->second) {
      if (structurally_equal(e.term, t) && inst.compat(env, e.env, t)) return &e;
    }
    return nullptr;
  }

  /// Adds an entry; an existing entry with the same term and environment is
  /// replaced. Returns true when the cache grew.
  bool insert(Entry entry) {
    auto& bucket = buckets_[entry.term->hash()];
    for (Entry& e : bucket) {
      if (e.env == entry.env && structurally_equal(e.term, entry.term)) {
        e.result = std::move(entry.result);
        return false;
      }
    }
    bucket.push_back(std::move(entry));
    ++size_;
    return true;
  }

  /// Removes the entry for exactly (term, env). Returns true if one existed.
  bool erase(const Term& t, const EnvT& env) {
    auto it = buckets_.find(t->hash());
    if (it == buckets_.end()) return false;
    auto& bucket = it->second;
    for (auto e = bucket.begin(); e != bucket.end(); ++e) {
      if (e->env == env && structurally_equal(e->term, t)) {
        bucket.erase(e);
        --size_;
        if (bucket.empty()) buckets_.erase(it);
        return true;
      }
    }
    return false;
  }

  bool contains(const Term& t, const EnvT& env) const {
    auto it = buckets_.find(t->hash());
    if (it == buckets_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](const Entry& e) {
      return e.env == env && structurally_equal(e.term, t);
    });
  }

  /// The entry stored for exactly (term, env), or null.
  const Entry* find_exact(const Term& t, const EnvT& env) const {
    auto it = buckets_.find(t->hash());
    if (it == buckets_.end()) return nullptr;
    for (const Entry& e : it->second)
      if (e.env == env && structurally_equal(e.term, t)) return &e;
    return nullptr;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::uint64_t fresh_counter() const { return fresh_; }
  void set_fresh_counter(std::uint64_t n) { fresh_ = n; }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [hash, bucket] : buckets_)
      for (const Entry& e : bucket) f(e);
  }

  std::vector<const Entry*> entries() const {
    std::vector<const Entry*> out;
    out.reserve(size_);
    for_each([&](const Entry& e) { out.push_back(&e); });
    return out;
  }

  /// Same set of triples (bucket order is ignored).
  friend bool operator==(const Cache& a, const Cache& b) {
    if (a.size_ != b.size_) return false;
    bool same = true;
    a.for_each([&](const Entry& e) {
      if (!same) return;
      const Entry* other = b.find_exact(e.term, e.env);
      same = other != nullptr && other->result == e.result;
    });
    return same;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<Entry>> buckets_;
  std::size_t size_ = 0;
  std::uint64_t fresh_ = 0;
};

/// Set union of entries; the fresh counter is the larger of the two.
template <class L>
Cache<L> merge(Cache<L> a, const Cache<L>& b) {
  b.for_each([&](const CacheEntry<L>& e) {
    if (!a.contains(e.term, e.env)) a.insert(e);
  });
  a.set_fresh_counter(std::max(a.fresh_counter(), b.fresh_counter()));
  return a;
}

}  // namespace increty
