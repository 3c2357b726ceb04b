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
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "increty/symbol.hpp"

namespace increty {

/// Finite map from variables to bindings of type `T`, stored flat and sorted
/// by symbol id. Values are immutable in use: extension returns a new map.
template <class T>
class Env {
 public:
  using value_type = std::pair<Symbol, T>;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  Env() = default;
  Env(std::initializer_list<value_type> init) {
    for (const auto& [name, value] : init) insert_or_assign(name, value);
  }

  /// Null when `name` is unbound.
  const T* find(Symbol name) const {
    auto it = lower(name);
    if (it == items_.end() || it->first != name) return nullptr;
    return &it->second;
  }
  bool contains(Symbol name) const { return find(name) != nullptr; }

  Env bind(Symbol name, T value) const& {
    Env out = *this;
    out.insert_or_assign(name, std::move(value));
    return out;
  }
  Env bind(Symbol name, T value) && {
    insert_or_assign(name, std::move(value));
    return std::move(*this);
  }

  void insert_or_assign(Symbol name, T value) {
    auto it = lower(name);
    if (it != items_.end() && it->first == name) {
      items_[static_cast<std::size_t>(it - items_.begin())].second = std::move(value);
    } else {
      items_.insert(items_.begin() + (it - items_.begin()), value_type{name, std::move(value)});
    }
  }

  /// True iff every name in `vars` is bound.
  bool covers(std::span<const Symbol> vars) const {
    return std::all_of(vars.begin(), vars.end(), [&](Symbol v) { return contains(v); });
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }

  /// Bindings ordered by variable spelling, for printing.
  std::vector<value_type> sorted_by_name() const {
    std::vector<value_type> out(items_.begin(), items_.end());
    std::sort(out.begin(), out.end(),
              [](const value_type& a, const value_type& b) { return a.first.name() < b.first.name(); });
    return out;
  }

  friend bool operator==(const Env&, const Env&) = default;

  /// True iff both environments bind every name in `vars` (sorted by id)
  /// and `same` holds for each pair of bindings.
  template <class Same>
  bool agrees_on(const Env& other, std::span<const Symbol> vars, Same&& same) const {
    auto a = items_.begin();
    auto b = other.items_.begin();
    for (Symbol v : vars) {
      a = lower_from(a, v);
      b = other.lower_from(b, v);
      if (a == items_.end() || b == other.items_.end() || a->first != v || b->first != v) return false;
      if (!same(a->second, b->second)) return false;
    }
    return true;
  }

  template <class U>
  friend Env<U> restrict(const Env<U>& env, std::span<const Symbol> vars);

  template <class F>
  Env map(F&& f) const {
    Env out;
    out.items_.reserve(items_.size());
    for (const auto& [name, value] : items_) out.items_.emplace_back(name, f(value));
    return out;
  }

 private:
  /// First binding at or after `from` whose name is not below `name`; a
  /// short linear probe before falling back to binary search.
  const_iterator lower_from(const_iterator from, Symbol name) const {
    for (int probe = 0; probe < 4; ++probe, ++from)
      if (from == items_.end() || !(from->first < name)) return from;
    return std::lower_bound(from, items_.end(), name, [](const value_type& a, Symbol b) { return a.first < b; });
  }

  const_iterator lower(Symbol name) const {
    return std::lower_bound(items_.begin(), items_.end(), name,
                            [](const value_type& a, Symbol b) { return a.first < b; });
  }

  std::vector<value_type> items_;
};

/// Γ restricted to the names in `vars`.
/// `vars` must be sorted by symbol id (as free-variable sets are).
template <class T>
Env<T> restrict(const Env<T>& env, std::span<const Symbol> vars) {
  Env<T> out;
  out.items_.reserve(std::min(vars.size(), env.size()));
  auto from = env.items_.begin();
  for (Symbol v : vars) {
    from = env.lower_from(from, v);
    if (from == env.items_.end()) break;
    if (from->first == v) out.items_.push_back(*from);
  }
  return out;
}

/// An environment that is either borrowed from the caller or owned. Lets a
/// child environment alias its parent when nothing is added.
template <class T>
class EnvRef {
 public:
  EnvRef(const Env<T>& borrowed) : borrowed_(&borrowed) {}  // NOLINT(google-explicit-constructor)
  EnvRef(Env<T>&& owned) : owned_(std::move(owned)) {}      // NOLINT(google-explicit-constructor)

  const Env<T>& get() const { return owned_ ? *owned_ : *borrowed_; }
  const Env<T>& operator*() const { return get(); }
  const Env<T>* operator->() const { return &get(); }
  operator const Env<T>&() const { return get(); }  // NOLINT(google-explicit-constructor)

 private:
  const Env<T>* borrowed_ = nullptr;
  std::optional<Env<T>> owned_;
};

}  // namespace increty
