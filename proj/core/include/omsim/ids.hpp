// Copyright 2026 The omsim Authors.
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
#include <string>
#include <type_traits>
#include <vector>

namespace omsim {

enum class RelationId : std::int32_t {};
enum class PredicateId : std::int32_t {};
enum class ViewId : std::int32_t {};

using Rows = std::int64_t;
using Bytes = std::int64_t;
using CostUnits = std::int64_t;
using Step = std::int64_t;

template <typename Id>
constexpr auto to_underlying(Id id) noexcept {
  return static_cast<std::underlying_type_t<Id>>(id);
}

/// Small sorted set of ids with value semantics. Ordering is lexicographic
/// over the sorted ids, which gives the deterministic "sorted by id tuple"
/// ordering used throughout the simulator.
template <typename Id>
class IdSet {
 public:
  IdSet() = default;
  IdSet(std::initializer_list<Id> ids) : ids_(ids) { normalize(); }
  explicit IdSet(std::vector<Id> ids) : ids_(std::move(ids)) { normalize(); }

  bool contains(Id id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }
  bool is_subset_of(const IdSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                         ids_.end());
  }
  bool intersects(const IdSet& other) const {
    auto a = ids_.begin();
    auto b = other.ids_.begin();
    while (a != ids_.end() && b != other.ids_.end()) {
      if (*a == *b) return true;
      if (*a < *b) {
        ++a;
      } else {
        ++b;
      }
    }
    return false;
  }

  void insert(Id id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
  }
  void insert_all(const IdSet& other) {
    for (Id id : other) insert(id);
  }

  IdSet united(const IdSet& other) const {
    IdSet out;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                   other.ids_.end(), std::back_inserter(out.ids_));
    return out;
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  Id front() const { return ids_.front(); }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  const std::vector<Id>& ids() const noexcept { return ids_; }

  friend bool operator==(const IdSet&, const IdSet&) = default;
  friend auto operator<=>(const IdSet& a, const IdSet& b) {
    return a.ids_ <=> b.ids_;
  }

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<Id> ids_;
};

using PredicateSet = IdSet<PredicateId>;
using RelationSet = IdSet<RelationId>;

/// Renders a set as `1+2+5`; empty sets render as `-`.
template <typename Id>
std::string format_ids(const IdSet<Id>& set) {
  if (set.empty()) return "-";
  std::string out;
  for (Id id : set) {
    if (!out.empty()) out += '+';
    out += std::to_string(to_underlying(id));
  }
  return out;
}

}  // namespace omsim
