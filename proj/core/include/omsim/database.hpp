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

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "omsim/cost_model.hpp"

namespace omsim {

struct MaterializedView {
  View view;
  Step created_at = 0;
  /// Unique per materialization; a re-created view gets a fresh instance,
  /// which is how stale experiments are told apart from live ones.
  std::int64_t instance = 0;
};

/// Currently materialized views under a hard byte capacity.
class DatabaseState {
 public:
  explicit DatabaseState(Bytes capacity);

  Bytes capacity() const noexcept { return capacity_; }
  Bytes used() const noexcept { return used_; }
  Bytes free() const noexcept { return capacity_ - used_; }

  bool contains(ViewId id) const { return entries_.count(id) != 0; }
  const MaterializedView* find(ViewId id) const;
  bool holds_instance(ViewId id, std::int64_t instance) const;

  /// Throws InvariantViolation if the view is already present or does not
  /// fit in the free space.
  const MaterializedView& materialize(const View& view, Step step);
  /// Throws InvariantViolation if the view is not present.
  MaterializedView evict(ViewId id, Step step);

  /// Alive views, ascending id.
  std::vector<View> views() const;
  const std::map<ViewId, MaterializedView>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  Bytes capacity_;
  Bytes used_ = 0;
  std::int64_t next_instance_ = 1;
  std::map<ViewId, MaterializedView> entries_;
};

}  // namespace omsim
