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

#include "omsim/database.hpp"

#include "omsim/errors.hpp"

namespace omsim {

DatabaseState::DatabaseState(Bytes capacity) : capacity_(capacity) {
  if (capacity <= 0) throw ConfigError("capacity must be > 0");
}

const MaterializedView* DatabaseState::find(ViewId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

bool DatabaseState::holds_instance(ViewId id, std::int64_t instance) const {
  const MaterializedView* mv = find(id);
  return mv != nullptr && mv->instance == instance;
}

const MaterializedView& DatabaseState::materialize(const View& view,
                                                   Step step) {
  if (contains(view.id)) {
    throw InvariantViolation(step, "view " +
                                       std::to_string(to_underlying(view.id)) +
                                       " is already materialized");
  }
  if (view.size > free()) {
    throw InvariantViolation(
        step, "materializing view " + std::to_string(to_underlying(view.id)) +
                  " (" + std::to_string(view.size) + " bytes) exceeds capacity");
  }
  used_ += view.size;
  auto [it, inserted] =
      entries_.emplace(view.id, MaterializedView{view, step, next_instance_++});
  return it->second;
}

MaterializedView DatabaseState::evict(ViewId id, Step step) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw InvariantViolation(step, "evicting view " +
                                       std::to_string(to_underlying(id)) +
                                       " which is not materialized");
  }
  MaterializedView out = std::move(it->second);
  entries_.erase(it);
  used_ -= out.view.size;
  return out;
}

std::vector<View> DatabaseState::views() const {
  std::vector<View> out;
  out.reserve(entries_.size());
  for (const auto& [id, mv] : entries_) out.push_back(mv.view);
  return out;
}

}  // namespace omsim
