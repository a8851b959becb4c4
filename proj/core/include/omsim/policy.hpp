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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"
#include "omsim/database.hpp"
#include "omsim/evictor.hpp"

namespace omsim {

enum class EvictionReason { kCapacity, kMaintenance };

struct StepContext {
  Step step = 0;
  const Query& query;
  const DatabaseState& db;
  const SchemaCatalog& catalog;
};

/// What a policy wants done for the current query: optionally materialize
/// one candidate in-line, after evicting `victims` (in order).
struct Decision {
  std::optional<View> create;
  std::vector<ViewId> victims;
  /// The policy chose a view that can never fit; executed as no creation.
  bool demoted = false;
  /// Random exploration rather than a greedy choice.
  bool explored = false;
};

/// Creation policy plus its eviction rule. The simulator owns the database
/// and calls the hooks in a fixed order every step:
///   decide -> (on_evicted*, on_materialized) -> on_executed -> on_idle.
/// Maintenance evictions happen before decide.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual Decision decide(const StepContext& ctx,
                          std::span<const View> candidates) = 0;

  virtual void on_materialized(const MaterializedView&, Step) {}
  virtual void on_evicted(const MaterializedView&, EvictionReason, Step) {}
  /// A base relation was updated; runs before the dependent evictions.
  virtual void on_maintenance(RelationId, Step) {}
  virtual void on_executed(const StepContext&, const Plan&) {}
  virtual void on_idle(Step, const DatabaseState&) {}
  /// Called once after the last step.
  virtual void on_finish(Step, const DatabaseState&) {}

  /// Current eviction scores by view, for the per-step credit dump.
  virtual std::map<ViewId, double> scores() const { return {}; }
};

/// Builds a creation decision for `view`, evicting by `score` when space is
/// short. Views larger than the whole capacity are demoted to no creation.
Decision creation_decision(const View& view, const DatabaseState& db,
                           const EvictionScore& score);

/// Never materializes anything.
class NullPolicy final : public Policy {
 public:
  std::string name() const override { return "null"; }
  Decision decide(const StepContext&, std::span<const View>) override {
    return {};
  }
};

}  // namespace omsim
