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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"
#include "omsim/database.hpp"
#include "omsim/policy.hpp"

namespace omsim {

struct EvictionNote {
  ViewId view{};
  std::int64_t instance = 0;
  EvictionReason reason = EvictionReason::kCapacity;
};

enum class ActionKind { kNone, kCreate, kDemoted };

/// One line of the event log.
struct EventRecord {
  Step step = 0;
  std::int64_t query_id = 0;
  std::int32_t template_id = -1;
  PredicateSet predicates;
  double selectivity = 1.0;
  std::optional<RelationId> maintenance;
  std::size_t candidate_count = 0;
  ActionKind action = ActionKind::kNone;
  std::optional<ViewId> created;
  std::int64_t created_instance = 0;
  bool explored = false;
  std::vector<EvictionNote> evicted;
  std::optional<ViewId> used;
  CostUnits cost = 0;
  CostUnits creation_component = 0;
  Bytes storage_used = 0;
};

struct CreditSample {
  Step step = 0;
  ViewId view{};
  double score = 0.0;
};

struct SimulationOptions {
  Bytes capacity = 0;
  /// Every this many queries a random base relation is updated; 0 = never.
  Step maintenance_every = 0;
  std::uint64_t maintenance_seed = 0;
  std::size_t max_arity = 4;
  bool record_credits = false;
};

struct SimulationResult {
  std::vector<EventRecord> events;
  CostUnits cumulative_cost = 0;
  std::int64_t creations = 0;
  std::int64_t capacity_evictions = 0;
  std::int64_t maintenance_evictions = 0;
  std::int64_t uses = 0;
  std::int64_t demotions = 0;
  std::int64_t explorations = 0;
  std::vector<CreditSample> credits;
  std::vector<View> final_views;
};

/// Runs one policy over a query stream. Per step:
///   1. maintenance event (t > 0, t % maintenance_every == 0);
///   2. mine candidates not already materialized, then observe the query;
///   3. policy decision; oversized choices are demoted to no creation;
///   4. evict victims, materialize, and plan with the new view, or take the
///      best plan over the residents;
///   5. check the storage bound, then the executed and idle hooks.
/// Throws InvariantViolation if a decision is inconsistent with the state
/// or the storage bound is broken.
SimulationResult simulate(const std::vector<Query>& stream,
                          const SchemaCatalog& catalog, ViewRegistry& registry,
                          Policy& policy, const SimulationOptions& options);

std::string_view to_string(ActionKind kind);
std::string_view to_string(EvictionReason reason);

/// CSV with a header row; one line per event.
void write_events_csv(std::ostream& out, const std::vector<EventRecord>& events);
void write_credits_csv(std::ostream& out,
                       const std::vector<CreditSample>& credits);

}  // namespace omsim
