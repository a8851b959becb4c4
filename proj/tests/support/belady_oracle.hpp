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

#include <optional>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"
#include "omsim/simulator.hpp"

namespace omsim::testing {

// Exhaustive schedule search for tiny instances (a handful of views, a
// handful of steps). Costs come from the reference evaluator; candidates
// are re-mined here with the same "seen before" rule the simulator uses.

/// `pairs` disjoint relation pairs, each joined by one predicate of the
/// given selectivity; every relation has `rows` rows of width 8. All views
/// are interchangeable, which turns view selection into plain paging.
SchemaCatalog pair_catalog(std::size_t pairs, Rows rows = 1000,
                           double selectivity = 1e-4);

/// One single-predicate query per entry of `sequence` (0-based pair index).
std::vector<Query> pair_stream(const std::vector<int>& sequence);

/// Minimum total cost over every creation/eviction schedule the simulator
/// could legally execute.
CostUnits exhaustive_min_cost(const std::vector<Query>& stream,
                              const SchemaCatalog& catalog, Bytes capacity,
                              std::size_t max_arity);

/// Minimum total cost when the creations are pinned to `admissions` (one
/// entry per step) and only the eviction choices are free. A pinned view
/// that an alternative schedule kept resident is simply used.
CostUnits min_cost_with_admissions(
    const std::vector<Query>& stream, const SchemaCatalog& catalog,
    const std::vector<View>& views,
    const std::vector<std::optional<ViewId>>& admissions, Bytes capacity);

/// First step after `after` at which the view makes the query strictly
/// cheaper than the base plan; stream length when none.
Step scan_next_use(const View& view, const std::vector<Query>& stream,
                   Step after, const SchemaCatalog& catalog);

/// Steps at which a capacity victim was not the resident with the
/// farthest next use.
std::vector<Step> non_farthest_evictions(const SimulationResult& result,
                                         const std::vector<Query>& stream,
                                         const SchemaCatalog& catalog,
                                         const std::vector<View>& views);

}  // namespace omsim::testing
