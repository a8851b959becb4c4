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

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"

namespace omsim::testing {

// Second, deliberately naive evaluator of the rows-touched model. It works
// from the definitions alone (long double products, an explicit ordering
// loop) and shares no code with the library's evaluator.

/// ceil(prod |R| * prod sel) over the predicates fully inside `relations`,
/// at least 1. Values within 1e-9 relative of an integer count as it.
Rows reference_cardinality(const RelationSet& relations,
                           const PredicateSet& predicates,
                           const SchemaCatalog& catalog);

/// Cost of the query with an optional view leaf replacing its relations.
CostUnits reference_cost(const Query& query, const std::optional<View>& view,
                         const SchemaCatalog& catalog);

/// Cost of computing the view from base tables.
CostUnits reference_creation_cost(const View& view,
                                  const SchemaCatalog& catalog);

}  // namespace omsim::testing
