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

#include <span>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"

namespace omsim {

/// A view may answer part of a query iff its predicates are a subset of
/// the query's predicates.
bool eligible(const View& view, const Query& query);

/// Cheapest plan using at most one of `views`. The no-view plan is always
/// a contender; ties go to the no-view plan, then to the lowest view id.
Plan best_plan(const Query& query, std::span<const View> views,
               const SchemaCatalog& catalog);

/// Plan that materializes `view` in-line and answers the query from it:
/// total = creation_cost(view) + cost with the view as a leaf. Throws
/// ConfigError if the view is not eligible.
Plan plan_with_creation(const Query& query, const View& view,
                        const SchemaCatalog& catalog);

}  // namespace omsim
