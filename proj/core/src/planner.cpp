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

#include "omsim/planner.hpp"

#include "omsim/errors.hpp"

namespace omsim {

bool eligible(const View& view, const Query& query) {
  return !view.predicates.empty() &&
         view.predicates.is_subset_of(query.predicates);
}

Plan best_plan(const Query& query, std::span<const View> views,
               const SchemaCatalog& catalog) {
  Plan best;
  best.query_id = query.id;
  best.total_cost = base_query_cost(query, catalog);
  for (const View& v : views) {
    if (!eligible(v, query)) continue;
    const CostUnits cost = query_cost_with_view(query, v, catalog);
    const bool better = cost < best.total_cost ||
                        (cost == best.total_cost && best.view_used &&
                         v.id < *best.view_used);
    if (better) {
      best.total_cost = cost;
      best.view_used = v.id;
    }
  }
  return best;
}

Plan plan_with_creation(const Query& query, const View& view,
                        const SchemaCatalog& catalog) {
  if (!eligible(view, query)) {
    throw ConfigError("view " + std::to_string(to_underlying(view.id)) +
                      " is not eligible for query " + std::to_string(query.id));
  }
  Plan plan;
  plan.query_id = query.id;
  plan.view_used = view.id;
  plan.creation_component = view.creation_cost;
  plan.total_cost =
      view.creation_cost + query_cost_with_view(query, view, catalog);
  return plan;
}

}  // namespace omsim
