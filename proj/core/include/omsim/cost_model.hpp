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
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/ids.hpp"

namespace omsim {

// Simulated execution engine. Costs are "rows touched": every join step
// of a canonical left-deep plan costs left-rows + right-rows + output-rows.
// The model is a deterministic stand-in for a real engine's wall clock;
// it is stateless, so a query costs the same against any database state
// that offers it the same leaves.

struct Query {
  std::int64_t id = 0;
  PredicateSet predicates;
  /// Residual single-attribute filter. 1.0 means no filter.
  double selection_selectivity = 1.0;
  Step arrival_step = 0;
  std::int32_t template_id = -1;
  /// Only used for single-table queries, which carry no predicates.
  std::optional<RelationId> single_relation;
};

struct View {
  ViewId id{};
  PredicateSet predicates;
  RelationSet relations;
  Rows cardinality = 0;
  Bytes size = 0;
  CostUnits creation_cost = 0;

  friend bool operator==(const View& a, const View& b) {
    return a.id == b.id && a.predicates == b.predicates;
  }
};

/// Input to one join step: either a base relation or a materialized view.
struct Leaf {
  RelationSet relations;
  Rows cardinality = 0;
};

struct Plan {
  std::int64_t query_id = 0;
  std::optional<ViewId> view_used;
  CostUnits total_cost = 0;
  /// Cost of materializing a view in-line; 0 for plain plans.
  CostUnits creation_component = 0;

  CostUnits query_component() const { return total_cost - creation_component; }
};

Rows ceil_rows(double rows);

/// ceil(product of member cardinalities x product of selectivities), at
/// least 1. Throws ConfigError("disconnected view") unless the predicates
/// form one connected join graph.
Rows join_cardinality(const PredicateSet& predicates,
                      const SchemaCatalog& catalog);

/// Cardinality of a set of relations joined on every predicate of
/// `available` whose endpoints both lie in the set. A single relation
/// yields its base cardinality. No connectivity requirement.
Rows induced_cardinality(const RelationSet& relations,
                         const PredicateSet& available,
                         const SchemaCatalog& catalog);

RelationSet query_relations(const Query& query, const SchemaCatalog& catalog);

/// Executes `query` over `leaves` under the canonical left-deep order:
/// view leaves first, then base relations in ascending id; at each step
/// the first leaf in that order that shares a predicate with the joined
/// prefix is taken next. A single leaf is a scan costing its rows. A
/// residual filter (selectivity < 1) adds ceil(output x selectivity).
/// Throws ConfigError when the leaves do not partition the query's
/// relations.
CostUnits query_cost(const Query& query, std::span<const Leaf> leaves,
                     const SchemaCatalog& catalog);

/// Base relations only.
CostUnits base_query_cost(const Query& query, const SchemaCatalog& catalog);

/// The view as a leaf plus every other query relation as base leaves.
/// The view must cover a subset of the query's relations.
CostUnits query_cost_with_view(const Query& query, const View& view,
                               const SchemaCatalog& catalog);

/// Cost of computing the view from base tables.
CostUnits creation_cost(const PredicateSet& view_predicates,
                        const SchemaCatalog& catalog);

/// Creation cost perturbed by a deterministic multiplicative factor drawn
/// uniformly from [1/noise_factor, noise_factor], keyed on the view's
/// predicates and the seed. Stands in for an optimizer's estimate.
/// Throws ConfigError if noise_factor < 1.
double estimated_cost(const View& view, const SchemaCatalog& catalog,
                      std::uint64_t noise_seed, double noise_factor);

/// The multiplicative factor estimated_cost applies; exposed so other
/// estimators (benefit estimates) can share the same per-view error.
double estimation_factor(const PredicateSet& view_predicates,
                         std::uint64_t noise_seed, double noise_factor);

/// Builds a View with derived relations, cardinality, size and creation
/// cost. Throws on disconnected or single-relation predicate sets.
View make_view(ViewId id, const PredicateSet& predicates,
               const SchemaCatalog& catalog);

/// Interns views by predicate set so a given join always carries the same
/// id within a run. Ids are handed out in first-request order.
class ViewRegistry {
 public:
  explicit ViewRegistry(const SchemaCatalog& catalog) : catalog_(&catalog) {}

  const View& intern(const PredicateSet& predicates);
  const View& get(ViewId id) const;
  std::optional<ViewId> find(const PredicateSet& predicates) const;
  std::size_t size() const noexcept { return views_.size(); }
  const std::deque<View>& all() const noexcept { return views_; }

 private:
  const SchemaCatalog* catalog_;
  std::deque<View> views_;
  std::map<PredicateSet, ViewId> by_predicates_;
};

}  // namespace omsim
