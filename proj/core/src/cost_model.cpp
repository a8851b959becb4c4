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

#include "omsim/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "omsim/errors.hpp"
#include "omsim/rng.hpp"

namespace omsim {
namespace {

constexpr double kMaxRows = 1e15;

bool shares_predicate(const RelationSet& joined, const RelationSet& next,
                      const PredicateSet& available,
                      const SchemaCatalog& catalog) {
  for (PredicateId id : available) {
    const Predicate& p = catalog.predicate(id);
    if ((joined.contains(p.left) && next.contains(p.right)) ||
        (joined.contains(p.right) && next.contains(p.left))) {
      return true;
    }
  }
  return false;
}

}  // namespace

Rows ceil_rows(double rows) {
  // Products such as 20000 * 0.01 land a few ulps above the integer they
  // denote; shave a relative epsilon so they do not round up past it.
  const double shaved = rows * (1.0 - 1e-12);
  const double up = std::ceil(shaved);
  return static_cast<Rows>(std::clamp(up, 1.0, kMaxRows));
}

Rows induced_cardinality(const RelationSet& relations,
                         const PredicateSet& available,
                         const SchemaCatalog& catalog) {
  double rows = 1.0;
  for (RelationId id : relations) {
    rows *= static_cast<double>(catalog.relation(id).cardinality);
  }
  for (PredicateId id : available) {
    const Predicate& p = catalog.predicate(id);
    if (relations.contains(p.left) && relations.contains(p.right)) {
      rows *= p.selectivity;
    }
  }
  return ceil_rows(rows);
}

Rows join_cardinality(const PredicateSet& predicates,
                      const SchemaCatalog& catalog) {
  if (!catalog.is_connected(predicates)) {
    throw ConfigError("disconnected view");
  }
  return induced_cardinality(catalog.relations_of(predicates), predicates,
                             catalog);
}

RelationSet query_relations(const Query& query, const SchemaCatalog& catalog) {
  if (query.predicates.empty()) {
    if (!query.single_relation) {
      throw ConfigError("query " + std::to_string(query.id) +
                        " has neither predicates nor a relation");
    }
    return RelationSet{*query.single_relation};
  }
  return catalog.relations_of(query.predicates);
}

CostUnits query_cost(const Query& query, std::span<const Leaf> leaves,
                     const SchemaCatalog& catalog) {
  const RelationSet wanted = query_relations(query, catalog);
  if (leaves.empty()) throw ConfigError("query_cost: no leaves");

  RelationSet covered;
  for (const Leaf& leaf : leaves) {
    if (leaf.relations.empty() || covered.intersects(leaf.relations)) {
      throw ConfigError("query_cost: leaves overlap or are empty");
    }
    covered.insert_all(leaf.relations);
  }
  if (covered != wanted) {
    throw ConfigError("query_cost: leaves do not cover query relations");
  }

  // Canonical order: multi-relation (view) leaves first, then base
  // relations; ascending by smallest member id within each group.
  std::vector<const Leaf*> order;
  order.reserve(leaves.size());
  for (const Leaf& leaf : leaves) order.push_back(&leaf);
  std::stable_sort(order.begin(), order.end(),
                   [](const Leaf* a, const Leaf* b) {
                     const bool a_view = a->relations.size() > 1;
                     const bool b_view = b->relations.size() > 1;
                     if (a_view != b_view) return a_view;
                     return a->relations.front() < b->relations.front();
                   });

  const Leaf* first = order.front();
  order.erase(order.begin());
  RelationSet joined = first->relations;
  Rows current = first->cardinality;
  CostUnits cost = 0;
  if (order.empty()) cost = current;

  while (!order.empty()) {
    auto next = std::find_if(order.begin(), order.end(), [&](const Leaf* l) {
      return shares_predicate(joined, l->relations, query.predicates, catalog);
    });
    if (next == order.end()) next = order.begin();  // cross product
    const Leaf* right = *next;
    order.erase(next);
    joined.insert_all(right->relations);
    const Rows output =
        induced_cardinality(joined, query.predicates, catalog);
    cost += current + right->cardinality + output;
    current = output;
  }

  if (query.selection_selectivity < 1.0) {
    cost += ceil_rows(static_cast<double>(current) *
                      query.selection_selectivity);
  }
  return cost;
}

CostUnits base_query_cost(const Query& query, const SchemaCatalog& catalog) {
  std::vector<Leaf> leaves;
  for (RelationId id : query_relations(query, catalog)) {
    leaves.push_back({RelationSet{id}, catalog.relation(id).cardinality});
  }
  return query_cost(query, leaves, catalog);
}

CostUnits query_cost_with_view(const Query& query, const View& view,
                               const SchemaCatalog& catalog) {
  std::vector<Leaf> leaves{{view.relations, view.cardinality}};
  for (RelationId id : query_relations(query, catalog)) {
    if (!view.relations.contains(id)) {
      leaves.push_back({RelationSet{id}, catalog.relation(id).cardinality});
    }
  }
  return query_cost(query, leaves, catalog);
}

CostUnits creation_cost(const PredicateSet& view_predicates,
                        const SchemaCatalog& catalog) {
  Query as_query;
  as_query.predicates = view_predicates;
  return base_query_cost(as_query, catalog);
}

double estimation_factor(const PredicateSet& view_predicates,
                         std::uint64_t noise_seed, double noise_factor) {
  if (!(noise_factor >= 1.0)) {
    throw ConfigError("noise factor must be >= 1");
  }
  if (noise_factor == 1.0) return 1.0;
  std::uint64_t key = splitmix64(noise_seed);
  for (PredicateId id : view_predicates) {
    key = splitmix64(key ^ static_cast<std::uint64_t>(to_underlying(id)));
  }
  const double u = bits_to_unit(key);
  const double lo = 1.0 / noise_factor;
  return lo + u * (noise_factor - lo);
}

double estimated_cost(const View& view, const SchemaCatalog& catalog,
                      std::uint64_t noise_seed, double noise_factor) {
  const double factor =
      estimation_factor(view.predicates, noise_seed, noise_factor);
  return static_cast<double>(creation_cost(view.predicates, catalog)) * factor;
}

View make_view(ViewId id, const PredicateSet& predicates,
               const SchemaCatalog& catalog) {
  View v;
  v.id = id;
  v.predicates = predicates;
  v.relations = catalog.relations_of(predicates);
  if (v.relations.size() < 2) {
    throw ConfigError("a view must join at least two relations");
  }
  v.cardinality = join_cardinality(predicates, catalog);
  Bytes width = 0;
  for (RelationId r : v.relations) width += catalog.relation(r).row_width;
  v.size = v.cardinality * width;
  v.creation_cost = creation_cost(predicates, catalog);
  return v;
}

const View& ViewRegistry::intern(const PredicateSet& predicates) {
  if (auto it = by_predicates_.find(predicates); it != by_predicates_.end()) {
    return views_[static_cast<std::size_t>(to_underlying(it->second))];
  }
  const ViewId id{static_cast<std::int32_t>(views_.size())};
  views_.push_back(make_view(id, predicates, *catalog_));
  by_predicates_.emplace(predicates, id);
  return views_.back();
}

const View& ViewRegistry::get(ViewId id) const {
  const auto index = static_cast<std::size_t>(to_underlying(id));
  if (index >= views_.size()) {
    throw ConfigError("unknown view " + std::to_string(to_underlying(id)));
  }
  return views_[index];
}

std::optional<ViewId> ViewRegistry::find(const PredicateSet& predicates) const {
  if (auto it = by_predicates_.find(predicates); it != by_predicates_.end()) {
    return it->second;
  }
  return std::nullopt;
}

}  // namespace omsim
