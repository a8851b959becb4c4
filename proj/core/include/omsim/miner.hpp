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
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"

namespace omsim {

/// Join predicates seen so far in the workload and the relation graph they
/// induce. Candidates are only ever drawn from predicates in here.
class PredicateHistory {
 public:
  void observe(const Query& query, const SchemaCatalog& catalog);

  bool seen(PredicateId id) const { return seen_.contains(id); }
  const PredicateSet& seen_predicates() const noexcept { return seen_; }
  /// Neighbours of a relation through seen predicates.
  const std::map<RelationId, RelationSet>& join_graph() const noexcept {
    return adjacency_;
  }

 private:
  PredicateSet seen_;
  std::map<RelationId, RelationSet> adjacency_;
};

/// Every connected subset S of the query's predicates whose members were
/// all seen before, spanning 2..max_arity relations. Sorted by predicate-id
/// tuple. The driver calls this before observe() for the same query, so a
/// predicate's first appearance yields no candidate. Throws ConfigError if
/// max_arity < 2.
std::vector<PredicateSet> candidate_predicate_sets(
    const Query& query, const PredicateHistory& history,
    const SchemaCatalog& catalog, std::size_t max_arity);

/// candidate_predicate_sets, interned as views.
std::vector<View> candidates(const Query& query,
                             const PredicateHistory& history,
                             ViewRegistry& registry,
                             const SchemaCatalog& catalog,
                             std::size_t max_arity = 4);

}  // namespace omsim
