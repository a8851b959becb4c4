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

#include "omsim/miner.hpp"

#include <algorithm>

#include "omsim/errors.hpp"

namespace omsim {

void PredicateHistory::observe(const Query& query,
                               const SchemaCatalog& catalog) {
  for (PredicateId id : query.predicates) {
    if (seen_.contains(id)) continue;
    seen_.insert(id);
    const Predicate& p = catalog.predicate(id);
    adjacency_[p.left].insert(p.right);
    adjacency_[p.right].insert(p.left);
  }
}

std::vector<PredicateSet> candidate_predicate_sets(
    const Query& query, const PredicateHistory& history,
    const SchemaCatalog& catalog, std::size_t max_arity) {
  if (max_arity < 2) throw ConfigError("max arity must be >= 2");

  std::vector<PredicateId> usable;
  for (PredicateId id : query.predicates) {
    if (history.seen(id)) usable.push_back(id);
  }
  // A connected set over k relations in a join graph has at least k-1
  // predicates, but triangles allow more, so enumerate all subsets of the
  // usable predicates. Queries carry a handful of predicates at most.
  if (usable.size() > 20) {
    throw ConfigError("query has too many predicates to mine");
  }
  std::vector<PredicateSet> out;
  const std::uint32_t limit = 1u << usable.size();
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    std::vector<PredicateId> members;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      if (mask & (1u << i)) members.push_back(usable[i]);
    }
    PredicateSet s(std::move(members));
    if (!catalog.is_connected(s)) continue;
    const std::size_t arity = catalog.relations_of(s).size();
    if (arity < 2 || arity > max_arity) continue;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<View> candidates(const Query& query,
                             const PredicateHistory& history,
                             ViewRegistry& registry,
                             const SchemaCatalog& catalog,
                             std::size_t max_arity) {
  std::vector<View> out;
  for (const PredicateSet& s :
       candidate_predicate_sets(query, history, catalog, max_arity)) {
    out.push_back(registry.intern(s));
  }
  return out;
}

}  // namespace omsim
