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

#include "omsim/evictor.hpp"

#include <algorithm>

#include "omsim/errors.hpp"

namespace omsim {

double CreditTable::record_use(ViewId view, CostUnits improvement,
                               CostUnits creation_cost) {
  double& c = credits_.at(view);
  if (c >= 0.0) c *= config_.decay;
  const double scale =
      improvement >= 0 ? config_.gain_cost_scale : config_.loss_cost_scale;
  c += static_cast<double>(improvement) +
       scale * static_cast<double>(creation_cost);
  return c;
}

std::vector<ViewId> select_victims(const DatabaseState& db, Bytes required,
                                   const EvictionScore& score) {
  if (required > db.capacity()) throw ConfigError("view exceeds capacity");
  if (required <= db.free()) return {};

  struct Ranked {
    double score;
    Bytes size;
    ViewId id;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(db.size());
  for (const auto& [id, mv] : db.entries()) {
    ranked.push_back({score(mv), mv.view.size, id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.size != b.size) return a.size > b.size;
    return a.id < b.id;
  });

  std::vector<ViewId> victims;
  Bytes free = db.free();
  for (const Ranked& r : ranked) {
    if (free >= required) break;
    victims.push_back(r.id);
    free += r.size;
  }
  return victims;
}

std::vector<MaterializedView> evict_for(Bytes required, DatabaseState& db,
                                        CreditTable& table, Step step) {
  const auto victims =
      select_victims(db, required, [&](const MaterializedView& mv) {
        return table.contains(mv.view.id) ? table.credit(mv.view.id) : 0.0;
      });
  std::vector<MaterializedView> evicted;
  for (ViewId id : victims) {
    evicted.push_back(db.evict(id, step));
    table.remove(id);
  }
  return evicted;
}

std::vector<MaterializedView> maintenance_event(RelationId relation,
                                                DatabaseState& db, Step step,
                                                CreditTable* table,
                                                ExperimentBuffer* experiments) {
  std::vector<ViewId> stale;
  for (const auto& [id, mv] : db.entries()) {
    if (mv.view.relations.contains(relation)) stale.push_back(id);
  }
  std::vector<MaterializedView> evicted;
  for (ViewId id : stale) {
    evicted.push_back(db.evict(id, step));
    if (table) table->remove(id);
  }
  // Also catches requests on views that already left for capacity reasons.
  if (experiments) experiments->flush_relation(relation);
  return evicted;
}

}  // namespace omsim
