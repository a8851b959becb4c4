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

#include "omsim/simulator.hpp"

#include <charconv>
#include <ostream>
#include <set>

#include "omsim/errors.hpp"
#include "omsim/miner.hpp"
#include "omsim/planner.hpp"
#include "omsim/rng.hpp"

namespace omsim {
namespace {

constexpr std::uint64_t kMaintenanceSalt = 0x61;

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename Id>
std::string format_optional(const std::optional<Id>& id) {
  return id ? std::to_string(to_underlying(*id)) : std::string("-");
}

void check_decision(const Decision& d, const DatabaseState& db, Step step) {
  std::set<ViewId> seen;
  Bytes freed = 0;
  for (ViewId v : d.victims) {
    const MaterializedView* mv = db.find(v);
    if (!mv || !seen.insert(v).second) {
      throw InvariantViolation(step, "victim is not a resident view");
    }
    freed += mv->view.size;
  }
  if (!d.create) {
    if (!d.victims.empty()) {
      throw InvariantViolation(step, "eviction without a creation");
    }
    return;
  }
  if (db.contains(d.create->id)) {
    throw InvariantViolation(step, "creating a resident view");
  }
  if (d.create->size > db.free() + freed) {
    throw InvariantViolation(step, "victims do not free enough space");
  }
}

}  // namespace

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kNone: return "none";
    case ActionKind::kCreate: return "create";
    case ActionKind::kDemoted: return "demoted";
  }
  return "?";
}

std::string_view to_string(EvictionReason reason) {
  return reason == EvictionReason::kCapacity ? "capacity" : "maintenance";
}

SimulationResult simulate(const std::vector<Query>& stream,
                          const SchemaCatalog& catalog, ViewRegistry& registry,
                          Policy& policy, const SimulationOptions& options) {
  DatabaseState db(options.capacity);
  PredicateHistory history;
  Rng maintenance_rng(derive_seed(options.maintenance_seed, kMaintenanceSalt));
  SimulationResult result;
  result.events.reserve(stream.size());

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Step t = static_cast<Step>(i);
    const Query& q = stream[i];
    EventRecord ev;
    ev.step = t;
    ev.query_id = q.id;
    ev.template_id = q.template_id;
    ev.predicates = q.predicates;
    ev.selectivity = q.selection_selectivity;

    if (options.maintenance_every > 0 && t > 0 &&
        t % options.maintenance_every == 0) {
      const auto& rels = catalog.relations();
      const RelationId rel = rels[maintenance_rng.below(rels.size())].id;
      ev.maintenance = rel;
      policy.on_maintenance(rel, t);
      std::vector<ViewId> stale;
      for (const auto& [id, mv] : db.entries()) {
        if (mv.view.relations.contains(rel)) stale.push_back(id);
      }
      for (ViewId id : stale) {
        const MaterializedView gone = db.evict(id, t);
        ev.evicted.push_back({id, gone.instance, EvictionReason::kMaintenance});
        ++result.maintenance_evictions;
        policy.on_evicted(gone, EvictionReason::kMaintenance, t);
      }
    }

    std::vector<View> cands;
    for (View& v : candidates(q, history, registry, catalog, options.max_arity)) {
      if (!db.contains(v.id)) cands.push_back(std::move(v));
    }
    history.observe(q, catalog);
    ev.candidate_count = cands.size();

    const StepContext ctx{t, q, db, catalog};
    Decision d = policy.decide(ctx, cands);
    ev.explored = d.explored;
    if (d.explored) ++result.explorations;
    if (d.create && d.create->size > db.capacity()) {
      d.create.reset();
      d.victims.clear();
      d.demoted = true;
    }
    check_decision(d, db, t);

    Plan plan;
    if (d.create) {
      for (ViewId v : d.victims) {
        const MaterializedView gone = db.evict(v, t);
        ev.evicted.push_back({v, gone.instance, EvictionReason::kCapacity});
        ++result.capacity_evictions;
        policy.on_evicted(gone, EvictionReason::kCapacity, t);
      }
      const MaterializedView& mv = db.materialize(*d.create, t);
      ev.action = ActionKind::kCreate;
      ev.created = mv.view.id;
      ev.created_instance = mv.instance;
      ++result.creations;
      policy.on_materialized(mv, t);
      plan = plan_with_creation(q, mv.view, catalog);
    } else {
      if (d.demoted) {
        ev.action = ActionKind::kDemoted;
        ++result.demotions;
      }
      plan = best_plan(q, db.views(), catalog);
    }

    if (db.used() > db.capacity()) {
      throw InvariantViolation(t, "storage exceeds capacity");
    }
    ev.used = plan.view_used;
    if (plan.view_used) ++result.uses;
    ev.cost = plan.total_cost;
    ev.creation_component = plan.creation_component;
    ev.storage_used = db.used();
    result.cumulative_cost += plan.total_cost;

    policy.on_executed(ctx, plan);
    policy.on_idle(t, db);

    if (options.record_credits) {
      for (const auto& [id, s] : policy.scores()) {
        result.credits.push_back({t, id, s});
      }
    }
    result.events.push_back(std::move(ev));
  }
  policy.on_finish(static_cast<Step>(stream.size()), db);
  result.final_views = db.views();
  return result;
}

void write_events_csv(std::ostream& out,
                      const std::vector<EventRecord>& events) {
  out << "step,query,template,predicates,selectivity,maintenance,candidates,"
         "action,view,instance,explored,evicted,used,cost,creation_cost,"
         "storage\n";
  for (const EventRecord& e : events) {
    std::string evicted;
    for (const EvictionNote& n : e.evicted) {
      if (!evicted.empty()) evicted += ' ';
      evicted += std::to_string(to_underlying(n.view)) + '#' +
                 std::to_string(n.instance) + ':' +
                 std::string(to_string(n.reason));
    }
    if (evicted.empty()) evicted = "-";
    out << e.step << ',' << e.query_id << ',' << e.template_id << ','
        << format_ids(e.predicates) << ',' << format_double(e.selectivity)
        << ',' << format_optional(e.maintenance) << ',' << e.candidate_count
        << ',' << to_string(e.action) << ',' << format_optional(e.created)
        << ',' << e.created_instance << ',' << (e.explored ? 1 : 0) << ','
        << evicted << ',' << format_optional(e.used) << ',' << e.cost << ','
        << e.creation_component << ',' << e.storage_used << '\n';
  }
}

void write_credits_csv(std::ostream& out,
                       const std::vector<CreditSample>& credits) {
  out << "step,view,score\n";
  for (const CreditSample& c : credits) {
    out << c.step << ',' << to_underlying(c.view) << ','
        << format_double(c.score) << '\n';
  }
}

}  // namespace omsim
