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

#include "log_verifier.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "reference_cost.hpp"

namespace omsim::testing {
namespace {

struct Problems {
  std::vector<std::string> lines;
  void add(Step step, const std::string& what) {
    std::ostringstream os;
    os << "step " << step << ": " << what;
    lines.push_back(os.str());
  }
};

bool eligible_for(const View& v, const Query& q) {
  return v.predicates.is_subset_of(q.predicates);
}

}  // namespace

const View& view_at(const std::vector<View>& views, ViewId id) {
  return views.at(static_cast<std::size_t>(to_underlying(id)));
}

std::vector<View> snapshot(const ViewRegistry& registry) {
  return {registry.all().begin(), registry.all().end()};
}

std::vector<std::string> verify_log(const SimulationResult& result,
                                    const std::vector<Query>& stream,
                                    const SchemaCatalog& catalog,
                                    const std::vector<View>& views,
                                    Bytes capacity) {
  Problems bad;
  if (result.events.size() != stream.size()) {
    bad.add(-1, "event count differs from stream length");
    return bad.lines;
  }
  std::map<ViewId, Bytes> resident;
  Bytes used = 0;
  CostUnits total = 0;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const EventRecord& e = result.events[i];
    const Query& q = stream[i];
    const Step t = static_cast<Step>(i);
    if (e.step != t || e.query_id != q.id || e.predicates != q.predicates) {
      bad.add(t, "event does not match the query");
      continue;
    }

    for (const EvictionNote& n : e.evicted) {
      auto it = resident.find(n.view);
      if (it == resident.end()) {
        bad.add(t, "evicted a view that is not resident");
        continue;
      }
      used -= it->second;
      resident.erase(it);
    }
    if (e.maintenance) {
      for (const auto& [id, size] : resident) {
        if (view_at(views, id).relations.contains(*e.maintenance)) {
          bad.add(t, "view over the maintained relation survived");
        }
      }
    }
    for (const EvictionNote& n : e.evicted) {
      const bool over = e.maintenance &&
                        view_at(views, n.view).relations.contains(*e.maintenance);
      if ((n.reason == EvictionReason::kMaintenance) != over) {
        bad.add(t, "eviction reason does not match the maintenance event");
      }
    }

    std::optional<CostUnits> expected;
    if (e.action == ActionKind::kCreate) {
      if (!e.created) {
        bad.add(t, "creation without a view id");
        continue;
      }
      const View& v = view_at(views, *e.created);
      if (resident.count(v.id)) bad.add(t, "created a resident view");
      if (!eligible_for(v, q)) bad.add(t, "created an ineligible view");
      resident[v.id] = v.size;
      used += v.size;
      const CostUnits make = reference_creation_cost(v, catalog);
      if (e.creation_component != make) bad.add(t, "creation cost mismatch");
      if (e.used != e.created) bad.add(t, "created view not used");
      expected = make + reference_cost(q, v, catalog);
    } else {
      if (e.creation_component != 0) bad.add(t, "creation cost without one");
      CostUnits best = reference_cost(q, std::nullopt, catalog);
      for (const auto& [id, size] : resident) {
        const View& v = view_at(views, id);
        if (eligible_for(v, q)) best = std::min(best, reference_cost(q, v, catalog));
      }
      if (e.used) {
        if (!resident.count(*e.used)) {
          bad.add(t, "plan used a view that is not resident");
          continue;
        }
        expected = reference_cost(q, view_at(views, *e.used), catalog);
      } else {
        expected = reference_cost(q, std::nullopt, catalog);
      }
      if (*expected != best) bad.add(t, "plan is not the cheapest available");
    }
    if (e.cost != *expected) {
      std::ostringstream os;
      os << "cost " << e.cost << " but reference says " << *expected;
      bad.add(t, os.str());
    }
    if (used > capacity) bad.add(t, "storage exceeds capacity");
    if (e.storage_used != used) bad.add(t, "storage column mismatch");
    total += e.cost;
  }
  if (total != result.cumulative_cost) {
    bad.add(-1, "cumulative cost is not the sum of step costs");
  }
  return bad.lines;
}

std::vector<CommitRecord> stale_commits(const std::vector<CommitRecord>& commits,
                                        const std::vector<EventRecord>& events,
                                        const std::vector<View>& views) {
  std::vector<std::pair<Step, RelationId>> updates;
  for (const EventRecord& e : events) {
    if (e.maintenance) updates.emplace_back(e.step, *e.maintenance);
  }
  std::vector<CommitRecord> out;
  for (const CommitRecord& c : commits) {
    const View& v = view_at(views, c.view);
    for (const auto& [step, rel] : updates) {
      // The update happens before the query at `step` runs, so a use at
      // that step already sees the new data.
      if (step > c.enqueued_at && step <= c.committed_at &&
          v.relations.contains(rel)) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

}  // namespace omsim::testing
