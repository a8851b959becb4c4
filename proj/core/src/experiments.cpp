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

#include "omsim/experiments.hpp"

#include <algorithm>

namespace omsim {

void ExperimentBuffer::enqueue(ExperimentRequest request) {
  request.available_at = request.enqueued_at + delay_;
  pending_.push_back(std::move(request));
  ++stats_.enqueued;
}

std::size_t ExperimentBuffer::flush_view(ViewId view) {
  const auto before = pending_.size();
  std::erase_if(pending_,
                [view](const ExperimentRequest& r) { return r.view == view; });
  const auto removed = before - pending_.size();
  stats_.flushed += static_cast<std::int64_t>(removed);
  return removed;
}

std::size_t ExperimentBuffer::flush_relation(RelationId relation) {
  const auto before = pending_.size();
  std::erase_if(pending_, [relation](const ExperimentRequest& r) {
    return r.view_relations.contains(relation);
  });
  const auto removed = before - pending_.size();
  stats_.flushed += static_cast<std::int64_t>(removed);
  return removed;
}

bool ExperimentBuffer::has_pending(ViewId view, std::int64_t instance) const {
  return std::any_of(pending_.begin(), pending_.end(),
                     [&](const ExperimentRequest& r) {
                       return r.view == view && r.instance == instance;
                     });
}

std::vector<CompletedExperiment> run_idle_experiments(
    Step now, ExperimentBuffer& buffer, const SchemaCatalog& catalog) {
  std::vector<CompletedExperiment> done;
  std::deque<ExperimentRequest> waiting;
  for (ExperimentRequest& r : buffer.pending_) {
    if (r.available_at > now) {
      waiting.push_back(std::move(r));
      continue;
    }
    CompletedExperiment c;
    c.counterfactual_cost = base_query_cost(r.query, catalog);
    c.improvement = c.counterfactual_cost - r.actual_cost;
    c.completed_at = now;
    c.request = std::move(r);
    done.push_back(std::move(c));
    ++buffer.stats_.completed;
  }
  buffer.pending_ = std::move(waiting);
  return done;
}

}  // namespace omsim
