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
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"
#include "omsim/database.hpp"
#include "omsim/features.hpp"

namespace omsim {

/// A paired counterfactual run queued for idle time: the query was answered
/// with `view`; the experiment re-answers it without any view.
struct ExperimentRequest {
  Query query;
  ViewId view{};
  std::int64_t instance = 0;
  RelationSet view_relations;
  CostUnits creation_cost = 0;
  /// Observed Query(q, v), excluding any in-line creation cost.
  CostUnits actual_cost = 0;
  Step enqueued_at = 0;
  Step available_at = 0;
  /// Rollout bookkeeping for the learner: state at use time, the view's
  /// action bits, and the actions the policy could take from that state.
  HalfVector state;
  HalfVector action;
  std::vector<HalfVector> next_actions;
};

struct CompletedExperiment {
  ExperimentRequest request;
  CostUnits counterfactual_cost = 0;
  /// Positive when the view helped: cost without minus cost with.
  CostUnits improvement = 0;
  Step completed_at = 0;
};

struct ExperimentStats {
  std::int64_t enqueued = 0;
  std::int64_t completed = 0;
  std::int64_t flushed = 0;
};

class ExperimentBuffer {
 public:
  explicit ExperimentBuffer(Step delay = 0) : delay_(delay) {}

  /// available_at := enqueued_at + delay.
  void enqueue(ExperimentRequest request);
  /// Drops every pending experiment on the view. Returns how many.
  std::size_t flush_view(ViewId view);
  /// Drops every pending experiment on a view over `relation`, resident or
  /// not: an update makes the paired result stale.
  std::size_t flush_relation(RelationId relation);
  bool has_pending(ViewId view, std::int64_t instance) const;

  Step delay() const noexcept { return delay_; }
  const std::deque<ExperimentRequest>& pending() const noexcept {
    return pending_;
  }
  std::size_t size() const noexcept { return pending_.size(); }
  const ExperimentStats& stats() const noexcept { return stats_; }

 private:
  friend std::vector<CompletedExperiment> run_idle_experiments(
      Step, ExperimentBuffer&, const SchemaCatalog&);

  Step delay_;
  std::deque<ExperimentRequest> pending_;
  ExperimentStats stats_;
};

/// Runs every request due at `now`, in enqueue order. The counterfactual
/// needs no view, so a request outlives a capacity eviction of its view;
/// only maintenance flushes invalidate it.
std::vector<CompletedExperiment> run_idle_experiments(
    Step now, ExperimentBuffer& buffer, const SchemaCatalog& catalog);

}  // namespace omsim
