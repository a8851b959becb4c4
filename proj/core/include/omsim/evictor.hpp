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

#include <functional>
#include <map>
#include <vector>

#include "omsim/database.hpp"
#include "omsim/experiments.hpp"

namespace omsim {

struct CreditConfig {
  /// Decay applied to a non-negative credit each time the view is used.
  double decay = 0.9;
  /// Scale on creation cost when the use improved the query.
  double gain_cost_scale = 0.1;
  /// Scale on creation cost when the use hurt; negative turns the cost
  /// into a penalty.
  double loss_cost_scale = -0.1;
};

/// Per-view running value of keeping the view materialized. New views
/// start at zero.
class CreditTable {
 public:
  explicit CreditTable(CreditConfig config = {}) : config_(config) {}

  void add(ViewId view) { credits_[view] = 0.0; }
  void remove(ViewId view) { credits_.erase(view); }
  bool contains(ViewId view) const { return credits_.count(view) != 0; }
  /// Throws std::out_of_range for an unknown view.
  double credit(ViewId view) const { return credits_.at(view); }

  /// C <- decay * C (skipped when C < 0) + improvement + scale * cost.
  /// Throws std::out_of_range for an unknown view.
  double record_use(ViewId view, CostUnits improvement,
                    CostUnits creation_cost);

  const std::map<ViewId, double>& entries() const noexcept { return credits_; }
  const CreditConfig& config() const noexcept { return config_; }

 private:
  CreditConfig config_;
  std::map<ViewId, double> credits_;
};

/// Lower score is evicted first.
using EvictionScore = std::function<double(const MaterializedView&)>;

/// Victims, in eviction order, needed to free `required` bytes: lowest
/// score first, ties to the larger view, then the lower id. Returns an
/// empty list when the free space already suffices. Throws ConfigError
/// ("view exceeds capacity") if required > capacity.
std::vector<ViewId> select_victims(const DatabaseState& db, Bytes required,
                                   const EvictionScore& score);

/// Credit-ordered select_victims that also applies the evictions to the
/// database and the credit table.
std::vector<MaterializedView> evict_for(Bytes required, DatabaseState& db,
                                        CreditTable& table, Step step);

/// A base-table update invalidates every view that reads the table: each
/// one is evicted and its credit entry removed, and every pending
/// experiment on a view over the relation is flushed. The table and
/// buffer are optional for policies without them.
std::vector<MaterializedView> maintenance_event(RelationId relation,
                                                DatabaseState& db, Step step,
                                                CreditTable* table = nullptr,
                                                ExperimentBuffer* experiments =
                                                    nullptr);

}  // namespace omsim
