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
#include <span>
#include <vector>

#include "omsim/cost_model.hpp"
#include "omsim/policy.hpp"
#include "omsim/rng.hpp"

namespace omsim {

enum class RecencyRule { kLru, kLfu, kFifo };

/// Creates a uniformly random candidate on every query that has one and
/// evicts by a classic cache rule. An in-line creation counts as a use.
class RandomSelectionPolicy final : public Policy {
 public:
  RandomSelectionPolicy(RecencyRule rule, std::uint64_t seed);

  std::string name() const override;
  Decision decide(const StepContext& ctx,
                  std::span<const View> candidates) override;
  void on_materialized(const MaterializedView& mv, Step step) override;
  void on_evicted(const MaterializedView& mv, EvictionReason, Step) override;
  void on_executed(const StepContext& ctx, const Plan& plan) override;
  std::map<ViewId, double> scores() const override;

 private:
  struct Usage {
    Step inserted_at = 0;
    Step last_use = 0;
    std::int64_t uses = 0;
  };
  double score(ViewId id) const;

  RecencyRule rule_;
  Rng rng_;
  std::map<ViewId, Usage> usage_;
};

struct HawcConfig {
  /// Credits sum the estimated benefit of uses in the last `window` queries.
  Step window = 100;
  /// Benefit estimates are off by a per-view factor in [1/f, f].
  double noise_factor = 1.0;
  std::uint64_t noise_seed = 0;
};

/// Picks the candidate with the largest estimated benefit for the current
/// query and admits it only if it outscores every view it would displace.
class HawcPolicy final : public Policy {
 public:
  HawcPolicy(const SchemaCatalog& catalog, HawcConfig config);

  std::string name() const override { return "hawc"; }
  Decision decide(const StepContext& ctx,
                  std::span<const View> candidates) override;
  void on_evicted(const MaterializedView& mv, EvictionReason, Step) override;
  void on_executed(const StepContext& ctx, const Plan& plan) override;
  std::map<ViewId, double> scores() const override;

  double credit(ViewId id) const;

 private:
  struct Use {
    Step step;
    ViewId view;
    double benefit;
  };
  double estimated_benefit(const Query& q, const View& v,
                           CostUnits cost_with_view) const;
  void expire(Step now);

  const SchemaCatalog* catalog_;
  HawcConfig config_;
  std::deque<Use> window_;
};

struct RecyclerConfig {
  /// Use the noisy optimizer estimate instead of the true creation cost.
  bool estimated = false;
  double noise_factor = 1.0;
  std::uint64_t noise_seed = 0;
  double use_gain = 2.0;
  double idle_decay = 0.95;
};

/// Keeps the most expensive-to-recompute intermediates. Scores start at
/// the (estimated) creation cost, double on every use and decay on every
/// query that does not use the view.
class RecyclerPolicy final : public Policy {
 public:
  RecyclerPolicy(const SchemaCatalog& catalog, RecyclerConfig config);

  std::string name() const override;
  Decision decide(const StepContext& ctx,
                  std::span<const View> candidates) override;
  void on_materialized(const MaterializedView& mv, Step step) override;
  void on_evicted(const MaterializedView& mv, EvictionReason, Step) override;
  void on_executed(const StepContext& ctx, const Plan& plan) override;
  std::map<ViewId, double> scores() const override { return scores_; }

  double cost_of(const View& view) const;

 private:
  const SchemaCatalog* catalog_;
  RecyclerConfig config_;
  std::map<ViewId, double> scores_;
  std::map<ViewId, Step> created_at_;
};

/// Offline reference with the whole trace in hand. A use of a view at a
/// step means the view is eligible and beats the base plan there.
///
/// Eviction is farthest next use first. Each candidate is priced against
/// the victims that rule would pick: the remaining-trace saving of the
/// swap, minus the in-line creation premium over today's best plan. The
/// candidate with the largest positive margin is created.
class BeladyPolicy final : public Policy {
 public:
  BeladyPolicy(const std::vector<Query>& trace, ViewRegistry& registry,
               const SchemaCatalog& catalog, std::size_t max_arity = 4);

  std::string name() const override { return "belady"; }
  Decision decide(const StepContext& ctx,
                  std::span<const View> candidates) override;
  std::map<ViewId, double> scores() const override { return {}; }

  /// First use strictly after `step`; trace length when none.
  Step next_use(ViewId view, Step step) const;
  /// Remaining-trace cost saved by swapping `victims` for `view`, with the
  /// resident set otherwise frozen.
  double future_gain(ViewId view, std::span<const ViewId> victims, Step step,
                     const DatabaseState& db) const;

 private:
  struct Option {
    ViewId view;
    CostUnits cost;
  };

  const SchemaCatalog* catalog_;
  std::vector<Query> trace_;
  std::vector<CostUnits> base_;
  std::vector<std::vector<Option>> options_;
  std::map<ViewId, std::vector<Step>> uses_;
};

}  // namespace omsim
