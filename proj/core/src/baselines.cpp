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

#include "omsim/baselines.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "omsim/errors.hpp"
#include "omsim/miner.hpp"
#include "omsim/planner.hpp"

namespace omsim {

RandomSelectionPolicy::RandomSelectionPolicy(RecencyRule rule,
                                             std::uint64_t seed)
    : rule_(rule), rng_(seed) {}

std::string RandomSelectionPolicy::name() const {
  switch (rule_) {
    case RecencyRule::kLru: return "lru";
    case RecencyRule::kLfu: return "lfu";
    case RecencyRule::kFifo: return "fifo";
  }
  return "random";
}

double RandomSelectionPolicy::score(ViewId id) const {
  const Usage& u = usage_.at(id);
  switch (rule_) {
    case RecencyRule::kLru: return static_cast<double>(u.last_use);
    case RecencyRule::kLfu: return static_cast<double>(u.uses);
    case RecencyRule::kFifo: return static_cast<double>(u.inserted_at);
  }
  return 0.0;
}

Decision RandomSelectionPolicy::decide(const StepContext& ctx,
                                       std::span<const View> candidates) {
  if (candidates.empty()) return {};
  const View& pick = candidates[rng_.below(candidates.size())];
  return creation_decision(pick, ctx.db, [&](const MaterializedView& mv) {
    return score(mv.view.id);
  });
}

void RandomSelectionPolicy::on_materialized(const MaterializedView& mv,
                                            Step step) {
  usage_[mv.view.id] = Usage{step, step, 0};
}

void RandomSelectionPolicy::on_evicted(const MaterializedView& mv,
                                       EvictionReason, Step) {
  usage_.erase(mv.view.id);
}

void RandomSelectionPolicy::on_executed(const StepContext& ctx,
                                        const Plan& plan) {
  if (!plan.view_used) return;
  Usage& u = usage_.at(*plan.view_used);
  u.last_use = ctx.step;
  ++u.uses;
}

std::map<ViewId, double> RandomSelectionPolicy::scores() const {
  std::map<ViewId, double> out;
  for (const auto& [id, u] : usage_) out[id] = score(id);
  return out;
}

HawcPolicy::HawcPolicy(const SchemaCatalog& catalog, HawcConfig config)
    : catalog_(&catalog), config_(config) {
  if (config_.window < 1) throw ConfigError("hawc window must be positive");
  if (config_.noise_factor < 1.0) {
    throw ConfigError("noise factor must be at least 1");
  }
}

double HawcPolicy::estimated_benefit(const Query& q, const View& v,
                                     CostUnits cost_with_view) const {
  const double truth =
      static_cast<double>(base_query_cost(q, *catalog_) - cost_with_view);
  return estimation_factor(v.predicates, config_.noise_seed,
                           config_.noise_factor) *
         truth;
}

double HawcPolicy::credit(ViewId id) const {
  double sum = 0.0;
  for (const Use& u : window_) {
    if (u.view == id) sum += u.benefit;
  }
  return sum;
}

void HawcPolicy::expire(Step now) {
  while (!window_.empty() && window_.front().step <= now - config_.window) {
    window_.pop_front();
  }
}

Decision HawcPolicy::decide(const StepContext& ctx,
                            std::span<const View> candidates) {
  expire(ctx.step);
  const View* best = nullptr;
  double best_benefit = 0.0;
  for (const View& v : candidates) {
    const double b = estimated_benefit(
        ctx.query, v, query_cost_with_view(ctx.query, v, *catalog_));
    if (b > best_benefit) {
      best = &v;
      best_benefit = b;
    }
  }
  if (!best) return {};
  Decision d = creation_decision(*best, ctx.db, [&](const MaterializedView& mv) {
    return credit(mv.view.id);
  });
  for (ViewId victim : d.victims) {
    if (credit(victim) >= best_benefit) return {};
  }
  return d;
}

void HawcPolicy::on_evicted(const MaterializedView& mv, EvictionReason, Step) {
  std::erase_if(window_, [&](const Use& u) { return u.view == mv.view.id; });
}

void HawcPolicy::on_executed(const StepContext& ctx, const Plan& plan) {
  expire(ctx.step);
  if (!plan.view_used) return;
  const MaterializedView* mv = ctx.db.find(*plan.view_used);
  if (!mv) throw InvariantViolation(ctx.step, "plan uses an absent view");
  window_.push_back({ctx.step, mv->view.id,
                     estimated_benefit(ctx.query, mv->view,
                                       plan.query_component())});
}

std::map<ViewId, double> HawcPolicy::scores() const {
  std::map<ViewId, double> out;
  for (const Use& u : window_) out[u.view] += u.benefit;
  return out;
}

RecyclerPolicy::RecyclerPolicy(const SchemaCatalog& catalog,
                               RecyclerConfig config)
    : catalog_(&catalog), config_(config) {
  if (config_.noise_factor < 1.0) {
    throw ConfigError("noise factor must be at least 1");
  }
}

std::string RecyclerPolicy::name() const {
  return config_.estimated ? "recycler-est" : "recycler";
}

double RecyclerPolicy::cost_of(const View& view) const {
  if (!config_.estimated) return static_cast<double>(view.creation_cost);
  return estimated_cost(view, *catalog_, config_.noise_seed,
                        config_.noise_factor);
}

Decision RecyclerPolicy::decide(const StepContext& ctx,
                                std::span<const View> candidates) {
  if (candidates.empty()) return {};
  const View* pick = &candidates.front();
  double pick_cost = cost_of(*pick);
  for (const View& v : candidates.subspan(1)) {
    const double c = cost_of(v);
    if (c > pick_cost) {
      pick = &v;
      pick_cost = c;
    }
  }
  if (pick->size > ctx.db.capacity()) {
    Decision d;
    d.demoted = true;
    return d;
  }

  Decision d;
  d.create = *pick;
  if (pick->size <= ctx.db.free()) return d;

  struct Ranked {
    double score;
    Bytes size;
    ViewId id;
  };
  std::vector<Ranked> ranked;
  for (const auto& [id, mv] : ctx.db.entries()) {
    ranked.push_back({scores_.at(id), mv.view.size, id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.size != b.size) return a.size > b.size;
    return a.id < b.id;
  });
  Bytes free = ctx.db.free();
  for (const Ranked& r : ranked) {
    if (free >= pick->size || r.score >= pick_cost) break;
    d.victims.push_back(r.id);
    free += r.size;
  }
  if (free < pick->size) return {};
  return d;
}

void RecyclerPolicy::on_materialized(const MaterializedView& mv, Step step) {
  scores_[mv.view.id] = cost_of(mv.view);
  created_at_[mv.view.id] = step;
}

void RecyclerPolicy::on_evicted(const MaterializedView& mv, EvictionReason,
                                Step) {
  scores_.erase(mv.view.id);
  created_at_.erase(mv.view.id);
}

void RecyclerPolicy::on_executed(const StepContext& ctx, const Plan& plan) {
  for (auto& [id, s] : scores_) {
    if (created_at_.at(id) == ctx.step) continue;
    s *= (plan.view_used == id) ? config_.use_gain : config_.idle_decay;
  }
}

BeladyPolicy::BeladyPolicy(const std::vector<Query>& trace,
                           ViewRegistry& registry,
                           const SchemaCatalog& catalog,
                           std::size_t max_arity)
    : catalog_(&catalog), trace_(trace) {
  base_.reserve(trace_.size());
  options_.resize(trace_.size());
  for (std::size_t t = 0; t < trace_.size(); ++t) {
    const Query& q = trace_[t];
    base_.push_back(base_query_cost(q, catalog));
    PredicateHistory everything;
    everything.observe(q, catalog);
    for (const PredicateSet& s :
         candidate_predicate_sets(q, everything, catalog, max_arity)) {
      const View& v = registry.intern(s);
      const CostUnits c = query_cost_with_view(q, v, catalog);
      options_[t].push_back({v.id, c});
      if (c < base_[t]) uses_[v.id].push_back(static_cast<Step>(t));
    }
  }
}

Step BeladyPolicy::next_use(ViewId view, Step step) const {
  auto it = uses_.find(view);
  const Step none = static_cast<Step>(trace_.size());
  if (it == uses_.end()) return none;
  auto pos = std::upper_bound(it->second.begin(), it->second.end(), step);
  return pos == it->second.end() ? none : *pos;
}

double BeladyPolicy::future_gain(ViewId view, std::span<const ViewId> victims,
                                 Step step, const DatabaseState& db) const {
  const auto gone = [&](ViewId id) {
    return std::find(victims.begin(), victims.end(), id) != victims.end();
  };
  double total = 0.0;
  for (std::size_t u = static_cast<std::size_t>(step) + 1; u < trace_.size();
       ++u) {
    CostUnits before = base_[u];
    CostUnits after = base_[u];
    for (const Option& o : options_[u]) {
      const bool resident = db.contains(o.view);
      if (resident) before = std::min(before, o.cost);
      if ((resident && !gone(o.view)) || o.view == view) {
        after = std::min(after, o.cost);
      }
    }
    total += static_cast<double>(before - after);
  }
  return total;
}

Decision BeladyPolicy::decide(const StepContext& ctx,
                              std::span<const View> candidates) {
  const Step t = ctx.step;
  if (t < 0 || static_cast<std::size_t>(t) >= trace_.size() ||
      trace_[t].predicates != ctx.query.predicates) {
    throw InvariantViolation(t, "belady trace does not match the stream");
  }
  if (candidates.empty()) return {};

  const auto alive = ctx.db.views();
  const CostUnits plain = best_plan(ctx.query, alive, *catalog_).total_cost;
  const EvictionScore farthest_first = [&](const MaterializedView& mv) {
    return -static_cast<double>(next_use(mv.view.id, t));
  };
  std::optional<Decision> best;
  double best_net = 0.0;
  for (const View& v : candidates) {
    if (v.size > ctx.db.capacity()) continue;
    Decision d;
    d.create = v;
    d.victims = select_victims(ctx.db, v.size, farthest_first);
    const double premium = static_cast<double>(
        plan_with_creation(ctx.query, v, *catalog_).total_cost - plain);
    const double net = future_gain(v.id, d.victims, t, ctx.db) - premium;
    if (net > best_net) {
      best_net = net;
      best = std::move(d);
    }
  }
  return best ? *best : Decision{};
}

}  // namespace omsim
