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

#include "omsim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omsim/errors.hpp"

namespace omsim {
namespace {

constexpr std::uint64_t kNetSalt = 0x51;
constexpr std::uint64_t kExploreSalt = 0x52;
constexpr std::uint64_t kSampleSalt = 0x53;

Mlp initial_network(const SchemaCatalog& catalog, const DqmConfig& config) {
  const std::size_t input = 2 * catalog.relation_count();
  if (config.initial_network) {
    if (config.initial_network->input_width() != input) {
      throw ConfigError("checkpoint input width does not match the catalog");
    }
    return *config.initial_network;
  }
  return Mlp({input, config.hidden_width, 1},
             derive_seed(config.seed, kNetSalt), config.init_scale);
}

}  // namespace

EpsilonSchedule step_epsilon(EpsilonSchedule schedule) {
  schedule.epsilon =
      std::max(schedule.epsilon_min, schedule.epsilon * schedule.decay_rate);
  return schedule;
}

std::int64_t RewardLedger::uses(const Key& key) const {
  auto it = uses_.find(key);
  return it == uses_.end() ? 0 : it->second;
}

double RewardLedger::reward(CostUnits improvement, CostUnits creation_cost,
                            const Key& key) {
  return reward_for(improvement, creation_cost, ++uses_[key]);
}

double RewardLedger::reward_for(CostUnits improvement, CostUnits creation_cost,
                                std::int64_t uses) const {
  if (uses <= 0) throw std::domain_error("reward needs at least one use");
  return static_cast<double>(improvement) -
         cost_scale_ * static_cast<double>(creation_cost) /
             static_cast<double>(uses);
}

std::vector<double> retroactive_rewards(std::span<const CostUnits> improvements,
                                        CostUnits creation_cost,
                                        double cost_scale) {
  RewardLedger ledger(cost_scale);
  const auto n = static_cast<std::int64_t>(improvements.size());
  std::vector<double> out;
  out.reserve(improvements.size());
  for (CostUnits imp : improvements) {
    out.push_back(ledger.reward_for(imp, creation_cost, n));
  }
  return out;
}

ActionChoice select_action(std::span<const View> candidates,
                           const HalfVector& state, const Mlp& online,
                           double epsilon, Rng& rng,
                           const SchemaCatalog& catalog) {
  if (candidates.empty()) return {};
  if (rng.uniform() < epsilon) {
    // Option 0 is the no-op, option i the (i-1)-th candidate.
    const auto pick = rng.below(candidates.size() + 1);
    ActionChoice choice;
    choice.explored = true;
    if (pick > 0) choice.candidate = static_cast<std::size_t>(pick - 1);
    return choice;
  }
  ActionChoice choice;
  double best = online.forward(encode_pair(no_op_action(catalog), state));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double q =
        online.forward(encode_pair(encode_view(candidates[i], catalog), state));
    if (q > best) {
      best = q;
      choice.candidate = i;
    }
  }
  return choice;
}

DqmPolicy::DqmPolicy(const SchemaCatalog& catalog, DqmConfig config,
                     Step delay)
    : catalog_(&catalog),
      config_(std::move(config)),
      nets_(initial_network(catalog, config_)),
      optimizer_(config_.optimizer),
      replay_(config_.replay_capacity),
      experiments_(delay),
      credits_(config_.credit),
      ledger_(config_.cost_scale),
      schedule_(config_.epsilon),
      explore_rng_(derive_seed(config_.seed, kExploreSalt)),
      sample_rng_(derive_seed(config_.seed, kSampleSalt)),
      no_op_(no_op_action(catalog)),
      delay_(delay) {
  if (config_.batch_size == 0 || config_.sync_every == 0 ||
      config_.train_interval == 0 || config_.steps_per_pass == 0) {
    throw ConfigError("batch size, sync and train intervals must be positive");
  }
  if (config_.discount < 0.0 || config_.discount >= 1.0) {
    throw ConfigError("discount must lie in [0, 1)");
  }
  config_.initial_network.reset();
}

Decision DqmPolicy::decide(const StepContext& ctx,
                           std::span<const View> candidates) {
  const auto alive = ctx.db.views();
  const HalfVector state = encode_state(alive, *catalog_);
  last_actions_.assign(1, no_op_);
  for (const View& v : candidates) {
    last_actions_.push_back(encode_view(v, *catalog_));
  }

  const ActionChoice choice = select_action(
      candidates, state, nets_.online, schedule_.epsilon, explore_rng_,
      *catalog_);
  last_choice_ = choice;
  if (choice.explored) ++explorations_;
  if (!choice.candidate) {
    if (config_.training && config_.decline_experiences &&
        !candidates.empty()) {
      declines_.push_back(
          {ctx.step + delay_,
           Experience{state, no_op_, 0.0, state, last_actions_}});
    }
    Decision d;
    d.explored = choice.explored;
    return d;
  }

  Decision d = creation_decision(
      candidates[*choice.candidate], ctx.db, [&](const MaterializedView& mv) {
        return credits_.contains(mv.view.id) ? credits_.credit(mv.view.id)
                                             : 0.0;
      });
  d.explored = choice.explored;
  return d;
}

void DqmPolicy::on_materialized(const MaterializedView& mv, Step) {
  credits_.add(mv.view.id);
}

void DqmPolicy::on_evicted(const MaterializedView& mv, EvictionReason,
                           Step step) {
  credits_.remove(mv.view.id);
  if (config_.exact_accounting) {
    closing_.insert({mv.view.id, mv.instance});
    close_settled(step);
  }
}

void DqmPolicy::on_maintenance(RelationId relation, Step) {
  experiments_.flush_relation(relation);
}

void DqmPolicy::on_executed(const StepContext& ctx, const Plan& plan) {
  if (!plan.view_used) return;
  const MaterializedView* mv = ctx.db.find(*plan.view_used);
  if (!mv) throw InvariantViolation(ctx.step, "plan uses an absent view");
  ExperimentRequest req;
  req.query = ctx.query;
  req.view = mv->view.id;
  req.instance = mv->instance;
  req.view_relations = mv->view.relations;
  req.creation_cost = mv->view.creation_cost;
  req.actual_cost = plan.query_component();
  req.enqueued_at = ctx.step;
  req.state = encode_state(ctx.db.views(), *catalog_);
  req.action = encode_view(mv->view, *catalog_);
  req.next_actions = last_actions_;
  experiments_.enqueue(std::move(req));
}

void DqmPolicy::on_idle(Step now, const DatabaseState& db) {
  while (!declines_.empty() && declines_.front().available_at <= now) {
    Experience e = std::move(declines_.front().experience);
    declines_.pop_front();
    ++decline_commits_;
    push_experience(std::move(e), 0.0, now);
  }
  for (CompletedExperiment& done :
       run_idle_experiments(now, experiments_, *catalog_)) {
    const ExperimentRequest& req = done.request;
    const RewardLedger::Key key{req.view, req.instance};
    // Only the live materialization earns eviction credit.
    if (db.holds_instance(req.view, req.instance)) {
      credits_.record_use(req.view, done.improvement, req.creation_cost);
    }
    const double r = ledger_.reward(done.improvement, req.creation_cost, key);
    if (config_.exact_accounting) {
      exact_uses_[key].push_back({done, req.creation_cost});
    } else if (config_.training) {
      commit_experience(done, r, now);
    }
  }
  if (config_.exact_accounting) close_settled(now);
}

void DqmPolicy::on_finish(Step now, const DatabaseState&) {
  if (!config_.exact_accounting) return;
  while (!exact_uses_.empty()) {
    close_materialization(exact_uses_.begin()->first, now);
  }
  closing_.clear();
}

void DqmPolicy::close_settled(Step now) {
  for (auto it = closing_.begin(); it != closing_.end();) {
    if (experiments_.has_pending(it->first, it->second)) {
      ++it;
      continue;
    }
    close_materialization(*it, now);
    it = closing_.erase(it);
  }
}

void DqmPolicy::close_materialization(const RewardLedger::Key& key,
                                      Step now) {
  auto it = exact_uses_.find(key);
  if (it == exact_uses_.end()) return;
  const std::vector<PendingUse> uses = std::move(it->second);
  exact_uses_.erase(it);
  const auto n = static_cast<std::int64_t>(uses.size());
  for (const PendingUse& u : uses) {
    const double r = ledger_.reward_for(u.done.improvement, u.creation_cost, n);
    if (config_.training) commit_experience(u.done, r, now);
  }
}

void DqmPolicy::commit_experience(const CompletedExperiment& done,
                                  double reward, Step now) {
  const ExperimentRequest& req = done.request;
  const Relabeled rl = relabel(req.state, req.action);
  commits_.push_back({now, req.enqueued_at, done.completed_at, req.view,
                      req.instance, done.improvement, reward});
  push_experience(Experience{rl.pre_state, req.action, reward, rl.post_state,
                             req.next_actions},
                  reward, now);
}

void DqmPolicy::push_experience(Experience e, double reward, Step) {
  replay_.push(std::move(e));
  reward_scale_ = std::max(reward_scale_, std::abs(reward));
  schedule_ = step_epsilon(schedule_);
  ++commit_count_;
  if (commit_count_ % static_cast<std::int64_t>(config_.train_interval) == 0) {
    train_pass();
  }
}

void DqmPolicy::train_pass() {
  // Rewards are in cost units; dividing by the largest magnitude seen so
  // far keeps the regression targets near unit scale.
  const double scale = reward_scale_ > 0.0 ? reward_scale_ : 1.0;
  for (std::size_t k = 0; k < config_.steps_per_pass; ++k) {
    const auto batch = sample(replay_, config_.batch_size, sample_rng_);
    std::vector<TrainingExample> examples;
    examples.reserve(batch.size());
    for (const Experience& e : batch) {
      examples.push_back({encode_pair(e.action, e.state),
                          td_target(e.reward / scale, e.next_state,
                                    e.next_actions, nets_.target,
                                    config_.discount)});
    }
    train_batch(nets_.online, examples, optimizer_);
  }
  ++passes_;
  if (passes_ % static_cast<std::int64_t>(config_.sync_every) == 0) {
    nets_.sync();
  }
}

}  // namespace omsim
