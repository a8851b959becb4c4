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
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "omsim/evictor.hpp"
#include "omsim/experiments.hpp"
#include "omsim/features.hpp"
#include "omsim/policy.hpp"
#include "omsim/qnet.hpp"
#include "omsim/rng.hpp"

namespace omsim {

struct EpsilonSchedule {
  double epsilon = 1.0;
  double epsilon_min = 0.1;
  double decay_rate = 0.995;
};

/// epsilon := max(epsilon_min, epsilon * decay_rate).
EpsilonSchedule step_epsilon(EpsilonSchedule schedule);

/// Amortizes a view's creation cost over the queries that use it:
///   R(q, v) = improvement - scale * Cost(v) / N_v
/// with N_v the running use count of one materialization (view, instance),
/// incremented before the reward is computed.
class RewardLedger {
 public:
  using Key = std::pair<ViewId, std::int64_t>;

  explicit RewardLedger(double cost_scale = 1.0) : cost_scale_(cost_scale) {}

  std::int64_t uses(const Key& key) const;
  double reward(CostUnits improvement, CostUnits creation_cost,
                const Key& key);

  /// Reward for one use given an explicit N; throws std::domain_error
  /// when uses == 0.
  double reward_for(CostUnits improvement, CostUnits creation_cost,
                    std::int64_t uses) const;

  double cost_scale() const noexcept { return cost_scale_; }

 private:
  double cost_scale_;
  std::map<Key, std::int64_t> uses_;
};

/// Per-use rewards with N fixed at the final use count, so they sum to
/// sum(improvements) - scale * creation_cost.
std::vector<double> retroactive_rewards(std::span<const CostUnits> improvements,
                                        CostUnits creation_cost,
                                        double cost_scale);

struct ActionChoice {
  /// Index into the candidate list; empty means create nothing.
  std::optional<std::size_t> candidate;
  bool explored = false;
};

/// Epsilon-greedy over candidates plus the no-op. Exploration is uniform
/// over the k+1 options; exploitation is the argmax of the online network
/// with ties resolved to the no-op, then to the earlier candidate.
ActionChoice select_action(std::span<const View> candidates,
                           const HalfVector& state, const Mlp& online,
                           double epsilon, Rng& rng,
                           const SchemaCatalog& catalog);

struct DqmConfig {
  std::size_t hidden_width = 32;
  double init_scale = 0.05;
  double discount = 0.9;
  OptimizerConfig optimizer{};
  std::size_t batch_size = 32;
  std::size_t sync_every = 10;
  std::size_t replay_capacity = 2000;
  std::size_t train_interval = 4;
  /// Gradient steps per training pass, each on a fresh sample.
  std::size_t steps_per_pass = 1;
  double cost_scale = 1.0;
  EpsilonSchedule epsilon{};
  CreditConfig credit{};
  /// Learning disabled: experiments still feed the credit table, but no
  /// experience is stored and epsilon stays where it is.
  bool training = true;
  /// Rewards use the final use count of each materialization; experiences
  /// are committed when the materialization ends.
  bool exact_accounting = false;
  /// Declining to create also yields an experience (no-op action, reward
  /// 0), released after the same delay as experiment results. Without it
  /// nothing ever trains the no-op's value.
  bool decline_experiences = true;
  std::uint64_t seed = 0;
  /// Starting parameters (e.g. a loaded checkpoint).
  std::optional<Mlp> initial_network;
};

struct CommitRecord {
  Step committed_at = 0;
  Step enqueued_at = 0;
  Step completed_at = 0;
  ViewId view{};
  std::int64_t instance = 0;
  CostUnits improvement = 0;
  double reward = 0.0;
};

/// The learned creation policy with credit-based submissive eviction. Every
/// use of a view queues a paired counterfactual experiment; completed
/// experiments become rewards, credit updates and relabeled experiences
/// for the Q-network.
class DqmPolicy final : public Policy {
 public:
  DqmPolicy(const SchemaCatalog& catalog, DqmConfig config, Step delay);

  std::string name() const override { return "dqm"; }
  Decision decide(const StepContext& ctx,
                  std::span<const View> candidates) override;
  void on_materialized(const MaterializedView& mv, Step step) override;
  void on_evicted(const MaterializedView& mv, EvictionReason reason,
                  Step step) override;
  void on_maintenance(RelationId relation, Step step) override;
  void on_executed(const StepContext& ctx, const Plan& plan) override;
  void on_idle(Step now, const DatabaseState& db) override;
  void on_finish(Step now, const DatabaseState& db) override;
  std::map<ViewId, double> scores() const override { return credits_.entries(); }

  /// Stores the relabeled experience (state - action, action, reward,
  /// state) and trains every train_interval commits.
  void commit_experience(const CompletedExperiment& done, double reward,
                         Step now);

  const QNetworkPair& networks() const noexcept { return nets_; }
  const ReplayBuffer& replay() const noexcept { return replay_; }
  const ExperimentBuffer& experiments() const noexcept { return experiments_; }
  const CreditTable& credits() const noexcept { return credits_; }
  const RewardLedger& ledger() const noexcept { return ledger_; }
  const EpsilonSchedule& schedule() const noexcept { return schedule_; }
  const std::vector<CommitRecord>& commits() const noexcept { return commits_; }
  std::int64_t decline_commits() const noexcept { return decline_commits_; }
  std::int64_t training_passes() const noexcept { return passes_; }
  std::int64_t exploration_steps() const noexcept { return explorations_; }
  double reward_scale() const noexcept { return reward_scale_; }
  /// The option picked by the last decide(), before any demotion.
  const ActionChoice& last_choice() const noexcept { return last_choice_; }

 private:
  struct PendingUse {
    CompletedExperiment done;
    CostUnits creation_cost;
  };

  struct PendingDecline {
    Step available_at;
    Experience experience;
  };

  void push_experience(Experience e, double reward, Step now);
  void train_pass();
  void close_materialization(const RewardLedger::Key& key, Step now);
  void close_settled(Step now);

  const SchemaCatalog* catalog_;
  DqmConfig config_;
  QNetworkPair nets_;
  Optimizer optimizer_;
  ReplayBuffer replay_;
  ExperimentBuffer experiments_;
  CreditTable credits_;
  RewardLedger ledger_;
  EpsilonSchedule schedule_;
  Rng explore_rng_;
  Rng sample_rng_;
  HalfVector no_op_;
  std::vector<HalfVector> last_actions_;
  ActionChoice last_choice_;
  std::map<RewardLedger::Key, std::vector<PendingUse>> exact_uses_;
  /// Evicted materializations awaiting their last experiments.
  std::set<RewardLedger::Key> closing_;
  std::deque<PendingDecline> declines_;
  Step delay_;
  std::vector<CommitRecord> commits_;
  std::int64_t commit_count_ = 0;
  std::int64_t decline_commits_ = 0;
  std::int64_t passes_ = 0;
  std::int64_t explorations_ = 0;
  double reward_scale_ = 0.0;
};

}  // namespace omsim
