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
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omsim/baselines.hpp"
#include "omsim/catalog.hpp"
#include "omsim/learner.hpp"
#include "omsim/policy.hpp"
#include "omsim/simulator.hpp"
#include "omsim/workload.hpp"

namespace omsim {

struct RunConfig {
  /// Empty selects the built-in desk catalog.
  std::string catalog_path;
  WorkloadKind workload = WorkloadKind::kAzipf;
  std::int64_t length = 500;
  double zipf_exponent = 1.0;
  /// Replays a dumped stream instead of generating one.
  std::string workload_file;
  std::string policy = "dqm";
  /// Bytes; when unset, capacity_fraction of the total candidate storage.
  std::optional<Bytes> capacity;
  double capacity_fraction = 0.2;
  Step delay = 0;
  Step maintenance_every = 0;
  std::uint64_t seed = 1;
  /// Optimizer-estimate error for the policies that consume estimates.
  double noise_factor = 1.0;
  std::size_t max_arity = 4;
  DqmConfig dqm{};
  HawcConfig hawc{};
  RecyclerConfig recycler{};
  /// Initial network for dqm.
  std::string checkpoint;
  bool record_credits = false;
};

struct RunReport {
  std::string policy;
  std::string workload;
  std::uint64_t seed = 0;
  Bytes capacity = 0;
  /// capacity / total candidate storage.
  double normalized_capacity = 0.0;
  Step delay = 0;
  Step maintenance_every = 0;
  std::int64_t steps = 0;
  CostUnits cumulative_latency = 0;
  std::vector<CostUnits> latency;
  std::int64_t creations = 0;
  std::int64_t capacity_evictions = 0;
  std::int64_t maintenance_evictions = 0;
  std::int64_t uses = 0;
  std::int64_t demotions = 0;
  std::int64_t exploration_steps = 0;
  ExperimentStats experiments{};
  std::int64_t commits = 0;
  std::int64_t training_passes = 0;
  std::map<ViewId, double> final_credits;
  std::vector<View> final_views;
};

struct RunResult {
  RunReport report;
  SimulationResult simulation;
  std::vector<Query> stream;
  /// Every view interned during the run, indexed by id.
  std::vector<View> views;
  /// DQM only.
  std::vector<CommitRecord> commits;
  std::optional<Mlp> network;
};

const std::vector<std::string>& policy_names();

/// Total size of every view a candidate could ever be drawn from: all
/// connected subsets (2..max_arity relations) of the template predicates.
Bytes total_candidate_storage(const std::vector<QueryTemplate>& templates,
                              const SchemaCatalog& catalog,
                              std::size_t max_arity);

SchemaCatalog load_catalog(const RunConfig& config);
std::vector<Query> build_stream(const RunConfig& config,
                                const SchemaCatalog& catalog);
Bytes resolve_capacity(const RunConfig& config, const SchemaCatalog& catalog);

/// Throws ConfigError on an unknown policy name.
std::unique_ptr<Policy> make_policy(const RunConfig& config,
                                    const SchemaCatalog& catalog,
                                    ViewRegistry& registry,
                                    const std::vector<Query>& stream);

/// Throws ConfigError for invalid configuration and InvariantViolation for
/// a broken run. Deterministic given the config.
RunResult run(const RunConfig& config);
RunResult run(const RunConfig& config, const SchemaCatalog& catalog,
              const std::vector<Query>& stream);

/// Runs every config on up to `threads` workers; rows keep config order.
std::vector<RunReport> sweep(const std::vector<RunConfig>& configs,
                             unsigned threads = 1);

/// Greedy replay of a trained network: epsilon fixed at 0, no training.
RunResult trained_replay(const Mlp& checkpoint, RunConfig config);

std::string report_json(const RunReport& report);
void write_sweep_csv(std::ostream& out, const std::vector<RunReport>& rows);
/// events.csv, summary.json and (if recorded) credits.csv under `dir`.
void write_outputs(const RunResult& result, const std::string& dir);

/// Reads a JSON run configuration over `base`; unknown keys are errors.
RunConfig parse_config_json(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace omsim
