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

// Command-line driver: run one simulation, sweep a grid, or replay a
// trained network greedily.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omsim/errors.hpp"
#include "omsim/harness.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kInvariantExit = 3;

struct CommonFlags {
  std::string config_file;
  std::string catalog;
  std::string workload;
  std::string workload_file;
  std::string policy;
  std::int64_t length = 0;
  double zipf = 0.0;
  std::int64_t capacity = 0;
  double capacity_fraction = 0.0;
  std::int64_t delay = -1;
  std::int64_t maintenance_every = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double noise = 0.0;
  bool credits = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("--catalog", f.catalog, "schema catalog file (default: built-in desk catalog)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--workload", f.workload,
                  "para | azipf | dzipf | rzipf | adblend | dablend");
  cmd->add_option("--workload-file", f.workload_file, "replay a dumped query stream")
      ->check(CLI::ExistingFile);
  cmd->add_option("--policy", f.policy,
                  "dqm | lru | lfu | fifo | hawc | recycler | recycler-est | belady | null");
  cmd->add_option("--length", f.length, "queries to generate");
  cmd->add_option("--zipf", f.zipf, "zipf exponent");
  cmd->add_option("--capacity", f.capacity, "storage capacity in bytes");
  cmd->add_option("--capacity-fraction", f.capacity_fraction,
                  "capacity as a fraction of total candidate storage");
  cmd->add_option("--delay", f.delay, "experiment delay K in queries");
  cmd->add_option("--maintenance-every", f.maintenance_every,
                  "queries between base-table updates (0 = off)");
  cmd->add_option("--seed", f.seed, "seed")->each([&](const std::string&) {
    f.seed_set = true;
  });
  cmd->add_option("--noise", f.noise, "cost-estimate noise factor (>= 1)");
  cmd->add_flag("--credits", f.credits, "record the per-step credit dump");
}

omsim::RunConfig to_config(const CommonFlags& f) {
  omsim::RunConfig c;
  if (!f.config_file.empty()) c = omsim::load_config(f.config_file, c);
  if (!f.catalog.empty()) c.catalog_path = f.catalog;
  if (!f.workload.empty()) c.workload = omsim::parse_workload_kind(f.workload);
  if (!f.workload_file.empty()) c.workload_file = f.workload_file;
  if (!f.policy.empty()) c.policy = f.policy;
  if (f.length > 0) c.length = f.length;
  if (f.zipf > 0.0) c.zipf_exponent = f.zipf;
  if (f.capacity > 0) c.capacity = f.capacity;
  if (f.capacity_fraction > 0.0) {
    c.capacity.reset();
    c.capacity_fraction = f.capacity_fraction;
  }
  if (f.delay >= 0) c.delay = f.delay;
  if (f.maintenance_every >= 0) c.maintenance_every = f.maintenance_every;
  if (f.seed_set) c.seed = f.seed;
  if (f.noise > 0.0) c.noise_factor = f.noise;
  if (f.credits) c.record_credits = true;
  return c;
}

void print_summary(const omsim::RunReport& r) {
  std::cout << r.policy << ' ' << r.workload << " seed=" << r.seed
            << " steps=" << r.steps << " capacity=" << r.capacity
            << " latency=" << r.cumulative_latency
            << " creations=" << r.creations
            << " evictions=" << r.capacity_evictions + r.maintenance_evictions
            << " uses=" << r.uses << '\n';
}

template <typename T>
std::vector<T> or_default(const std::vector<T>& v, T fallback) {
  return v.empty() ? std::vector<T>{fallback} : v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunistic materialization simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_out;
  std::string save_checkpoint;
  std::string dump_workload;
  auto* run_cmd = app.add_subcommand("run", "simulate one policy over one stream");
  add_common(run_cmd, run_flags);
  run_cmd->add_option("--out", run_out, "directory for events.csv and summary.json");
  run_cmd->add_option("--save-checkpoint", save_checkpoint,
                      "write the trained network (dqm)");
  run_cmd->add_option("--dump-workload", dump_workload,
                      "write the query stream and continue");

  CommonFlags sweep_flags;
  std::string sweep_out;
  std::vector<std::string> policies;
  std::vector<double> fractions;
  std::vector<std::int64_t> delays;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a grid of configurations");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--policies", policies, "policies to compare")->delimiter(',');
  sweep_cmd->add_option("--capacity-fractions", fractions, "capacity grid")->delimiter(',');
  sweep_cmd->add_option("--delays", delays, "delay grid")->delimiter(',');
  sweep_cmd->add_option("--seeds", seeds, "seed grid")->delimiter(',');
  sweep_cmd->add_option("--threads", threads, "parallel runs");
  sweep_cmd->add_option("--out", sweep_out, "CSV file (default: stdout)");

  CommonFlags replay_flags;
  std::string replay_out;
  std::string checkpoint;
  auto* replay_cmd = app.add_subcommand(
      "replay", "greedy run of a trained network without exploration");
  add_common(replay_cmd, replay_flags);
  replay_cmd->add_option("--checkpoint", checkpoint, "network file")
      ->required()
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--out", replay_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run_cmd) {
      const omsim::RunConfig config = to_config(run_flags);
      if (!dump_workload.empty()) {
        const auto catalog = omsim::load_catalog(config);
        std::ofstream f(dump_workload);
        if (!f) throw omsim::ConfigError("cannot write '" + dump_workload + "'");
        omsim::write_stream(f, omsim::build_stream(config, catalog));
      }
      const omsim::RunResult result = omsim::run(config);
      print_summary(result.report);
      if (!run_out.empty()) omsim::write_outputs(result, run_out);
      if (!save_checkpoint.empty()) {
        if (!result.network) {
          throw omsim::ConfigError("--save-checkpoint needs the dqm policy");
        }
        result.network->save(save_checkpoint);
      }
    } else if (*sweep_cmd) {
      const omsim::RunConfig base = to_config(sweep_flags);
      std::vector<omsim::RunConfig> grid;
      for (const auto& p : or_default(policies, base.policy)) {
        for (double frac : or_default(fractions, 0.0)) {
          for (std::int64_t k : or_default(delays, base.delay)) {
            for (std::uint64_t s : or_default(seeds, base.seed)) {
              omsim::RunConfig c = base;
              c.policy = p;
              if (frac > 0.0) {
                c.capacity.reset();
                c.capacity_fraction = frac;
              }
              c.delay = k;
              c.seed = s;
              grid.push_back(c);
            }
          }
        }
      }
      const auto rows = omsim::sweep(grid, threads);
      if (sweep_out.empty()) {
        omsim::write_sweep_csv(std::cout, rows);
      } else {
        std::ofstream f(sweep_out);
        if (!f) throw omsim::ConfigError("cannot write '" + sweep_out + "'");
        omsim::write_sweep_csv(f, rows);
      }
    } else if (*replay_cmd) {
      const omsim::RunConfig config = to_config(replay_flags);
      const omsim::RunResult result =
          omsim::trained_replay(omsim::Mlp::load(checkpoint), config);
      print_summary(result.report);
      if (!replay_out.empty()) omsim::write_outputs(result, replay_out);
    }
  } catch (const omsim::ConfigError& e) {
    std::cerr << "omsim: " << e.what() << '\n';
    return kConfigExit;
  } catch (const omsim::InvariantViolation& e) {
    std::cerr << "omsim: invariant violated at " << e.what() << '\n';
    return kInvariantExit;
  }
  return 0;
}
