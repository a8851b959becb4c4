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

#include "omsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "omsim/errors.hpp"
#include "omsim/miner.hpp"

namespace omsim {
namespace {

using nlohmann::json;

constexpr std::uint64_t kPolicySalt = 0x71;
constexpr std::uint64_t kNoiseSalt = 0x72;
constexpr std::uint64_t kMaintenanceSalt = 0x73;

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void validate(const RunConfig& c) {
  if (c.length < 1 && c.workload_file.empty()) {
    throw ConfigError("workload length must be positive");
  }
  if (c.capacity && *c.capacity <= 0) {
    throw ConfigError("capacity must be positive");
  }
  if (!c.capacity && (c.capacity_fraction <= 0.0 || c.capacity_fraction > 1.0)) {
    throw ConfigError("capacity fraction must lie in (0, 1]");
  }
  if (c.delay < 0) throw ConfigError("delay must be non-negative");
  if (c.maintenance_every < 0) {
    throw ConfigError("maintenance interval must be non-negative");
  }
  if (c.noise_factor < 1.0) throw ConfigError("noise factor must be >= 1");
  if (c.max_arity < 2) throw ConfigError("max arity must be at least 2");
}

// Reads `key` from `obj` into `out` if present, rejecting type mismatches
// with a readable message.
template <typename T>
void read(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return key == k; })) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

void read_dqm(const json& obj, DqmConfig& d) {
  reject_unknown(obj,
                 {"hidden_width", "discount", "optimizer", "learning_rate",
                  "batch_size", "sync_every", "replay_capacity",
                  "train_interval", "cost_scale", "epsilon", "epsilon_min",
                  "epsilon_decay", "credit_decay", "gain_cost_scale",
                  "loss_cost_scale", "training", "exact_accounting",
                  "decline_experiences", "steps_per_pass"},
                 "dqm.");
  read(obj, "hidden_width", d.hidden_width);
  read(obj, "discount", d.discount);
  if (auto it = obj.find("optimizer"); it != obj.end()) {
    const std::string name = it->get<std::string>();
    if (name == "adam") {
      d.optimizer.kind = OptimizerKind::kAdam;
    } else if (name == "sgd") {
      d.optimizer.kind = OptimizerKind::kSgd;
    } else {
      throw ConfigError("config: unknown optimizer '" + name + "'");
    }
  }
  read(obj, "learning_rate", d.optimizer.learning_rate);
  read(obj, "batch_size", d.batch_size);
  read(obj, "sync_every", d.sync_every);
  read(obj, "replay_capacity", d.replay_capacity);
  read(obj, "train_interval", d.train_interval);
  read(obj, "steps_per_pass", d.steps_per_pass);
  read(obj, "cost_scale", d.cost_scale);
  read(obj, "epsilon", d.epsilon.epsilon);
  read(obj, "epsilon_min", d.epsilon.epsilon_min);
  read(obj, "epsilon_decay", d.epsilon.decay_rate);
  read(obj, "credit_decay", d.credit.decay);
  read(obj, "gain_cost_scale", d.credit.gain_cost_scale);
  read(obj, "loss_cost_scale", d.credit.loss_cost_scale);
  read(obj, "training", d.training);
  read(obj, "exact_accounting", d.exact_accounting);
  read(obj, "decline_experiences", d.decline_experiences);
}

json credits_json(const std::map<ViewId, double>& credits) {
  json out = json::array();
  for (const auto& [id, c] : credits) {
    out.push_back({{"view", to_underlying(id)}, {"credit", c}});
  }
  return out;
}

}  // namespace

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names{
      "dqm", "lru", "lfu", "fifo", "hawc", "recycler", "recycler-est",
      "belady", "null"};
  return names;
}

Bytes total_candidate_storage(const std::vector<QueryTemplate>& templates,
                              const SchemaCatalog& catalog,
                              std::size_t max_arity) {
  std::map<PredicateSet, Bytes> closure;
  for (const QueryTemplate& t : templates) {
    Query q;
    q.predicates = t.predicates;
    PredicateHistory all;
    all.observe(q, catalog);
    for (const PredicateSet& s :
         candidate_predicate_sets(q, all, catalog, max_arity)) {
      if (!closure.count(s)) {
        closure[s] = make_view(ViewId{0}, s, catalog).size;
      }
    }
  }
  Bytes total = 0;
  for (const auto& [s, size] : closure) total += size;
  return total;
}

SchemaCatalog load_catalog(const RunConfig& config) {
  if (config.catalog_path.empty()) return desk_catalog();
  return SchemaCatalog::load(config.catalog_path);
}

std::vector<Query> build_stream(const RunConfig& config,
                                const SchemaCatalog& catalog) {
  auto templates = connected_templates(catalog);
  if (!config.workload_file.empty()) {
    std::ifstream in(config.workload_file);
    if (!in) {
      throw ConfigError("cannot open workload file '" + config.workload_file +
                        "'");
    }
    return read_stream(in, templates);
  }
  WorkloadSpec spec;
  spec.kind = config.workload;
  spec.length = config.length;
  spec.zipf_exponent = config.zipf_exponent;
  spec.seed = config.seed;
  spec.templates = std::move(templates);
  return generate(spec, catalog);
}

Bytes resolve_capacity(const RunConfig& config, const SchemaCatalog& catalog) {
  if (config.capacity) return *config.capacity;
  const Bytes total = total_candidate_storage(connected_templates(catalog),
                                              catalog, config.max_arity);
  return std::max<Bytes>(
      1, static_cast<Bytes>(config.capacity_fraction *
                            static_cast<double>(total)));
}

std::unique_ptr<Policy> make_policy(const RunConfig& config,
                                    const SchemaCatalog& catalog,
                                    ViewRegistry& registry,
                                    const std::vector<Query>& stream) {
  const std::uint64_t policy_seed = derive_seed(config.seed, kPolicySalt);
  const std::uint64_t noise_seed = derive_seed(config.seed, kNoiseSalt);
  const std::string& p = config.policy;
  if (p == "dqm") {
    DqmConfig d = config.dqm;
    d.seed = policy_seed;
    if (!config.checkpoint.empty()) d.initial_network = Mlp::load(config.checkpoint);
    return std::make_unique<DqmPolicy>(catalog, std::move(d), config.delay);
  }
  if (p == "lru") {
    return std::make_unique<RandomSelectionPolicy>(RecencyRule::kLru,
                                                   policy_seed);
  }
  if (p == "lfu") {
    return std::make_unique<RandomSelectionPolicy>(RecencyRule::kLfu,
                                                   policy_seed);
  }
  if (p == "fifo") {
    return std::make_unique<RandomSelectionPolicy>(RecencyRule::kFifo,
                                                   policy_seed);
  }
  if (p == "hawc") {
    HawcConfig h = config.hawc;
    h.noise_factor = config.noise_factor;
    h.noise_seed = noise_seed;
    return std::make_unique<HawcPolicy>(catalog, h);
  }
  if (p == "recycler" || p == "recycler-est") {
    RecyclerConfig r = config.recycler;
    r.estimated = (p == "recycler-est");
    r.noise_factor = config.noise_factor;
    r.noise_seed = noise_seed;
    return std::make_unique<RecyclerPolicy>(catalog, r);
  }
  if (p == "belady") {
    return std::make_unique<BeladyPolicy>(stream, registry, catalog,
                                          config.max_arity);
  }
  if (p == "null") return std::make_unique<NullPolicy>();
  throw ConfigError("unknown policy '" + p + "'");
}

RunResult run(const RunConfig& config) {
  validate(config);
  const SchemaCatalog catalog = load_catalog(config);
  const std::vector<Query> stream = build_stream(config, catalog);
  return run(config, catalog, stream);
}

RunResult run(const RunConfig& config, const SchemaCatalog& catalog,
              const std::vector<Query>& stream) {
  validate(config);
  ViewRegistry registry(catalog);
  auto policy = make_policy(config, catalog, registry, stream);

  SimulationOptions opts;
  opts.capacity = resolve_capacity(config, catalog);
  opts.maintenance_every = config.maintenance_every;
  opts.maintenance_seed = derive_seed(config.seed, kMaintenanceSalt);
  opts.max_arity = config.max_arity;
  opts.record_credits = config.record_credits;

  RunResult out;
  out.simulation = simulate(stream, catalog, registry, *policy, opts);
  out.stream = stream;
  out.views.assign(registry.all().begin(), registry.all().end());

  RunReport& r = out.report;
  const SimulationResult& sim = out.simulation;
  r.policy = policy->name();
  r.workload = config.workload_file.empty()
                   ? std::string(to_string(config.workload))
                   : config.workload_file;
  r.seed = config.seed;
  r.capacity = opts.capacity;
  const Bytes total = total_candidate_storage(connected_templates(catalog),
                                              catalog, config.max_arity);
  r.normalized_capacity =
      total > 0 ? static_cast<double>(r.capacity) / static_cast<double>(total)
                : 0.0;
  r.delay = config.delay;
  r.maintenance_every = config.maintenance_every;
  r.steps = static_cast<std::int64_t>(stream.size());
  r.cumulative_latency = sim.cumulative_cost;
  r.latency.reserve(sim.events.size());
  for (const EventRecord& e : sim.events) r.latency.push_back(e.cost);
  r.creations = sim.creations;
  r.capacity_evictions = sim.capacity_evictions;
  r.maintenance_evictions = sim.maintenance_evictions;
  r.uses = sim.uses;
  r.demotions = sim.demotions;
  r.exploration_steps = sim.explorations;
  r.final_credits = policy->scores();
  r.final_views = sim.final_views;
  if (const auto* dqm = dynamic_cast<const DqmPolicy*>(policy.get())) {
    r.experiments = dqm->experiments().stats();
    r.commits = static_cast<std::int64_t>(dqm->commits().size());
    r.training_passes = dqm->training_passes();
    out.commits = dqm->commits();
    out.network = dqm->networks().online;
  }
  return out;
}

std::vector<RunReport> sweep(const std::vector<RunConfig>& configs,
                             unsigned threads) {
  std::vector<RunReport> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        rows[i] = run(configs[i]).report;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(
                                      threads, static_cast<unsigned>(
                                                   configs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

RunResult trained_replay(const Mlp& checkpoint, RunConfig config) {
  config.policy = "dqm";
  config.checkpoint.clear();
  config.dqm.training = false;
  config.dqm.epsilon = EpsilonSchedule{0.0, 0.0, 1.0};
  config.dqm.initial_network = checkpoint;
  return run(config);
}

std::string report_json(const RunReport& r) {
  json j;
  j["policy"] = r.policy;
  j["workload"] = r.workload;
  j["seed"] = r.seed;
  j["capacity"] = r.capacity;
  j["normalized_capacity"] = r.normalized_capacity;
  j["delay"] = r.delay;
  j["maintenance_every"] = r.maintenance_every;
  j["steps"] = r.steps;
  j["cumulative_latency"] = r.cumulative_latency;
  j["creations"] = r.creations;
  j["capacity_evictions"] = r.capacity_evictions;
  j["maintenance_evictions"] = r.maintenance_evictions;
  j["uses"] = r.uses;
  j["demotions"] = r.demotions;
  j["exploration_steps"] = r.exploration_steps;
  j["experiments"] = {{"enqueued", r.experiments.enqueued},
                      {"completed", r.experiments.completed},
                      {"flushed", r.experiments.flushed}};
  j["commits"] = r.commits;
  j["training_passes"] = r.training_passes;
  j["final_credits"] = credits_json(r.final_credits);
  json views = json::array();
  for (const View& v : r.final_views) {
    views.push_back({{"view", to_underlying(v.id)},
                     {"predicates", format_ids(v.predicates)},
                     {"size", v.size}});
  }
  j["final_views"] = views;
  j["latency"] = r.latency;
  return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<RunReport>& rows) {
  out << "policy,workload,seed,capacity,normalized_capacity,delay,"
         "maintenance_every,steps,cumulative_latency,creations,evictions,"
         "uses,exploration_steps\n";
  for (const RunReport& r : rows) {
    out << r.policy << ',' << r.workload << ',' << r.seed << ',' << r.capacity
        << ',' << format_double(r.normalized_capacity) << ',' << r.delay << ','
        << r.maintenance_every << ',' << r.steps << ','
        << r.cumulative_latency << ',' << r.creations << ','
        << r.capacity_evictions + r.maintenance_evictions << ',' << r.uses
        << ',' << r.exploration_steps << '\n';
  }
}

void write_outputs(const RunResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
  auto open = [&](const char* name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw ConfigError(std::string("cannot write ") + name);
    return f;
  };
  {
    auto f = open("events.csv");
    write_events_csv(f, result.simulation.events);
  }
  {
    auto f = open("summary.json");
    f << report_json(result.report);
  }
  if (!result.simulation.credits.empty()) {
    auto f = open("credits.csv");
    write_credits_csv(f, result.simulation.credits);
  }
}

RunConfig parse_config_json(const std::string& text, RunConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected an object");
  reject_unknown(j,
                 {"catalog", "workload", "length", "zipf", "workload_file",
                  "policy", "capacity", "capacity_fraction", "delay",
                  "maintenance_every", "seed", "noise", "max_arity",
                  "checkpoint", "record_credits", "dqm", "hawc", "recycler"},
                 "");
  RunConfig c = std::move(base);
  read(j, "catalog", c.catalog_path);
  if (auto it = j.find("workload"); it != j.end()) {
    c.workload = parse_workload_kind(it->get<std::string>());
  }
  read(j, "length", c.length);
  read(j, "zipf", c.zipf_exponent);
  read(j, "workload_file", c.workload_file);
  read(j, "policy", c.policy);
  if (auto it = j.find("capacity"); it != j.end()) {
    c.capacity = it->get<Bytes>();
  }
  read(j, "capacity_fraction", c.capacity_fraction);
  read(j, "delay", c.delay);
  read(j, "maintenance_every", c.maintenance_every);
  read(j, "seed", c.seed);
  read(j, "noise", c.noise_factor);
  read(j, "max_arity", c.max_arity);
  read(j, "checkpoint", c.checkpoint);
  read(j, "record_credits", c.record_credits);
  if (auto it = j.find("dqm"); it != j.end()) read_dqm(*it, c.dqm);
  if (auto it = j.find("hawc"); it != j.end()) {
    reject_unknown(*it, {"window"}, "hawc.");
    read(*it, "window", c.hawc.window);
  }
  if (auto it = j.find("recycler"); it != j.end()) {
    reject_unknown(*it, {"scale_up", "scale_down"}, "recycler.");
    read(*it, "scale_up", c.recycler.use_gain);
    read(*it, "scale_down", c.recycler.idle_decay);
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_json(text.str(), std::move(base));
}

}  // namespace omsim
