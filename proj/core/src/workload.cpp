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

#include "omsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "omsim/errors.hpp"
#include "omsim/rng.hpp"

namespace omsim {
namespace {

constexpr std::uint64_t kRankSalt = 0x72616e6bULL;
constexpr std::uint64_t kDrawSalt = 0x64726177ULL;
constexpr std::uint64_t kSelSalt = 0x73656cULL;

// Para selectivities are kept away from 0 so residual filters stay cheap
// relative to the joins they follow.
constexpr double kMinParaSelectivity = 0.05;

std::vector<Query> generate_zipf(const WorkloadSpec& spec,
                                 const SchemaCatalog& catalog,
                                 RankOrder order) {
  const auto ranked = rank_templates(spec.templates, catalog, order,
                                     derive_seed(spec.seed, kRankSalt));
  ZipfSampler sampler(ranked.size(), spec.zipf_exponent);
  Rng rng(derive_seed(spec.seed, kDrawSalt));
  std::vector<Query> out;
  out.reserve(static_cast<std::size_t>(spec.length));
  for (std::int64_t step = 0; step < spec.length; ++step) {
    const QueryTemplate& t = ranked[sampler(rng)];
    Query q;
    q.id = step;
    q.arrival_step = step;
    q.template_id = t.id;
    q.predicates = t.predicates;
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Query> generate_para(const WorkloadSpec& spec) {
  Rng draw(derive_seed(spec.seed, kDrawSalt));
  Rng sel(derive_seed(spec.seed, kSelSalt));
  std::set<std::pair<std::int32_t, double>> seen;
  std::vector<Query> out;
  out.reserve(static_cast<std::size_t>(spec.length));
  for (std::int64_t step = 0; step < spec.length; ++step) {
    const QueryTemplate& t = spec.templates[draw.below(spec.templates.size())];
    double s = 0.0;
    do {
      s = sel.uniform(kMinParaSelectivity, 1.0);
    } while (!seen.emplace(t.id, s).second);
    Query q;
    q.id = step;
    q.arrival_step = step;
    q.template_id = t.id;
    q.predicates = t.predicates;
    q.selection_selectivity = s;
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Query> concat_prefixes(std::vector<Query> first,
                                   std::vector<Query> second,
                                   std::int64_t half) {
  std::vector<Query> out(first.begin(), first.begin() + half);
  out.insert(out.end(), second.begin(), second.begin() + half);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = static_cast<std::int64_t>(i);
    out[i].arrival_step = static_cast<Step>(i);
  }
  return out;
}

}  // namespace

std::string_view to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kPara: return "para";
    case WorkloadKind::kAzipf: return "azipf";
    case WorkloadKind::kDzipf: return "dzipf";
    case WorkloadKind::kRzipf: return "rzipf";
    case WorkloadKind::kAdblend: return "adblend";
    case WorkloadKind::kDablend: return "dablend";
  }
  return "?";
}

WorkloadKind parse_workload_kind(std::string_view name) {
  for (WorkloadKind k : all_workload_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown workload '" + std::string(name) + "'");
}

const std::vector<WorkloadKind>& all_workload_kinds() {
  static const std::vector<WorkloadKind> kinds{
      WorkloadKind::kPara,  WorkloadKind::kAzipf,   WorkloadKind::kDzipf,
      WorkloadKind::kRzipf, WorkloadKind::kAdblend, WorkloadKind::kDablend};
  return kinds;
}

std::vector<QueryTemplate> connected_templates(const SchemaCatalog& catalog,
                                               std::size_t min_size,
                                               std::size_t max_size) {
  const auto& preds = catalog.predicates();
  const std::size_t n = preds.size();
  std::vector<PredicateSet> found;
  // Grow connected sets one adjacent predicate at a time; the set of sets
  // dedups different growth orders.
  std::set<PredicateSet> frontier;
  for (const Predicate& p : preds) frontier.insert(PredicateSet{p.id});
  std::set<PredicateSet> all = frontier;
  for (std::size_t size = 2; size <= max_size && size <= n; ++size) {
    std::set<PredicateSet> next;
    for (const PredicateSet& s : frontier) {
      const RelationSet rels = catalog.relations_of(s);
      for (const Predicate& p : preds) {
        if (s.contains(p.id)) continue;
        if (!rels.contains(p.left) && !rels.contains(p.right)) continue;
        PredicateSet grown = s;
        grown.insert(p.id);
        next.insert(grown);
      }
    }
    all.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const PredicateSet& s : all) {
    if (s.size() >= min_size && s.size() <= max_size) found.push_back(s);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const PredicateSet& a, const PredicateSet& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
  std::vector<QueryTemplate> out;
  out.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    out.push_back({static_cast<std::int32_t>(i), found[i]});
  }
  return out;
}

std::vector<QueryTemplate> rank_templates(
    const std::vector<QueryTemplate>& pool, const SchemaCatalog& catalog,
    RankOrder order, std::uint64_t seed) {
  std::vector<QueryTemplate> out = pool;
  if (order == RankOrder::kShuffled) {
    Rng rng(seed);
    for (std::size_t i = out.size(); i > 1; --i) {
      std::swap(out[i - 1], out[rng.below(i)]);
    }
    return out;
  }
  std::vector<std::pair<CostUnits, std::size_t>> keyed;
  keyed.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Query q;
    q.predicates = out[i].predicates;
    keyed.emplace_back(base_query_cost(q, catalog), i);
  }
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return out[a.second].id < out[b.second].id;
  });
  std::vector<QueryTemplate> ranked;
  ranked.reserve(out.size());
  for (const auto& [cost, i] : keyed) ranked.push_back(out[i]);
  if (order == RankOrder::kDescending) {
    std::reverse(ranked.begin(), ranked.end());
  }
  return ranked;
}

std::vector<double> zipf_probabilities(std::size_t n, double exponent) {
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

ZipfSampler::ZipfSampler(std::size_t n, double exponent) {
  const auto p = zipf_probabilities(n, exponent);
  cdf_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += p[i];
    cdf_[i] = acc;
  }
  if (!cdf_.empty()) cdf_.back() = 1.0;
}

std::size_t ZipfSampler::operator()(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

std::vector<Query> generate(const WorkloadSpec& spec,
                            const SchemaCatalog& catalog) {
  if (spec.length < 1) throw ConfigError("workload length must be >= 1");
  if (!(spec.zipf_exponent > 0.0)) {
    throw ConfigError("zipf exponent must be > 0");
  }
  if (spec.templates.empty()) throw ConfigError("template pool is empty");

  switch (spec.kind) {
    case WorkloadKind::kPara:
      return generate_para(spec);
    case WorkloadKind::kAzipf:
      return generate_zipf(spec, catalog, RankOrder::kAscending);
    case WorkloadKind::kDzipf:
      return generate_zipf(spec, catalog, RankOrder::kDescending);
    case WorkloadKind::kRzipf:
      return generate_zipf(spec, catalog, RankOrder::kShuffled);
    case WorkloadKind::kAdblend:
    case WorkloadKind::kDablend: {
      if (spec.length % 2 != 0) {
        throw ConfigError("blend workloads require an even length");
      }
      auto asc = generate_zipf(spec, catalog, RankOrder::kAscending);
      auto desc = generate_zipf(spec, catalog, RankOrder::kDescending);
      const std::int64_t half = spec.length / 2;
      return spec.kind == WorkloadKind::kAdblend
                 ? concat_prefixes(std::move(asc), std::move(desc), half)
                 : concat_prefixes(std::move(desc), std::move(asc), half);
    }
  }
  throw ConfigError("unhandled workload kind");
}

void write_stream(std::ostream& out, const std::vector<Query>& stream) {
  char buf[64];
  for (const Query& q : stream) {
    auto res = std::to_chars(buf, buf + sizeof buf, q.selection_selectivity);
    out << q.arrival_step << ' ' << q.template_id << ' '
        << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  }
}

std::vector<Query> read_stream(std::istream& in,
                               const std::vector<QueryTemplate>& templates) {
  std::vector<Query> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Step step = 0;
    std::int64_t tid = 0;
    std::string sel_text;
    if (!(fields >> step >> tid >> sel_text)) {
      throw ConfigError("stream line " + std::to_string(line_no) +
                        ": expected '<step> <template-id> <selectivity>'");
    }
    double sel = 0.0;
    auto res = std::from_chars(sel_text.data(),
                               sel_text.data() + sel_text.size(), sel);
    if (res.ec != std::errc{} || !(sel > 0.0 && sel <= 1.0)) {
      throw ConfigError("stream line " + std::to_string(line_no) +
                        ": bad selectivity");
    }
    auto t = std::find_if(templates.begin(), templates.end(),
                          [&](const QueryTemplate& x) { return x.id == tid; });
    if (t == templates.end()) {
      throw ConfigError("stream line " + std::to_string(line_no) +
                        ": unknown template " + std::to_string(tid));
    }
    Query q;
    q.id = static_cast<std::int64_t>(out.size());
    q.arrival_step = step;
    q.template_id = t->id;
    q.predicates = t->predicates;
    q.selection_selectivity = sel;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace omsim
