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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"
#include "omsim/rng.hpp"

namespace omsim {

enum class WorkloadKind { kPara, kAzipf, kDzipf, kRzipf, kAdblend, kDablend };

std::string_view to_string(WorkloadKind kind);
/// Throws ConfigError on an unknown name.
WorkloadKind parse_workload_kind(std::string_view name);
const std::vector<WorkloadKind>& all_workload_kinds();

/// A query template is a connected predicate set; queries instantiate one.
struct QueryTemplate {
  std::int32_t id = 0;
  PredicateSet predicates;
};

enum class RankOrder { kAscending, kDescending, kShuffled };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kPara;
  std::int64_t length = 1000;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 0;
  std::vector<QueryTemplate> templates;
};

/// All connected predicate subsets with min_size..max_size predicates,
/// ordered by size then by predicate-id tuple; ids follow that order.
std::vector<QueryTemplate> connected_templates(const SchemaCatalog& catalog,
                                               std::size_t min_size = 1,
                                               std::size_t max_size = 3);

/// Orders templates by base-plan cost (ties by template id), reversed for
/// descending, or a seeded Fisher-Yates shuffle.
std::vector<QueryTemplate> rank_templates(
    const std::vector<QueryTemplate>& pool, const SchemaCatalog& catalog,
    RankOrder order, std::uint64_t seed);

/// Probability of each 1-based rank under a zipf law with the exponent.
std::vector<double> zipf_probabilities(std::size_t n, double exponent);

/// Draws ranks (0-based) from a zipf law by inverting its CDF.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

/// Materializes the query stream. Throws ConfigError if the spec is
/// invalid (length < 1, exponent <= 0, empty pool, odd blend length).
std::vector<Query> generate(const WorkloadSpec& spec,
                            const SchemaCatalog& catalog);

/// Stream dump: one `<step> <template-id> <selectivity>` line per query.
void write_stream(std::ostream& out, const std::vector<Query>& stream);
std::vector<Query> read_stream(std::istream& in,
                               const std::vector<QueryTemplate>& templates);

}  // namespace omsim
