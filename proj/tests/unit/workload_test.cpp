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

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "omsim/errors.hpp"
#include "omsim/workload.hpp"

namespace omsim {
namespace {

WorkloadSpec desk_spec(WorkloadKind kind, std::int64_t length, std::uint64_t seed) {
  WorkloadSpec spec;
  spec.kind = kind;
  spec.length = length;
  spec.seed = seed;
  spec.templates = connected_templates(desk_catalog(), 1, 3);
  return spec;
}

std::string dump(const std::vector<Query>& stream) {
  std::ostringstream out;
  write_stream(out, stream);
  return out.str();
}

TEST(Templates, OrderedBySizeThenIds) {
  const auto pool = connected_templates(toy_catalog(), 1, 3);
  ASSERT_EQ(pool.size(), 3u);
  EXPECT_EQ(pool[0].predicates, (PredicateSet{PredicateId{1}}));
  EXPECT_EQ(pool[1].predicates, (PredicateSet{PredicateId{2}}));
  EXPECT_EQ(pool[2].predicates, (PredicateSet{PredicateId{1}, PredicateId{2}}));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_EQ(pool[i].id, static_cast<std::int32_t>(i));
  }
}

TEST(Templates, RankByBaseCost) {
  const SchemaCatalog cat = toy_catalog();
  const std::vector<QueryTemplate> pool{
      {0, PredicateSet{PredicateId{1}, PredicateId{2}}},  // 950
      {1, PredicateSet{PredicateId{1}}}};                 // 500
  const auto asc = rank_templates(pool, cat, RankOrder::kAscending, 0);
  EXPECT_EQ(asc[0].id, 1);
  EXPECT_EQ(asc[1].id, 0);
  const auto desc = rank_templates(pool, cat, RankOrder::kDescending, 0);
  EXPECT_EQ(desc[0].id, 0);
  EXPECT_EQ(desc[1].id, 1);

  const auto big = connected_templates(desk_catalog(), 1, 3);
  const auto s1 = rank_templates(big, desk_catalog(), RankOrder::kShuffled, 9);
  const auto s2 = rank_templates(big, desk_catalog(), RankOrder::kShuffled, 9);
  ASSERT_EQ(s1.size(), s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i].id, s2[i].id);
}

TEST(Zipf, ProbabilitiesSumToOne) {
  const auto p = zipf_probabilities(20, 1.0);
  double sum = 0.0;
  for (double x : p) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(p[0] / p[1], 2.0, 1e-12);
}

TEST(Zipf, LargeExponentConcentratesOnFirstRank) {
  EXPECT_GT(zipf_probabilities(10, 60.0)[0], 1.0 - 1e-12);
  ZipfSampler sampler(10, 60.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sampler(rng), 0u);
}

TEST(Zipf, FrequenciesWithinThreeStandardErrors) {
  const std::size_t n = 10;
  const int draws = 10000;
  const auto p = zipf_probabilities(n, 1.0);
  ZipfSampler sampler(n, 1.0);
  Rng rng(12345);
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) ++counts[sampler(rng)];
  for (std::size_t r = 0; r < n; ++r) {
    const double freq = static_cast<double>(counts[r]) / draws;
    const double se = std::sqrt(p[r] * (1.0 - p[r]) / draws);
    EXPECT_LE(std::fabs(freq - p[r]), 3.0 * se) << "rank " << r + 1;
  }
}

TEST(Generate, ParaNeverRepeatsAQuery) {
  const auto stream = generate(desk_spec(WorkloadKind::kPara, 1000, 4), desk_catalog());
  ASSERT_EQ(stream.size(), 1000u);
  std::set<std::pair<std::int32_t, double>> seen;
  for (const Query& q : stream) {
    EXPECT_TRUE(seen.emplace(q.template_id, q.selection_selectivity).second);
  }
}

TEST(Generate, SameSeedSameStream) {
  for (WorkloadKind kind : all_workload_kinds()) {
    const auto a = generate(desk_spec(kind, 400, 8), desk_catalog());
    const auto b = generate(desk_spec(kind, 400, 8), desk_catalog());
    EXPECT_EQ(dump(a), dump(b)) << to_string(kind);
  }
}

TEST(Generate, BlendsConcatenatePrefixes) {
  const SchemaCatalog cat = desk_catalog();
  const auto az = generate(desk_spec(WorkloadKind::kAzipf, 1000, 2), cat);
  const auto dz = generate(desk_spec(WorkloadKind::kDzipf, 1000, 2), cat);
  const auto da = generate(desk_spec(WorkloadKind::kDablend, 1000, 2), cat);
  const auto ad = generate(desk_spec(WorkloadKind::kAdblend, 1000, 2), cat);
  ASSERT_EQ(da.size(), 1000u);
  for (std::size_t i = 0; i < 500; ++i) {
    EXPECT_EQ(da[i].template_id, dz[i].template_id);
    EXPECT_EQ(da[500 + i].template_id, az[i].template_id);
    EXPECT_EQ(ad[i].template_id, az[i].template_id);
    EXPECT_EQ(ad[500 + i].template_id, dz[i].template_id);
    EXPECT_EQ(da[500 + i].arrival_step, static_cast<Step>(500 + i));
  }
}

TEST(Generate, RejectsBadSpecs) {
  const SchemaCatalog cat = desk_catalog();
  EXPECT_THROW(generate(desk_spec(WorkloadKind::kAzipf, 0, 1), cat), ConfigError);
  EXPECT_THROW(generate(desk_spec(WorkloadKind::kAdblend, 11, 1), cat), ConfigError);
  auto spec = desk_spec(WorkloadKind::kAzipf, 10, 1);
  spec.zipf_exponent = 0.0;
  EXPECT_THROW(generate(spec, cat), ConfigError);
  spec = desk_spec(WorkloadKind::kAzipf, 10, 1);
  spec.templates.clear();
  EXPECT_THROW(generate(spec, cat), ConfigError);
  EXPECT_THROW(parse_workload_kind("uniform"), ConfigError);
}

TEST(Stream, DumpRoundTrips) {
  const auto spec = desk_spec(WorkloadKind::kPara, 200, 6);
  const auto stream = generate(spec, desk_catalog());
  std::istringstream in(dump(stream));
  const auto back = read_stream(in, spec.templates);
  EXPECT_EQ(dump(back), dump(stream));
  ASSERT_EQ(back.size(), stream.size());
  EXPECT_EQ(back[17].selection_selectivity, stream[17].selection_selectivity);
  EXPECT_EQ(back[17].predicates, stream[17].predicates);
}

}  // namespace
}  // namespace omsim
