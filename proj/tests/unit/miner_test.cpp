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

#include <gtest/gtest.h>

#include "omsim/errors.hpp"
#include "omsim/miner.hpp"
#include "omsim/workload.hpp"

namespace omsim {
namespace {

constexpr PredicateId p1{1};
constexpr PredicateId p2{2};

Query query_of(PredicateSet preds) {
  Query q;
  q.predicates = std::move(preds);
  return q;
}

TEST(History, ObserveIsSetUnion) {
  const SchemaCatalog cat = toy_catalog();
  PredicateHistory h;
  h.observe(query_of({p1}), cat);
  EXPECT_EQ(h.seen_predicates(), (PredicateSet{p1}));
  h.observe(query_of({p1, p2}), cat);
  EXPECT_EQ(h.seen_predicates(), (PredicateSet{p1, p2}));
  h.observe(query_of({p1, p2}), cat);
  EXPECT_EQ(h.seen_predicates(), (PredicateSet{p1, p2}));
  EXPECT_EQ(h.join_graph().at(RelationId{2}), (RelationSet{RelationId{1}, RelationId{3}}));
}

TEST(Candidates, FullySeenQuery) {
  const SchemaCatalog cat = toy_catalog();
  PredicateHistory h;
  h.observe(query_of({p1, p2}), cat);
  const auto c = candidate_predicate_sets(query_of({p1, p2}), h, cat, 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], (PredicateSet{p1}));
  EXPECT_EQ(c[1], (PredicateSet{p1, p2}));
  EXPECT_EQ(c[2], (PredicateSet{p2}));
}

TEST(Candidates, FirstAppearanceYieldsNothing) {
  const SchemaCatalog cat = toy_catalog();
  PredicateHistory h;
  h.observe(query_of({p1}), cat);
  const Query q = query_of({p1, p2});
  const auto c = candidate_predicate_sets(q, h, cat, 4);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (PredicateSet{p1}));
  h.observe(q, cat);
  EXPECT_EQ(candidate_predicate_sets(q, h, cat, 4).size(), 3u);
}

TEST(Candidates, ArityCap) {
  const SchemaCatalog cat = toy_catalog();
  PredicateHistory h;
  h.observe(query_of({p1, p2}), cat);
  for (const auto& s : candidate_predicate_sets(query_of({p1, p2}), h, cat, 2)) {
    EXPECT_EQ(s.size(), 1u);
  }
  EXPECT_THROW(candidate_predicate_sets(query_of({p1}), h, cat, 1), ConfigError);
}

// Against a brute-force enumeration of every predicate subset.
TEST(Candidates, SubsetsOfSeenAndConnected) {
  const SchemaCatalog cat = desk_catalog();
  const auto pool = connected_templates(cat, 1, 3);
  Rng rng(77);
  PredicateHistory h;
  for (int round = 0; round < 200; ++round) {
    const Query q = query_of(pool[rng.below(pool.size())].predicates);
    const auto got = candidate_predicate_sets(q, h, cat, 4);
    std::vector<PredicateSet> want;
    const auto& ids = q.predicates.ids();
    for (std::uint32_t m = 1; m < (1u << ids.size()); ++m) {
      std::vector<PredicateId> pick;
      bool all_seen = true;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!(m >> i & 1)) continue;
        pick.push_back(ids[i]);
        all_seen = all_seen && h.seen(ids[i]);
      }
      const PredicateSet s(pick);
      const auto arity = cat.relations_of(s).size();
      if (all_seen && cat.is_connected(s) && arity >= 2 && arity <= 4) want.push_back(s);
    }
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
    EXPECT_LE(got.size(), (std::size_t{1} << ids.size()) - 1);
    for (const auto& s : got) {
      EXPECT_TRUE(s.is_subset_of(q.predicates));
      EXPECT_TRUE(s.is_subset_of(h.seen_predicates()));
    }
    h.observe(q, cat);
  }
}

TEST(Candidates, InternedInOrder) {
  const SchemaCatalog cat = toy_catalog();
  ViewRegistry reg(cat);
  PredicateHistory h;
  h.observe(query_of({p1, p2}), cat);
  const auto views = candidates(query_of({p1, p2}), h, reg, cat);
  ASSERT_EQ(views.size(), 3u);
  for (std::size_t i = 0; i < views.size(); ++i) {
    EXPECT_EQ(to_underlying(views[i].id), static_cast<int>(i));
  }
}

}  // namespace
}  // namespace omsim
