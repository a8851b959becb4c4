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
#include "omsim/planner.hpp"
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

class ToyPlanner : public ::testing::Test {
 protected:
  SchemaCatalog cat = toy_catalog();
  View v1 = make_view(ViewId{0}, PredicateSet{p1}, cat);
  View v12 = make_view(ViewId{1}, PredicateSet{p1, p2}, cat);
};

TEST_F(ToyPlanner, Eligibility) {
  EXPECT_TRUE(eligible(v1, query_of({p1, p2})));
  EXPECT_FALSE(eligible(v12, query_of({p1})));
  EXPECT_TRUE(eligible(v1, query_of({p1})));
}

TEST_F(ToyPlanner, BestPlan) {
  const Query q = query_of({p1, p2});
  const Plan with = best_plan(q, std::vector<View>{v1}, cat);
  EXPECT_EQ(with.view_used, v1.id);
  EXPECT_EQ(with.total_cost, 450);
  const Plan without = best_plan(q, {}, cat);
  EXPECT_FALSE(without.view_used);
  EXPECT_EQ(without.total_cost, 950);
  EXPECT_EQ(with.creation_component, 0);
}

TEST_F(ToyPlanner, IneligibleViewsIgnored) {
  const Plan p = best_plan(query_of({p1}), std::vector<View>{v12}, cat);
  EXPECT_FALSE(p.view_used);
  EXPECT_EQ(p.total_cost, 500);
}

TEST_F(ToyPlanner, PlanWithCreation) {
  const Plan a = plan_with_creation(query_of({p1, p2}), v1, cat);
  EXPECT_EQ(a.total_cost, 950);
  EXPECT_EQ(a.creation_component, 500);
  EXPECT_EQ(a.query_component(), 450);
  EXPECT_EQ(plan_with_creation(query_of({p1}), v1, cat).total_cost, 700);
  EXPECT_EQ(plan_with_creation(query_of({p1, p2}), v12, cat).total_cost, 1150);
  EXPECT_THROW(plan_with_creation(query_of({p1}), v12, cat), ConfigError);
}

TEST(Planner, HugeViewLosesToBasePlan) {
  const RelationId A{1}, B{2}, C{3};
  const SchemaCatalog cat = SchemaCatalog::create(
      {{A, 10, 8}, {B, 10, 8}, {C, 10, 8}}, {{p1, A, B, 0.01}, {p2, B, C, 1.0}});
  const View huge = make_view(ViewId{0}, PredicateSet{p2}, cat);
  const Query q = query_of({p1, p2});
  ASSERT_GT(query_cost_with_view(q, huge, cat), base_query_cost(q, cat));
  const Plan p = best_plan(q, std::vector<View>{huge}, cat);
  EXPECT_FALSE(p.view_used);
  EXPECT_EQ(p.total_cost, base_query_cost(q, cat));
}

TEST(Planner, TieBreaks) {
  // Two views with identical plan cost: the lower id wins. A view that only
  // matches the base plan loses to it.
  const SchemaCatalog cat = toy_catalog();
  View a = make_view(ViewId{5}, PredicateSet{p1}, cat);
  View b = a;
  b.id = ViewId{2};
  const Plan p = best_plan(query_of({p1, p2}), std::vector<View>{a, b}, cat);
  EXPECT_EQ(p.view_used, ViewId{2});
}

TEST(Planner, NeverWorseThanBaseAndDeterministic) {
  const SchemaCatalog cat = desk_catalog();
  const auto pool = connected_templates(cat, 1, 3);
  std::vector<View> views;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (cat.relations_of(pool[i].predicates).size() >= 2) {
      views.push_back(make_view(ViewId{static_cast<int>(views.size())},
                                pool[i].predicates, cat));
    }
  }
  for (const auto& t : pool) {
    const Query q = query_of(t.predicates);
    const Plan a = best_plan(q, views, cat);
    const Plan b = best_plan(q, views, cat);
    EXPECT_LE(a.total_cost, base_query_cost(q, cat));
    EXPECT_EQ(a.total_cost, b.total_cost);
    EXPECT_EQ(a.view_used, b.view_used);
  }
}

}  // namespace
}  // namespace omsim
