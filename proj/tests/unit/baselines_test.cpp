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

#include "omsim/baselines.hpp"
#include "omsim/errors.hpp"
#include "omsim/planner.hpp"
#include "omsim/simulator.hpp"
#include "omsim/workload.hpp"

namespace omsim {
namespace {

Query query_of(PredicateSet preds, std::int64_t id = 0) {
  Query q;
  q.id = id;
  q.arrival_step = id;
  q.predicates = std::move(preds);
  return q;
}

// Chain A-B-C-D-E; single-predicate views are all 100 rows x 16 bytes.
class Chain : public ::testing::Test {
 protected:
  SchemaCatalog cat = SchemaCatalog::create(
      {{RelationId{1}, 100, 8}, {RelationId{2}, 100, 8}, {RelationId{3}, 100, 8},
       {RelationId{4}, 100, 8}, {RelationId{5}, 100, 8}},
      {{PredicateId{1}, RelationId{1}, RelationId{2}, 0.01},
       {PredicateId{2}, RelationId{2}, RelationId{3}, 0.01},
       {PredicateId{3}, RelationId{3}, RelationId{4}, 0.01},
       {PredicateId{4}, RelationId{4}, RelationId{5}, 0.01}});
  std::vector<View> v{make_view(ViewId{0}, PredicateSet{PredicateId{1}}, cat),
                      make_view(ViewId{1}, PredicateSet{PredicateId{2}}, cat),
                      make_view(ViewId{2}, PredicateSet{PredicateId{3}}, cat)};
  DatabaseState db{2 * v[0].size};

  void install(Policy& p, const View& view, Step step) {
    p.on_materialized(db.materialize(view, step), step);
  }
  void use(Policy& p, const View& view, Step step) {
    const Query q = query_of(view.predicates, step);
    Plan plan;
    plan.view_used = view.id;
    plan.total_cost = query_cost_with_view(q, view, cat);
    p.on_executed(StepContext{step, q, db, cat}, plan);
  }
  void idle(Policy& p, Step step) {
    const Query q = query_of(PredicateSet{PredicateId{4}}, step);
    p.on_executed(StepContext{step, q, db, cat}, best_plan(q, {}, cat));
  }
  Decision offer(Policy& p, const View& view, Step step) {
    const Query q = query_of(view.predicates, step);
    return p.decide(StepContext{step, q, db, cat}, std::span<const View>(&view, 1));
  }
};

TEST_F(Chain, LruEvictsLeastRecent) {
  RandomSelectionPolicy p(RecencyRule::kLru, 1);
  install(p, v[0], 0);
  install(p, v[1], 1);
  use(p, v[0], 3);
  use(p, v[1], 9);
  EXPECT_EQ(offer(p, v[2], 10).victims, std::vector<ViewId>{v[0].id});
}

TEST_F(Chain, LfuEvictsLeastFrequent) {
  RandomSelectionPolicy p(RecencyRule::kLfu, 1);
  install(p, v[0], 0);
  install(p, v[1], 1);
  for (int i = 0; i < 5; ++i) use(p, v[0], 2 + i);
  use(p, v[1], 8);
  EXPECT_EQ(offer(p, v[2], 10).victims, std::vector<ViewId>{v[1].id});
}

TEST_F(Chain, FifoIgnoresUse) {
  RandomSelectionPolicy p(RecencyRule::kFifo, 1);
  install(p, v[0], 0);
  install(p, v[1], 1);
  for (int i = 0; i < 5; ++i) use(p, v[0], 2 + i);
  EXPECT_EQ(offer(p, v[2], 10).victims, std::vector<ViewId>{v[0].id});
}

TEST_F(Chain, HawcWindowForgets) {
  HawcPolicy p(cat, {2, 1.0, 0});
  install(p, v[0], 0);
  EXPECT_EQ(p.credit(v[0].id), 0.0);
  use(p, v[0], 0);
  EXPECT_GT(p.credit(v[0].id), 0.0);
  idle(p, 1);
  EXPECT_GT(p.credit(v[0].id), 0.0);
  idle(p, 2);
  EXPECT_EQ(p.credit(v[0].id), 0.0);
}

TEST_F(Chain, HawcPicksTrueBestWithoutNoise) {
  HawcPolicy p(cat, {100, 1.0, 0});
  const Query q = query_of(PredicateSet{PredicateId{1}, PredicateId{2}, PredicateId{3}}, 0);
  const std::vector<View> cands{v[0], make_view(ViewId{3}, PredicateSet{PredicateId{1}, PredicateId{2}}, cat), v[2]};
  const Decision d = p.decide(StepContext{0, q, db, cat}, cands);
  std::optional<ViewId> want;
  CostUnits best = base_query_cost(q, cat);
  for (const View& c : cands) {
    const CostUnits with = query_cost_with_view(q, c, cat);
    if (with < best) {
      best = with;
      want = c.id;
    }
  }
  ASSERT_TRUE(d.create);
  EXPECT_EQ(d.create->id, want);
}

TEST(Recycler, PicksMostExpensive) {
  const SchemaCatalog cat = toy_catalog();
  RecyclerPolicy p(cat, {});
  DatabaseState db(1 << 20);
  const std::vector<View> cands{make_view(ViewId{0}, PredicateSet{PredicateId{1}}, cat),
                                make_view(ViewId{1}, PredicateSet{PredicateId{1}, PredicateId{2}}, cat)};
  ASSERT_EQ(cands[0].creation_cost, 500);
  ASSERT_EQ(cands[1].creation_cost, 950);
  const Query q = query_of(PredicateSet{PredicateId{1}, PredicateId{2}});
  const Decision d = p.decide(StepContext{0, q, db, cat}, cands);
  ASSERT_TRUE(d.create);
  EXPECT_EQ(d.create->id, ViewId{1});
}

TEST_F(Chain, RecyclerScoresAndAdmission) {
  RecyclerPolicy p(cat, {});
  install(p, v[0], 0);
  install(p, v[1], 0);
  const double start = static_cast<double>(v[0].creation_cost);
  use(p, v[0], 1);
  EXPECT_DOUBLE_EQ(p.scores().at(v[0].id), 2.0 * start);
  EXPECT_DOUBLE_EQ(p.scores().at(v[1].id), 0.95 * start);
  use(p, v[1], 2);
  EXPECT_DOUBLE_EQ(p.scores().at(v[0].id), 1.9 * start);
  EXPECT_DOUBLE_EQ(p.scores().at(v[1].id), 1.9 * start);
  // Every resident outscores the equally expensive newcomer: nothing moves.
  const Decision d = offer(p, v[2], 3);
  EXPECT_FALSE(d.create);
  EXPECT_TRUE(d.victims.empty());
}

TEST(Recycler, NoiseOneMatchesTrueCosts) {
  const SchemaCatalog cat = desk_catalog();
  RecyclerConfig est;
  est.estimated = true;
  est.noise_seed = 5;
  RecyclerPolicy a(cat, {}), b(cat, est);
  ViewRegistry reg(cat);
  for (const auto& t : connected_templates(cat, 1, 3)) {
    if (cat.relations_of(t.predicates).size() < 2) continue;
    const View& view = reg.intern(t.predicates);
    EXPECT_EQ(a.cost_of(view), b.cost_of(view));
  }
}

TEST(Belady, SingleServingViewIsKept) {
  const SchemaCatalog cat = toy_catalog();
  std::vector<Query> trace;
  for (int i = 0; i < 20; ++i) trace.push_back(query_of(PredicateSet{PredicateId{1}}, i));
  ViewRegistry reg(cat);
  BeladyPolicy p(trace, reg, cat, 4);
  SimulationOptions opt;
  opt.capacity = 1 << 20;
  const auto res = simulate(trace, cat, reg, p, opt);
  EXPECT_EQ(res.creations, 1);
  EXPECT_EQ(res.capacity_evictions, 0);
}

TEST(Belady, AmpleCapacityNeverEvicts) {
  const SchemaCatalog cat = desk_catalog();
  WorkloadSpec spec;
  spec.kind = WorkloadKind::kRzipf;
  spec.length = 300;
  spec.seed = 3;
  spec.templates = connected_templates(cat, 1, 3);
  const auto trace = generate(spec, cat);
  ViewRegistry reg(cat);
  BeladyPolicy p(trace, reg, cat, 4);
  SimulationOptions opt;
  opt.capacity = std::int64_t{1} << 50;
  const auto res = simulate(trace, cat, reg, p, opt);
  EXPECT_EQ(res.capacity_evictions, 0);
  EXPECT_GT(res.creations, 0);
}

TEST(Belady, TraceMismatchThrows) {
  const SchemaCatalog cat = toy_catalog();
  std::vector<Query> trace{query_of(PredicateSet{PredicateId{1}}, 0)};
  ViewRegistry reg(cat);
  BeladyPolicy p(trace, reg, cat, 4);
  std::vector<Query> other{query_of(PredicateSet{PredicateId{2}}, 0)};
  SimulationOptions opt;
  opt.capacity = 1 << 20;
  EXPECT_THROW(simulate(other, cat, reg, p, opt), InvariantViolation);
}

}  // namespace
}  // namespace omsim
