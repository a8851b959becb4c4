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

#include <benchmark/benchmark.h>

#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/features.hpp"
#include "omsim/harness.hpp"
#include "omsim/planner.hpp"
#include "omsim/qnet.hpp"
#include "omsim/workload.hpp"

namespace {

using namespace omsim;

// Every desk template paired with every view it can use.
struct DeskPlans {
  SchemaCatalog catalog = desk_catalog();
  std::vector<Query> queries;
  std::vector<View> views;

  DeskPlans() {
    int id = 0;
    for (const QueryTemplate& t : connected_templates(catalog, 1, 3)) {
      Query q;
      q.id = id;
      q.predicates = t.predicates;
      queries.push_back(q);
      if (catalog.relations_of(t.predicates).size() >= 2) {
        views.push_back(make_view(ViewId{id}, t.predicates, catalog));
      }
      ++id;
    }
  }
};

void BM_BestPlan(benchmark::State& state) {
  const DeskPlans d;
  std::size_t i = 0;
  for (auto _ : state) {
    const Query& q = d.queries[i++ % d.queries.size()];
    benchmark::DoNotOptimize(best_plan(q, d.views, d.catalog));
  }
}
BENCHMARK(BM_BestPlan);

void BM_EncodePair(benchmark::State& state) {
  const DeskPlans d;
  const std::vector<View> resident(d.views.begin(), d.views.begin() + 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_pair(d.views.back(), resident, d.catalog));
  }
}
BENCHMARK(BM_EncodePair);

void BM_MlpForward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Mlp net({20, width, 1}, 7, 0.5);
  const std::vector<double> x(20, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_MlpForward)->Arg(16)->Arg(64);

void BM_Run(benchmark::State& state, const char* policy) {
  RunConfig c;
  c.policy = policy;
  c.workload = WorkloadKind::kAzipf;
  c.length = 500;
  c.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run(c).report.cumulative_latency);
}
BENCHMARK_CAPTURE(BM_Run, lfu, "lfu")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, dqm, "dqm")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, belady, "belady")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
