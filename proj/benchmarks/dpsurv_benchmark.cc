//
// Copyright 2026 The dpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include <benchmark/benchmark.h>

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>

#include "dpsurv/dataset.h"
#include "dpsurv/dp_mechanism.h"
#include "dpsurv/estimators.h"
#include "dpsurv/event_table.h"
#include "dpsurv/fixtures.h"
#include "dpsurv/harness.h"
#include "dpsurv/noise.h"

namespace dpsurv {
namespace {

const SurvivalDataset& Fixture(const char* name) {
  static std::map<std::string, SurvivalDataset> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    absl::StatusOr<SurvivalDataset> loaded = LoadFixture(name);
    if (!loaded.ok()) std::abort();
    it = cache.emplace(name, *std::move(loaded)).first;
  }
  return it->second;
}

void BM_BuildEventTable(benchmark::State& state) {
  const SurvivalDataset& ds = Fixture("mgus");
  for (auto _ : state) benchmark::DoNotOptimize(BuildEventTable(ds));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(ds.size()));
}
BENCHMARK(BM_BuildEventTable);

void BM_KaplanMeier(benchmark::State& state) {
  const EventTable table = BuildEventTable(Fixture("mgus"));
  for (auto _ : state) benchmark::DoNotOptimize(KaplanMeier(table));
}
BENCHMARK(BM_KaplanMeier);

void BM_GreenwoodBand(benchmark::State& state) {
  const EventTable table = BuildEventTable(Fixture("mgus"));
  const SurvivalCurve curve = KaplanMeier(table);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreenwoodBand(curve, table, 0.05));
  }
}
BENCHMARK(BM_GreenwoodBand);

void BM_DpEventTable(benchmark::State& state) {
  const SurvivalDataset& ds = Fixture("mgus");
  PrivacyParams params;
  params.epsilon = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(DpEventTable(ds, params));
    ++params.seed;
  }
}
BENCHMARK(BM_DpEventTable);

void BM_ExactLogrank(benchmark::State& state) {
  const auto groups = SplitByGroup(Fixture("cancer"));
  if (!groups.ok()) std::abort();
  for (auto _ : state) benchmark::DoNotOptimize(ExactLogrank(*groups));
}
BENCHMARK(BM_ExactLogrank);

void BM_DpLogrank(benchmark::State& state) {
  const auto groups = SplitByGroup(Fixture("cancer"));
  if (!groups.ok()) std::abort();
  PrivacyParams params;
  params.epsilon = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(DpLogrank(*groups, params));
    ++params.seed;
  }
}
BENCHMARK(BM_DpLogrank);

void BM_LaplaceSample(benchmark::State& state) {
  NoiseSource source(1);
  for (auto _ : state) benchmark::DoNotOptimize(LaplaceSample(2.0 / 3.0, source));
}
BENCHMARK(BM_LaplaceSample);

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig config;
  config.datasets = {"mgus"};
  config.runs = 10;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(RunExperiment(config));
}
BENCHMARK(BM_Experiment)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpsurv

BENCHMARK_MAIN();
