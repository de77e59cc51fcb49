// Copyright 2026 The repgraph Authors
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

#include "repgraph/graph.hpp"
#include "repgraph/synth.hpp"
#include "repgraph/telemetry.hpp"

namespace repgraph {
namespace {

void BM_IngestRegion(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.num_orgs = static_cast<std::size_t>(state.range(0));
  cfg.num_batches = 6;
  const SimulatedRegion region = generate(cfg);
  std::size_t records = 0;
  for (const auto& b : region.batches) records += b.records.size();
  for (auto _ : state) {
    ThreatGraph graph;
    SignalLedger ledger;
    for (const auto& b : region.batches) apply_batch(graph, b, &ledger);
    benchmark::DoNotOptimize(graph.num_edges());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records));
}
BENCHMARK(BM_IngestRegion)->Arg(20)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_ExportSparse(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.num_orgs = 150;
  cfg.num_batches = 6;
  const SimulatedRegion region = generate(cfg);
  ThreatGraph graph;
  for (const auto& b : region.batches) apply_batch(graph, b);
  const Hours now = region.batches.back().batch_end;
  for (auto _ : state) benchmark::DoNotOptimize(graph.to_sparse(now));
}
BENCHMARK(BM_ExportSparse)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace repgraph

BENCHMARK_MAIN();
