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


#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "repgraph/propagation.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {
namespace {

// Random graph with a spanning tree and `degree` edges per node on average.
CsrMatrix random_transition(std::size_t nodes, std::size_t degree) {
  SplitMix64 rng(17);
  std::vector<Triplet> edges;
  edges.reserve(nodes * degree / 2);
  for (std::uint32_t i = 1; i < nodes; ++i) {
    edges.push_back({static_cast<std::uint32_t>(rng.below(i)), i, rng.uniform(0.01, 1.0)});
  }
  while (edges.size() < nodes * degree / 2) {
    const auto a = static_cast<std::uint32_t>(rng.below(nodes));
    const auto b = static_cast<std::uint32_t>(rng.below(nodes));
    if (a != b) edges.push_back({a, b, rng.uniform(0.01, 1.0)});
  }
  return degree_normalize(CsrMatrix::symmetric_from_edges(nodes, edges));
}

LabelMatrix random_labels(std::size_t nodes) {
  SplitMix64 rng(18);
  LabelMatrix m;
  for (std::size_t i = 0; i < nodes; ++i) {
    const bool known = rng.bernoulli(0.1);
    const double s = known ? (rng.bernoulli(0.2) ? 0.95 : 0.05) : 0.5;
    m.rows.push_back({1.0 - s, s});
    m.mask.push_back(known ? 1 : 0);
  }
  return m;
}

void BM_Propagate(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  const CsrMatrix t = random_transition(nodes, 10);
  const LabelMatrix y0 = random_labels(nodes);
  for (auto _ : state) {
    auto r = propagate(t, y0, {10, 1e-300});
    benchmark::DoNotOptimize(r.labels.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * 10 * static_cast<std::int64_t>(t.nnz()));
}
BENCHMARK(BM_Propagate)->RangeMultiplier(10)->Range(1'000, 100'000)->Unit(benchmark::kMillisecond);

void BM_DegreeNormalize(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(19);
  std::vector<Triplet> edges;
  for (std::uint32_t i = 1; i < nodes; ++i) {
    edges.push_back({static_cast<std::uint32_t>(rng.below(i)), i, 1.0});
  }
  const CsrMatrix a = CsrMatrix::symmetric_from_edges(nodes, edges);
  for (auto _ : state) benchmark::DoNotOptimize(degree_normalize(a));
}
BENCHMARK(BM_DegreeNormalize)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace repgraph
