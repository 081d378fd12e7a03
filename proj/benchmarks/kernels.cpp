// Copyright 2026 The mmes Authors
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

#include <benchmark/benchmark.h>

#include <vector>

#include "mmes/anneal.hpp"
#include "mmes/canonical.hpp"
#include "mmes/entanglement.hpp"
#include "mmes/partition.hpp"
#include "mmes/qstate.hpp"

namespace {

using namespace mmes;

void BM_Purity(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 1);
  const auto b = balanced_bipartitions(n).front();
  for (auto _ : st) benchmark::DoNotOptimize(purity(s, b));
}
BENCHMARK(BM_Purity)->DenseRange(4, 14, 2);

void BM_Potential(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 2);
  PotentialEvaluator ev(n);
  for (auto _ : st) benchmark::DoNotOptimize(ev.potential(s.amplitudes()));
  st.counters["bipartitions"] = static_cast<double>(ev.bipartitions().size());
}
BENCHMARK(BM_Potential)->DenseRange(4, 12, 1);

void BM_PotentialAndGradient(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 3);
  PotentialEvaluator ev(n);
  std::vector<cplx> grad(s.dim());
  for (auto _ : st) benchmark::DoNotOptimize(ev.potential_and_gradient(s.amplitudes(), grad));
}
BENCHMARK(BM_PotentialAndGradient)->DenseRange(4, 10, 2);

void BM_Reshape(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 4);
  const auto b = Bipartition::from_mask(n, 0x5555'5555u & ((1u << n) - 1));
  for (auto _ : st) benchmark::DoNotOptimize(reshape(s, b));
}
BENCHMARK(BM_Reshape)->DenseRange(8, 16, 4);

void BM_Perturb(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 5);
  Rng rng = make_stream(5, 1);
  for (auto _ : st) benchmark::DoNotOptimize(perturb(s, 0.1, rng));
}
BENCHMARK(BM_Perturb)->DenseRange(4, 12, 4);

void BM_MetropolisStep(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  CanonicalConfig c;
  c.beta = 50.0;
  c.steps = 1000;
  c.burn_in = 100;
  c.seed = 6;
  for (auto _ : st) benchmark::DoNotOptimize(metropolis_chain(n, c));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(c.steps));
}
BENCHMARK(BM_MetropolisStep)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Polish(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = haar_sample(n, 7);
  for (auto _ : st) benchmark::DoNotOptimize(polish(s));
}
BENCHMARK(BM_Polish)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
