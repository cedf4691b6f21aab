// Copyright 2026 The CQSR Authors
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

#include "cqsr/css.hpp"
#include "cqsr/estimation.hpp"
#include "cqsr/mub.hpp"
#include "cqsr/protocol.hpp"
#include "cqsr/serialization.hpp"

namespace {

using namespace cqsr;

// Args: d, M.
void BM_EmbedProductState(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int M = static_cast<int>(state.range(1));
  const SymmetricBasis basis(d, M);
  Rng rng(1);
  const PureState psi = haar_random_state(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(embed_product_state(psi, basis));
  state.counters["dim"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_EmbedProductState)->Args({2, 3})->Args({3, 4})->Args({4, 6});

void BM_CssDefect(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int M = static_cast<int>(state.range(1));
  const WeightedStateSet set = mub_as_css(d);
  for (auto _ : state) benchmark::DoNotOptimize(css_defect(set, M));
}
BENCHMARK(BM_CssDefect)->Args({2, 3})->Args({3, 2})->Args({5, 2})->Args({7, 3})->Unit(benchmark::kMicrosecond);

void BM_CssSolve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int M = static_cast<int>(state.range(1));
  const int pool = static_cast<int>(state.range(2));
  Rng rng(3);
  const auto candidates = random_candidate_pool(d, pool, rng);
  for (auto _ : state) benchmark::DoNotOptimize(css_solve(candidates, d, M));
}
BENCHMARK(BM_CssSolve)->Args({2, 3, 40})->Args({3, 2, 200})->Args({3, 3, 400})->Unit(benchmark::kMillisecond);

void BM_ProbeUniversality(benchmark::State& state) {
  const WeightedStateSet set = mub_as_css(static_cast<int>(state.range(0)));
  const SymmetricOperator phat = universality_residual(set, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(probe_universality(phat));
}
BENCHMARK(BM_ProbeUniversality)->Args({2, 2})->Args({3, 2})->Unit(benchmark::kMicrosecond);

void BM_WireRoundTrip(benchmark::State& state) {
  const BroadcastRecord record{"session", 123456, 3, state_set_digest(mub_as_css(2))};
  for (auto _ : state) benchmark::DoNotOptimize(parse_record(serialize_record(record)));
}
BENCHMARK(BM_WireRoundTrip);

// Args: trials, users, workers.
void BM_RunSession(benchmark::State& state) {
  SessionConfig cfg;
  cfg.d = 2;
  cfg.M = 2;
  cfg.trials = static_cast<std::uint64_t>(state.range(0));
  cfg.N = static_cast<int>(state.range(1));
  cfg.workers = static_cast<int>(state.range(2));
  cfg.master_seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_session(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSession)->Args({100000, 1, 1})->Args({100000, 7, 1})->Args({100000, 7, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
