// Copyright 2026 The mssvs Authors
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

#include "mssvs/observables.hpp"

namespace {

using mssvs::circuit::CircuitParams;
using mssvs::observables::GridSpec;
using mssvs::observables::HeraldedState;

CircuitParams point(int m) { return {0.7, 0.1, 0.1, 0.9, m}; }

void BM_HeraldedState(benchmark::State &state) {
    const auto p = point(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        HeraldedState s(p);
        benchmark::DoNotOptimize(s.success_probability());
    }
}
BENCHMARK(BM_HeraldedState)->DenseRange(0, 3);

void BM_Variances(benchmark::State &state) {
    const HeraldedState s(point(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.variances());
    }
}
BENCHMARK(BM_Variances)->DenseRange(1, 3);

void BM_PndRange(benchmark::State &state) {
    const HeraldedState s(point(3));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.pnd_range(n));
    }
}
BENCHMARK(BM_PndRange)->Arg(10)->Arg(32)->Arg(64);

void BM_WignerGrid(benchmark::State &state) {
    const HeraldedState s(point(static_cast<int>(state.range(0))));
    const auto grid = GridSpec::square(3.0, 41);
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.wigner_grid(grid));
    }
    state.SetItemsProcessed(state.iterations() * 41 * 41);
}
BENCHMARK(BM_WignerGrid)->Arg(1)->Arg(3);

void BM_Threshold(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(mssvs::observables::squeezing_threshold(1, 0.9, 0.1, 0.1));
    }
}
BENCHMARK(BM_Threshold)->Unit(benchmark::kMillisecond);

} // namespace
