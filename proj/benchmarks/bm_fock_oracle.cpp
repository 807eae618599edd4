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

#include "mssvs/fock_oracle.hpp"

namespace {

namespace fock = mssvs::fock;

void BM_SimulateFixedCutoff(benchmark::State &state) {
    fock::OracleConfig config;
    config.cutoff = static_cast<int>(state.range(0));
    config.auto_escalate = false;
    const mssvs::circuit::CircuitParams p{0.7, 0.1, 0.1, 0.9, 2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fock::simulate(p, config));
    }
}
BENCHMARK(BM_SimulateFixedCutoff)->Arg(48)->Arg(80)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_SimulateStagesDense(benchmark::State &state) {
    const mssvs::circuit::CircuitParams p{0.3, 0.1, 0.1, 0.9, 1};
    const int cutoff = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fock::simulate_stages(p, cutoff));
    }
}
BENCHMARK(BM_SimulateStagesDense)->Arg(18)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_DisplacementMatrix(benchmark::State &state) {
    const int cutoff = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fock::displacement_matrix({1.2, -0.4}, cutoff));
    }
}
BENCHMARK(BM_DisplacementMatrix)->Arg(40)->Arg(120);

void BM_OracleWigner(benchmark::State &state) {
    const auto res = fock::simulate({0.7, 0.1, 0.1, 0.9, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(fock::wigner(*res.state, 0.4, -0.3));
    }
}
BENCHMARK(BM_OracleWigner);

} // namespace
