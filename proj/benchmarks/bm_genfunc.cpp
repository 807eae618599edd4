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

#include "mssvs/genfunc.hpp"

namespace {

using mssvs::genfunc::MultiIndex;
using mssvs::genfunc::QuadraticExponent;

// The success-probability exponent shape: μν plus μ² and ν².
QuadraticExponent herald_like() {
    QuadraticExponent e(2);
    e.add_monomial(0, 1, 0.37);
    e.add_monomial(0, 0, 0.11);
    e.add_monomial(1, 1, 0.11);
    return e;
}

void BM_ExtractDerivative_TwoVariables(benchmark::State &state) {
    const auto e = herald_like();
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mssvs::genfunc::extract_derivative(e, MultiIndex{m, m}));
    }
}
BENCHMARK(BM_ExtractDerivative_TwoVariables)->Arg(1)->Arg(3)->Arg(8)->Arg(16);

void BM_ExtractDerivative_FourVariables(benchmark::State &state) {
    QuadraticExponent e(4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
            e.add_monomial(i, j, 0.1 * static_cast<double>(i + j + 1));
        }
    }
    const int m = 3;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mssvs::genfunc::extract_derivative(e, MultiIndex{m, m, n, n}));
    }
}
BENCHMARK(BM_ExtractDerivative_FourVariables)->Arg(2)->Arg(10)->Arg(20);

} // namespace
