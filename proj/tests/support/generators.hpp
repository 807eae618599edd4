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

#pragma once

// Seeded random generators for property tests. Each test owns a Gen with a
// fixed seed so failures reproduce exactly.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "mssvs/circuit.hpp"
#include "mssvs/genfunc.hpp"
#include "symbolic_diff.hpp"

namespace mssvs::testing {

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    Complex complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

    circuit::CircuitParams params(double r_max = 1.2, int m_max = 3) {
        circuit::CircuitParams p;
        p.r = uniform(0.0, r_max);
        p.eta1 = uniform(0.0, 1.0);
        p.eta2 = uniform(0.0, 1.0);
        p.T = uniform(0.0, 1.0);
        p.m = integer(0, m_max);
        return p;
    }

    /// Random exponent as explicit terms: sparse quadratic, optional linear
    /// and constant parts.
    std::vector<Term> exponent_terms(int n_vars, double scale) {
        std::vector<Term> terms;
        for (int i = 0; i < n_vars; ++i) {
            for (int j = i; j < n_vars; ++j) {
                if (integer(0, 3) > 0) {
                    terms.push_back({i, j, complex(scale)});
                }
            }
            if (coin()) {
                terms.push_back({i, -1, complex(scale)});
            }
        }
        if (coin()) {
            terms.push_back({-1, -1, complex(0.5)});
        }
        return terms;
    }

    std::vector<int> orders(int n_vars, int max_total) {
        std::vector<int> k(static_cast<std::size_t>(n_vars), 0);
        const int total = integer(0, max_total);
        for (int t = 0; t < total; ++t) {
            ++k[static_cast<std::size_t>(integer(0, n_vars - 1))];
        }
        return k;
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline genfunc::QuadraticExponent to_exponent(int n_vars, const std::vector<Term> &terms) {
    genfunc::QuadraticExponent e(static_cast<std::size_t>(n_vars));
    for (const Term &t : terms) {
        if (t.i < 0) {
            e.add_constant(t.coeff);
        } else if (t.j < 0) {
            e.add_linear(static_cast<std::size_t>(t.i), t.coeff);
        } else {
            e.add_monomial(static_cast<std::size_t>(t.i), static_cast<std::size_t>(t.j), t.coeff);
        }
    }
    return e;
}

inline double relative_error(Complex got, Complex want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace mssvs::testing
