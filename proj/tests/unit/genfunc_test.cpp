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

#include "mssvs/genfunc.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "mssvs/error.hpp"

namespace mssvs::genfunc {
namespace {

using testing::Gen;
using testing::symbolic_derivative;
using testing::symbolic_scale;
using testing::Term;

double factorial(int n) { return std::tgamma(n + 1.0); }

TEST(ExtractDerivative, ZeroExponentGivesOne) {
    EXPECT_EQ(extract_derivative(QuadraticExponent(2), MultiIndex{0, 0}), Complex(1.0));
}

TEST(ExtractDerivative, HalfSquare) {
    QuadraticExponent e(1);
    e.add_monomial(0, 0, 0.5);
    EXPECT_NEAR(std::abs(extract_derivative(e, MultiIndex{2}) - 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(e.quadratic()(0, 0).real(), 1.0);
}

TEST(ExtractDerivative, CrossTermGivesFactorial) {
    QuadraticExponent e(2);
    e.add_monomial(0, 1, 1.0);
    for (int m = 0; m <= 12; ++m) {
        const Complex got = extract_derivative(e, MultiIndex{m, m});
        EXPECT_NEAR(got.real() / factorial(m), 1.0, 1e-13) << "m=" << m;
        EXPECT_EQ(got.imag(), 0.0);
    }
}

TEST(ExtractDerivative, FirstOrderPicksLinearCoefficient) {
    const Complex b(0.3, -1.7);
    QuadraticExponent e(1);
    e.add_monomial(0, 0, 0.5).add_linear(0, b);
    EXPECT_NEAR(std::abs(extract_derivative(e, MultiIndex{1}) - b), 0.0, 1e-15);
}

TEST(ExtractDerivative, ConstantMultipliesResult) {
    QuadraticExponent e(2);
    e.add_monomial(0, 1, 1.0).add_constant(Complex(0.0, std::numbers::pi));
    EXPECT_NEAR(std::abs(extract_derivative(e, MultiIndex{3, 3}) + 6.0), 0.0, 1e-13);
}

TEST(ExtractDerivative, RandomThreeVariableMatchesSymbolic) {
    const std::vector<Term> terms = {{0, 0, {0.4, 0.1}}, {0, 1, {-0.7, 0.0}}, {1, 2, {0.2, 0.5}},
                                     {2, 2, {-0.3, 0.0}}, {1, -1, {0.9, -0.2}}, {-1, -1, {0.1, 0.0}}};
    const auto e = testing::to_exponent(3, terms);
    const Complex want = symbolic_derivative(3, terms, {2, 1, 1});
    EXPECT_LT(testing::relative_error(extract_derivative(e, MultiIndex{2, 1, 1}), want), 1e-13);
}

TEST(ExtractDerivative, RejectsMismatchedIndex) {
    EXPECT_THROW((void)extract_derivative(QuadraticExponent(2), MultiIndex{1}), ContractViolation);
    EXPECT_THROW((void)extract_derivative(QuadraticExponent(2), MultiIndex{1, -1}), ContractViolation);
}

TEST(ExtractDerivative, OrderAboveCapIsCapacityError) {
    QuadraticExponent e(2);
    e.add_monomial(0, 1, 1.0);
    EXPECT_THROW((void)extract_derivative(e, MultiIndex{33, 32}), CapacityError);
    SeriesOptions raised;
    raised.max_total_order = 80;
    EXPECT_NO_THROW((void)extract_derivative(e, MultiIndex{33, 32}, raised));
    SeriesOptions tiny_table;
    tiny_table.max_table_size = 10;
    EXPECT_THROW((void)extract_derivative(e, MultiIndex{4, 4}, tiny_table), CapacityError);
}

TEST(QuadraticExponentTest, SymmetrizesOnConstruction) {
    Eigen::MatrixXcd a(2, 2);
    a << 1.0, 2.0, 0.0, 3.0;
    const QuadraticExponent e(a, Eigen::VectorXcd::Zero(2));
    EXPECT_EQ(e.quadratic()(0, 1), e.quadratic()(1, 0));
    EXPECT_EQ(e.quadratic()(0, 1), Complex(1.0));
    const std::array<Complex, 2> x = {Complex(1.0), Complex(2.0)};
    // ½(1·1 + 2·1·2·1 + 3·4) = 8.5
    EXPECT_NEAR(std::abs(e.evaluate(x) - 8.5), 0.0, 1e-14);
}

TEST(ExpSeriesTest, CoefficientsAndDerivativesDifferByFactorials) {
    QuadraticExponent e(2);
    e.add_monomial(0, 0, 0.3).add_monomial(0, 1, -0.8).add_linear(1, 0.25);
    const ExpSeries s(e, MultiIndex{4, 3});
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 3; ++j) {
            const Complex c = s.coefficient(MultiIndex{i, j});
            const Complex d = s.derivative(MultiIndex{i, j});
            EXPECT_NEAR(std::abs(d - c * factorial(i) * factorial(j)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(d - extract_derivative(e, MultiIndex{i, j})), 0.0, 1e-12);
        }
    }
    EXPECT_THROW((void)s.coefficient(MultiIndex{5, 0}), ContractViolation);
}

TEST(DerivativeInParameters, BilinearCrossTerm) {
    // E = μβ* + νβ with parameters (β, β*).
    Eigen::MatrixXcd coupling(2, 2);
    coupling << 0.0, 1.0, 1.0, 0.0;
    const AffineExponentFamily family(QuadraticExponent(2), coupling, Eigen::VectorXcd::Zero(2),
                                      Eigen::MatrixXcd::Zero(2, 2));
    const Complex beta(1.0, 0.0);
    const std::array<Complex, 2> params = {beta, std::conj(beta)};
    EXPECT_NEAR(std::abs(derivative_in_parameters(family, MultiIndex{1, 1}, params) - 1.0), 0.0, 1e-15);

    const Complex beta2(0.3, -0.4);
    const std::array<Complex, 2> params2 = {beta2, std::conj(beta2)};
    EXPECT_NEAR(std::abs(derivative_in_parameters(family, MultiIndex{1, 1}, params2) - std::norm(beta2)), 0.0,
                1e-15);
}

TEST(DerivativeInParameters, ZeroParametersReduceToBase) {
    Gen gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto terms = gen.exponent_terms(2, 0.8);
        const auto base = testing::to_exponent(2, terms);
        Eigen::MatrixXcd coupling(2, 2);
        coupling << gen.complex(1.0), gen.complex(1.0), gen.complex(1.0), gen.complex(1.0);
        Eigen::VectorXcd c1(2);
        c1 << gen.complex(1.0), gen.complex(1.0);
        Eigen::MatrixXcd c2(2, 2);
        c2 << gen.complex(1.0), 0.2, 0.2, gen.complex(1.0);
        const AffineExponentFamily family(base, coupling, c1, c2);
        const std::array<Complex, 2> zero = {Complex(0.0), Complex(0.0)};
        const MultiIndex idx{gen.integer(0, 3), gen.integer(0, 3)};
        EXPECT_EQ(derivative_in_parameters(family, idx, zero), extract_derivative(base, idx));
    }
}

TEST(DerivativeInParameters, MatchesInstantiatedExponent) {
    Gen gen(12);
    const auto base = testing::to_exponent(2, gen.exponent_terms(2, 0.6));
    Eigen::MatrixXcd coupling(2, 2);
    coupling << 0.5, -0.2, 0.1, 0.7;
    Eigen::VectorXcd c1(2);
    c1 << 0.0, 0.3;
    Eigen::MatrixXcd c2(2, 2);
    c2 << 0.1, -0.4, -0.4, 0.1;
    const AffineExponentFamily family(base, coupling, c1, c2);
    const std::array<Complex, 2> p = {Complex(0.4, 0.2), Complex(0.4, -0.2)};
    const QuadraticExponent inst = family.instantiate(p);
    // Linear part b₀ + Bp, constant c₀ + c₁ᵀp + ½pᵀCp.
    const Eigen::Vector2cd pv(p[0], p[1]);
    const Eigen::VectorXcd want_linear = base.linear() + coupling * pv;
    const Complex want_const =
        base.constant() + (c1.transpose() * pv)(0) + 0.5 * (pv.transpose() * c2 * pv)(0);
    EXPECT_LT((inst.linear() - want_linear).norm(), 1e-15);
    EXPECT_NEAR(std::abs(inst.constant() - want_const), 0.0, 1e-15);
    EXPECT_EQ(derivative_in_parameters(family, MultiIndex{2, 1}, p), extract_derivative(inst, MultiIndex{2, 1}));
}

// ---------------------------------------------------------------------------
// Properties over random exponents.

TEST(GenfuncProperties, MatchesSymbolicOracle) {
    Gen gen(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = gen.integer(1, 3);
        const auto terms = gen.exponent_terms(n, 1.0);
        const auto orders = gen.orders(n, 6);
        const Complex want = symbolic_derivative(static_cast<std::size_t>(n), terms, orders);
        const double scale = symbolic_scale(static_cast<std::size_t>(n), terms, orders);
        const Complex got = extract_derivative(testing::to_exponent(n, terms), MultiIndex(orders));
        EXPECT_LE(std::abs(got - want), 1e-12 * std::max(std::abs(want), 1e-3 * scale)) << "trial " << trial;
    }
}

TEST(GenfuncProperties, PermutationSymmetry) {
    Gen gen(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3;
        auto terms = gen.exponent_terms(n, 1.0);
        const auto orders = gen.orders(n, 7);
        std::array<int, 3> perm = {0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), gen.engine());

        auto permuted = terms;
        for (Term &t : permuted) {
            if (t.i >= 0) {
                t.i = perm[static_cast<std::size_t>(t.i)];
            }
            if (t.j >= 0) {
                t.j = perm[static_cast<std::size_t>(t.j)];
            }
        }
        std::vector<int> permuted_orders(3);
        for (int v = 0; v < n; ++v) {
            permuted_orders[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] =
                orders[static_cast<std::size_t>(v)];
        }
        const Complex a = extract_derivative(testing::to_exponent(n, terms), MultiIndex(orders));
        const Complex b = extract_derivative(testing::to_exponent(n, permuted), MultiIndex(permuted_orders));
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << "trial " << trial;
    }
}

TEST(GenfuncProperties, ConstantShiftScalesExactly) {
    Gen gen(8);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = gen.integer(1, 3);
        const auto e = testing::to_exponent(n, gen.exponent_terms(n, 1.0));
        const MultiIndex idx(gen.orders(n, 6));
        const Complex dc = gen.complex(1.0);
        QuadraticExponent shifted = e;
        shifted.add_constant(dc);
        const Complex a = extract_derivative(e, idx) * std::exp(dc);
        const Complex b = extract_derivative(shifted, idx);
        EXPECT_LE(std::abs(a - b), 1e-13 * std::max(1.0, std::abs(a)));
    }
}

TEST(GenfuncProperties, OddOrderVanishesWithoutLinearPart) {
    Gen gen(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = gen.integer(1, 3);
        auto terms = gen.exponent_terms(n, 1.0);
        std::erase_if(terms, [](const Term &t) { return t.i >= 0 && t.j < 0; });
        auto orders = gen.orders(n, 7);
        if (std::accumulate(orders.begin(), orders.end(), 0) % 2 == 0) {
            ++orders[0];
        }
        EXPECT_EQ(extract_derivative(testing::to_exponent(n, terms), MultiIndex(orders)), Complex(0.0));
    }
}

TEST(GenfuncProperties, VariableScaling) {
    Gen gen(10);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = gen.integer(1, 3);
        const auto terms = gen.exponent_terms(n, 1.0);
        const auto orders = gen.orders(n, 6);
        const double lam = gen.uniform(0.3, 2.0);
        auto scaled = terms;
        for (Term &t : scaled) {
            if (t.i >= 0 && t.j >= 0) {
                t.coeff *= lam * lam;
            } else if (t.i >= 0) {
                t.coeff *= lam;
            }
        }
        const int total = std::accumulate(orders.begin(), orders.end(), 0);
        const Complex a = extract_derivative(testing::to_exponent(n, terms), MultiIndex(orders)) * std::pow(lam, total);
        const Complex b = extract_derivative(testing::to_exponent(n, scaled), MultiIndex(orders));
        const double scale = symbolic_scale(static_cast<std::size_t>(n), scaled, orders);
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(std::abs(b), 1e-3 * scale)) << "trial " << trial;
    }
}

} // namespace
} // namespace mssvs::genfunc
