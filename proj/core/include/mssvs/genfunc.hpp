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

/**
 * @file
 * Derivatives at the origin of exponential-quadratic generating functions.
 *
 * Every observable of the heralded state is a mixed partial derivative of
 * exp(E(x)) at x = 0, where E(x) = ½xᵀAx + bᵀx + c is a complex quadratic
 * polynomial in a handful of formal variables. The derivative is read off
 * the Taylor coefficient of the truncated multivariate power series of
 * exp(E), which is exact up to floating-point rounding.
 */

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mssvs::genfunc {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxTotalOrder = 64;

/// Complex quadratic exponent ½xᵀAx + bᵀx + c over n formal variables.
///
/// The quadratic matrix is symmetrized on construction, so only the
/// symmetric part of whatever is passed in is retained.
class QuadraticExponent {
  public:
    explicit QuadraticExponent(std::size_t n_vars = 0);
    QuadraticExponent(Eigen::MatrixXcd quadratic, Eigen::VectorXcd linear, Complex constant = 0.0);

    [[nodiscard]] std::size_t n_vars() const noexcept { return static_cast<std::size_t>(linear_.size()); }
    [[nodiscard]] const Eigen::MatrixXcd &quadratic() const noexcept { return quadratic_; }
    [[nodiscard]] const Eigen::VectorXcd &linear() const noexcept { return linear_; }
    [[nodiscard]] Complex constant() const noexcept { return constant_; }

    /// Adds coeff·x_i·x_j to the exponent (coeff·x_i² when i == j).
    QuadraticExponent &add_monomial(std::size_t i, std::size_t j, Complex coeff);
    /// Adds coeff·x_i to the exponent.
    QuadraticExponent &add_linear(std::size_t i, Complex coeff);
    QuadraticExponent &add_constant(Complex coeff);

    /// E(x) evaluated at a point; x.size() must equal n_vars().
    [[nodiscard]] Complex evaluate(std::span<const Complex> x) const;

  private:
    Eigen::MatrixXcd quadratic_;
    Eigen::VectorXcd linear_;
    Complex constant_;
};

/// Derivative orders, one per formal variable.
struct MultiIndex {
    std::vector<int> orders;

    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> init) : orders(init) {}
    explicit MultiIndex(std::vector<int> o) : orders(std::move(o)) {}

    [[nodiscard]] std::size_t size() const noexcept { return orders.size(); }
    [[nodiscard]] int total() const noexcept;
    int operator[](std::size_t i) const { return orders[i]; }
};

struct SeriesOptions {
    /// Largest admissible Σ orders; exceeding it raises CapacityError.
    int max_total_order = kDefaultMaxTotalOrder;
    /// Largest number of stored coefficients in the truncation box.
    std::size_t max_table_size = std::size_t{1} << 26;
};

/// Taylor coefficients of exp(E) for every multi-index dominated by a
/// truncation box (componentwise ≤ max_orders).
///
/// The coefficients are filled by the recurrence x_i ∂F/∂x_i = F·x_i ∂E/∂x_i,
/// i.e. a_i F[a] = Σ_q q_i E_q F[a − q] over the monomials q of E − c. Each
/// entry costs one pass over the (at most n + n(n+1)/2) monomials of E.
class ExpSeries {
  public:
    ExpSeries(const QuadraticExponent &exponent, const MultiIndex &max_orders, const SeriesOptions &options = {});

    /// Coefficient of x^k in the expansion of exp(E), including the e^c factor.
    [[nodiscard]] Complex coefficient(const MultiIndex &k) const;
    /// ∂^{|k|} exp(E) / ∂x^k at x = 0.
    [[nodiscard]] Complex derivative(const MultiIndex &k) const;

    [[nodiscard]] const MultiIndex &box() const noexcept { return box_; }

  private:
    [[nodiscard]] std::size_t offset_of(const MultiIndex &k) const;

    MultiIndex box_;
    std::vector<std::size_t> strides_;
    std::vector<Complex> table_;
    Complex scale_;
};

/// ∂^{Σk} e^{E(x)} / ∂x₁^{k₁}…∂xₙ^{kₙ} evaluated at x = 0.
///
/// Throws ContractViolation when idx does not match the exponent dimension or
/// holds a negative order, and CapacityError when the total order exceeds
/// options.max_total_order.
[[nodiscard]] Complex extract_derivative(const QuadraticExponent &exponent, const MultiIndex &idx,
                                         const SeriesOptions &options = {});

/// Exponent family that is affine in a parameter vector p:
///   E_p(x) = ½xᵀAx + (b₀ + B p)ᵀx + c₀ + c₁ᵀp + ½pᵀCp.
///
/// Used where formal variables are differentiated while other symbols (a
/// phase-space point and its conjugate) stay as free parameters.
class AffineExponentFamily {
  public:
    AffineExponentFamily(QuadraticExponent base, Eigen::MatrixXcd linear_coupling,
                         Eigen::VectorXcd constant_linear, Eigen::MatrixXcd constant_quadratic);

    [[nodiscard]] std::size_t n_params() const noexcept { return static_cast<std::size_t>(constant_linear_.size()); }
    [[nodiscard]] const QuadraticExponent &base() const noexcept { return base_; }

    [[nodiscard]] QuadraticExponent instantiate(std::span<const Complex> params) const;

  private:
    QuadraticExponent base_;
    Eigen::MatrixXcd linear_coupling_;
    Eigen::VectorXcd constant_linear_;
    Eigen::MatrixXcd constant_quadratic_;
};

/// extract_derivative applied to the family member at the given parameters.
[[nodiscard]] Complex derivative_in_parameters(const AffineExponentFamily &family, const MultiIndex &idx,
                                               std::span<const Complex> params, const SeriesOptions &options = {});

} // namespace mssvs::genfunc
