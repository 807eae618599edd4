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

#include <limits>
#include <numeric>
#include <string>

#include "mssvs/error.hpp"

namespace mssvs::genfunc {

namespace {

// One monomial of E − c: coeff · x_v1^p1 · x_v2^p2 (v2 < 0 for a single variable).
struct Monomial {
    int v1 = 0;
    int p1 = 0;
    int v2 = -1;
    int p2 = 0;
    Complex coeff;
    std::size_t offset = 0;

    [[nodiscard]] int power_of(int v) const noexcept {
        if (v == v1) {
            return p1;
        }
        if (v == v2) {
            return p2;
        }
        return 0;
    }

    [[nodiscard]] bool dominated_by(const std::vector<int> &a) const noexcept {
        return a[v1] >= p1 && (v2 < 0 || a[v2] >= p2);
    }
};

void check_symmetric(const Eigen::MatrixXcd &m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (m(i, j) != m(j, i)) {
                throw ContractViolation("QuadraticExponent: quadratic part lost symmetry");
            }
        }
    }
}

void validate_index(const MultiIndex &idx, std::size_t n_vars, const SeriesOptions &options) {
    if (idx.size() != n_vars) {
        throw ContractViolation("multi-index has " + std::to_string(idx.size()) + " orders but the exponent has " +
                                std::to_string(n_vars) + " variables");
    }
    for (int k : idx.orders) {
        if (k < 0) {
            throw ContractViolation("multi-index orders must be non-negative");
        }
    }
    if (idx.total() > options.max_total_order) {
        throw CapacityError("total derivative order " + std::to_string(idx.total()) + " exceeds the configured cap " +
                            std::to_string(options.max_total_order));
    }
}

} // namespace

QuadraticExponent::QuadraticExponent(std::size_t n_vars)
    : quadratic_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_vars), static_cast<Eigen::Index>(n_vars))),
      linear_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_vars))), constant_(0.0) {}

QuadraticExponent::QuadraticExponent(Eigen::MatrixXcd quadratic, Eigen::VectorXcd linear, Complex constant)
    : quadratic_(std::move(quadratic)), linear_(std::move(linear)), constant_(constant) {
    if (quadratic_.rows() != quadratic_.cols() || quadratic_.rows() != linear_.size()) {
        throw ContractViolation("QuadraticExponent: quadratic part must be n×n with n = size of the linear part");
    }
    Eigen::MatrixXcd sym = (quadratic_ + quadratic_.transpose()) * 0.5;
    quadratic_ = sym;
    check_symmetric(quadratic_);
}

QuadraticExponent &QuadraticExponent::add_monomial(std::size_t i, std::size_t j, Complex coeff) {
    if (i >= n_vars() || j >= n_vars()) {
        throw ContractViolation("QuadraticExponent::add_monomial: variable index out of range");
    }
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    if (i == j) {
        quadratic_(ii, ii) += 2.0 * coeff;
    } else {
        quadratic_(ii, jj) += coeff;
        quadratic_(jj, ii) += coeff;
    }
    return *this;
}

QuadraticExponent &QuadraticExponent::add_linear(std::size_t i, Complex coeff) {
    if (i >= n_vars()) {
        throw ContractViolation("QuadraticExponent::add_linear: variable index out of range");
    }
    linear_(static_cast<Eigen::Index>(i)) += coeff;
    return *this;
}

QuadraticExponent &QuadraticExponent::add_constant(Complex coeff) {
    constant_ += coeff;
    return *this;
}

Complex QuadraticExponent::evaluate(std::span<const Complex> x) const {
    if (x.size() != n_vars()) {
        throw ContractViolation("QuadraticExponent::evaluate: point has the wrong dimension");
    }
    const Eigen::Map<const Eigen::VectorXcd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    const Complex quad = (v.transpose() * quadratic_ * v)(0, 0);
    return 0.5 * quad + (linear_.transpose() * v)(0, 0) + constant_;
}

int MultiIndex::total() const noexcept { return std::accumulate(orders.begin(), orders.end(), 0); }

ExpSeries::ExpSeries(const QuadraticExponent &exponent, const MultiIndex &max_orders, const SeriesOptions &options)
    : box_(max_orders), scale_(std::exp(exponent.constant())) {
    const std::size_t n = exponent.n_vars();
    validate_index(max_orders, n, options);

    strides_.resize(n);
    std::size_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        strides_[i] = size;
        const auto extent = static_cast<std::size_t>(max_orders[i]) + 1;
        if (size > options.max_table_size / extent) {
            throw CapacityError("series truncation box exceeds " + std::to_string(options.max_table_size) +
                                " coefficients");
        }
        size *= extent;
    }

    // Monomials of E − c that fit inside the box, bucketed by each variable they contain.
    const auto &a_mat = exponent.quadratic();
    const auto &b_vec = exponent.linear();
    std::vector<Monomial> monomials;
    const auto fits = [&](int v, int p) { return max_orders[static_cast<std::size_t>(v)] >= p; };
    for (int i = 0; i < static_cast<int>(n); ++i) {
        if (b_vec(i) != 0.0 && fits(i, 1)) {
            monomials.push_back({i, 1, -1, 0, b_vec(i), strides_[i]});
        }
        if (a_mat(i, i) != 0.0 && fits(i, 2)) {
            monomials.push_back({i, 2, -1, 0, 0.5 * a_mat(i, i), 2 * strides_[i]});
        }
        for (int j = i + 1; j < static_cast<int>(n); ++j) {
            if (a_mat(i, j) != 0.0 && fits(i, 1) && fits(j, 1)) {
                monomials.push_back({i, 1, j, 1, a_mat(i, j), strides_[i] + strides_[j]});
            }
        }
    }
    std::vector<std::vector<const Monomial *>> by_var(n);
    for (const auto &mono : monomials) {
        by_var[static_cast<std::size_t>(mono.v1)].push_back(&mono);
        if (mono.v2 >= 0) {
            by_var[static_cast<std::size_t>(mono.v2)].push_back(&mono);
        }
    }

    table_.assign(size, Complex{0.0});
    table_[0] = 1.0;
    std::vector<int> a(n, 0);
    // The linear index of a − q is strictly below that of a, so a single
    // increasing sweep sees every dependency before it is needed.
    for (std::size_t lin = 1; lin < size; ++lin) {
        std::size_t pivot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (++a[i] <= max_orders[i]) {
                break;
            }
            a[i] = 0;
        }
        while (a[pivot] == 0) {
            ++pivot;
        }
        Complex acc = 0.0;
        for (const Monomial *mono : by_var[pivot]) {
            if (mono->dominated_by(a)) {
                acc += static_cast<double>(mono->power_of(static_cast<int>(pivot))) * mono->coeff *
                       table_[lin - mono->offset];
            }
        }
        table_[lin] = acc / static_cast<double>(a[pivot]);
    }
}

std::size_t ExpSeries::offset_of(const MultiIndex &k) const {
    if (k.size() != box_.size()) {
        throw ContractViolation("ExpSeries: multi-index dimension mismatch");
    }
    std::size_t off = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0 || k[i] > box_[i]) {
            throw ContractViolation("ExpSeries: multi-index outside the truncation box");
        }
        off += static_cast<std::size_t>(k[i]) * strides_[i];
    }
    return off;
}

Complex ExpSeries::coefficient(const MultiIndex &k) const { return scale_ * table_[offset_of(k)]; }

Complex ExpSeries::derivative(const MultiIndex &k) const {
    Complex value = coefficient(k);
    for (int order : k.orders) {
        for (int f = 2; f <= order; ++f) {
            value *= static_cast<double>(f);
        }
    }
    return value;
}

Complex extract_derivative(const QuadraticExponent &exponent, const MultiIndex &idx, const SeriesOptions &options) {
    return ExpSeries(exponent, idx, options).derivative(idx);
}

AffineExponentFamily::AffineExponentFamily(QuadraticExponent base, Eigen::MatrixXcd linear_coupling,
                                           Eigen::VectorXcd constant_linear, Eigen::MatrixXcd constant_quadratic)
    : base_(std::move(base)), linear_coupling_(std::move(linear_coupling)),
      constant_linear_(std::move(constant_linear)), constant_quadratic_(std::move(constant_quadratic)) {
    const auto n = static_cast<Eigen::Index>(base_.n_vars());
    const auto p = constant_linear_.size();
    if (linear_coupling_.rows() != n || linear_coupling_.cols() != p || constant_quadratic_.rows() != p ||
        constant_quadratic_.cols() != p) {
        throw ContractViolation("AffineExponentFamily: coupling shapes do not match variable/parameter counts");
    }
}

QuadraticExponent AffineExponentFamily::instantiate(std::span<const Complex> params) const {
    if (params.size() != n_params()) {
        throw ContractViolation("AffineExponentFamily: expected " + std::to_string(n_params()) + " parameters, got " +
                                std::to_string(params.size()));
    }
    const Eigen::Map<const Eigen::VectorXcd> p(params.data(), static_cast<Eigen::Index>(params.size()));
    Eigen::VectorXcd linear = base_.linear() + linear_coupling_ * p;
    const Complex constant = base_.constant() + (constant_linear_.transpose() * p)(0, 0) +
                             0.5 * (p.transpose() * constant_quadratic_ * p)(0, 0);
    return QuadraticExponent(base_.quadratic(), std::move(linear), constant);
}

Complex derivative_in_parameters(const AffineExponentFamily &family, const MultiIndex &idx,
                                 std::span<const Complex> params, const SeriesOptions &options) {
    return extract_derivative(family.instantiate(params), idx, options);
}

} // namespace mssvs::genfunc
