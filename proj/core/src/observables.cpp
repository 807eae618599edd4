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
#include "mssvs/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mssvs/error.hpp"

namespace mssvs::observables {

namespace {

using genfunc::AffineExponentFamily;
using genfunc::ExpSeries;
using genfunc::MultiIndex;
using genfunc::QuadraticExponent;

// Variable slots shared by the exponents below.
constexpr std::size_t kMu = 0;
constexpr std::size_t kNu = 1;
constexpr std::size_t kF = 2; // a† slot (moments) or s slot (photon number)
constexpr std::size_t kG = 3; // a slot (moments) or t slot (photon number)

constexpr double kProbabilitySlack = 1e-12;
constexpr double kPndSlack = 1e-10;
constexpr double kImagResidue = 1e-10;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

// Adds the herald-projector part shared by every exponent: (1 − ε₁/ε₄)μν + (ε₂/ε₄)(μ² + ν²).
void add_herald_terms(QuadraticExponent &e, const circuit::DerivedCoefficients &c, double mu_nu_extra,
                      double square_extra) {
    e.add_monomial(kMu, kNu, 1.0 - c.eps1 / c.eps4 + mu_nu_extra);
    e.add_monomial(kMu, kMu, c.eps2 / c.eps4 + square_extra);
    e.add_monomial(kNu, kNu, c.eps2 / c.eps4 + square_extra);
}

genfunc::SeriesOptions with_order(genfunc::SeriesOptions options, int order) {
    options.max_total_order = std::max(options.max_total_order, order);
    return options;
}

} // namespace

double GridSpec::x_at(int i) const { return nx == 1 ? x_min : x_min + dx() * i; }
double GridSpec::y_at(int j) const { return ny == 1 ? y_min : y_min + dy() * j; }
double GridSpec::dx() const { return nx > 1 ? (x_max - x_min) / (nx - 1) : 0.0; }
double GridSpec::dy() const { return ny > 1 ? (y_max - y_min) / (ny - 1) : 0.0; }

namespace exponents {

QuadraticExponent success(const circuit::DerivedCoefficients &c) {
    QuadraticExponent e(2);
    add_herald_terms(e, c, 0.0, 0.0);
    return e;
}

QuadraticExponent moment(const circuit::DerivedCoefficients &c) {
    QuadraticExponent e(4);
    add_herald_terms(e, c, 0.0, 0.0);
    const double e37 = c.eps3 * c.eps7 / c.eps4;
    const double e38 = c.eps3 * c.eps8 / c.eps4;
    e.add_monomial(kMu, kF, e37);
    e.add_monomial(kNu, kG, e37);
    e.add_monomial(kNu, kF, e38);
    e.add_monomial(kMu, kG, e38);
    e.add_monomial(kF, kG, c.lambda * c.lambda * c.tau1 + c.eps5 / c.eps4);
    const double sq = 0.5 * c.lambda * c.tau1 + c.eps6 / c.eps4;
    e.add_monomial(kF, kF, sq);
    e.add_monomial(kG, kG, sq);
    return e;
}

QuadraticExponent photon_number(const circuit::DerivedCoefficients &c) {
    QuadraticExponent e(4);
    const double k3sq_k4 = c.kappa3 * c.kappa3 / c.kappa4;
    add_herald_terms(e, c, k3sq_k4 * (c.kappa1 * c.kappa5 + 4.0 * c.kappa2 * c.kappa6),
                     -k3sq_k4 * (c.kappa1 * c.kappa6 + c.kappa2 * c.kappa5));
    e.add_monomial(kF, kG, 1.0 - c.kappa1 / c.kappa4);
    e.add_monomial(kF, kF, c.kappa2 / c.kappa4);
    e.add_monomial(kG, kG, c.kappa2 / c.kappa4);
    const double k7 = c.kappa3 / c.kappa4 * c.kappa7;
    const double k8 = c.kappa3 / c.kappa4 * c.kappa8;
    e.add_monomial(kMu, kG, k7); // μt
    e.add_monomial(kNu, kF, k7); // sν
    e.add_monomial(kMu, kF, k8); // μs
    e.add_monomial(kNu, kG, k8); // νt
    return e;
}

AffineExponentFamily wigner(const circuit::DerivedCoefficients &c) {
    QuadraticExponent base(2);
    const double k3sq_k9 = c.kappa3 * c.kappa3 / c.kappa9;
    add_herald_terms(base, c, k3sq_k9 * (4.0 * c.kappa2 * c.kappa6 + c.kappa1 * c.kappa5 - 0.5 * c.kappa5),
                     k3sq_k9 * (0.5 * c.kappa6 - c.kappa1 * c.kappa6 - c.kappa2 * c.kappa5));

    const double g = c.kappa1 / c.kappa9 - 0.5 / c.kappa9;
    const double two_k2 = 2.0 * c.kappa2 / c.kappa9;
    const double conj_weight = g * c.kappa3 * c.eps8 - two_k2 * c.kappa3 * c.eps7; // (νβ + μβ*)
    const double direct_weight = g * c.kappa3 * c.eps7 - two_k2 * c.kappa3 * c.eps8; // (μβ + νβ*)

    // Columns are the parameters (β, β*).
    Eigen::MatrixXcd coupling(2, 2);
    coupling << direct_weight, conj_weight, //
        conj_weight, direct_weight;
    Eigen::MatrixXcd envelope(2, 2);
    envelope << two_k2, -g, //
        -g, two_k2;
    return AffineExponentFamily(std::move(base), std::move(coupling), Eigen::VectorXcd::Zero(2), std::move(envelope));
}

} // namespace exponents

HeraldedState::HeraldedState(const CircuitParams &params, genfunc::SeriesOptions series)
    : params_(params), coeffs_(circuit::derived_coefficients(params)), series_(series) {
    const int m = params_.m;
    const Complex raw = genfunc::extract_derivative(exponents::success(coeffs_), MultiIndex{m, m},
                                                    with_order(series_, 2 * m));
    double p = raw.real() / (factorial(m) * std::sqrt(coeffs_.eps4));
    if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack || !std::isfinite(p)) {
        std::ostringstream os;
        os << "success probability " << p << " outside [0, 1] at " << params_.describe();
        throw NumericalError(os.str());
    }
    p_d_ = std::clamp(p, 0.0, 1.0);
}

void HeraldedState::require_state() const {
    if (!exists()) {
        throw UndefinedStateError("herald never fires (p_d = 0) at " + params_.describe());
    }
}

double HeraldedState::clamp_probability(double value, int n) const {
    if (value < -kPndSlack || value > 1.0 + kPndSlack || !std::isfinite(value)) {
        std::ostringstream os;
        os << "P(" << n << ") = " << value << " is not a probability at " << params_.describe();
        throw NumericalError(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

Complex HeraldedState::moment(int k, int l) const {
    require_state();
    if (k < 0 || l < 0) {
        throw ContractViolation("moment orders must be non-negative");
    }
    const int m = params_.m;
    const Complex d = genfunc::extract_derivative(exponents::moment(coeffs_), MultiIndex{m, m, k, l},
                                                  with_order(series_, 2 * m + k + l));
    return d / (factorial(m) * p_d_ * std::sqrt(coeffs_.eps4));
}

QuadratureVariances HeraldedState::variances() const {
    require_state();
    const int m = params_.m;
    const ExpSeries series(exponents::moment(coeffs_), MultiIndex{m, m, 2, 2}, with_order(series_, 2 * m + 4));
    const double norm = factorial(m) * p_d_ * std::sqrt(coeffs_.eps4);
    const auto mom = [&](int k, int l) { return series.derivative(MultiIndex{m, m, k, l}) / norm; };
    const Complex n_mean = mom(1, 1);
    const Complex a_dag = mom(1, 0);
    const Complex a_dag2 = mom(2, 0);
    const double common = n_mean.real() - std::norm(a_dag) + 0.5;
    const double squeeze = (a_dag2 - a_dag * a_dag).real();
    return {common + squeeze, common - squeeze};
}

double HeraldedState::pnd(int n) const {
    require_state();
    if (n < 0) {
        throw ContractViolation("photon number must be non-negative");
    }
    const int m = params_.m;
    const ExpSeries series(exponents::photon_number(coeffs_), MultiIndex{m, m, n, n},
                           with_order(series_, 2 * m + 2 * n));
    const double norm = p_d_ * std::sqrt(coeffs_.eps4 * coeffs_.kappa4);
    const double value = series.coefficient(MultiIndex{m, m, n, n}).real() * factorial(m) * factorial(n) / norm;
    return clamp_probability(value, n);
}

std::vector<double> HeraldedState::pnd_range(int max_n) const {
    require_state();
    if (max_n < 0) {
        throw ContractViolation("photon number must be non-negative");
    }
    const int m = params_.m;
    const ExpSeries series(exponents::photon_number(coeffs_), MultiIndex{m, m, max_n, max_n},
                           with_order(series_, 2 * m + 2 * max_n));
    const double norm = p_d_ * std::sqrt(coeffs_.eps4 * coeffs_.kappa4);
    const double m_fact = factorial(m);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_n) + 1);
    double n_fact = 1.0;
    for (int n = 0; n <= max_n; ++n) {
        if (n > 1) {
            n_fact *= n;
        }
        const double value = series.coefficient(MultiIndex{m, m, n, n}).real() * m_fact * n_fact / norm;
        out.push_back(clamp_probability(value, n));
    }
    return out;
}

PhotonDistribution HeraldedState::pnd_distribution(const PndOptions &options) const {
    require_state();
    if (options.max_n < 0) {
        throw ContractViolation("PndOptions::max_n must be non-negative");
    }
    PhotonDistribution dist;
    int n_max = std::min(16, options.max_n);
    for (;;) {
        std::vector<double> probs = pnd_range(n_max);
        double cumulative = 0.0;
        for (std::size_t n = 0; n < probs.size(); ++n) {
            cumulative += probs[n];
            if (cumulative >= 1.0 - options.tail_tolerance) {
                probs.resize(n + 1);
                dist.probabilities = std::move(probs);
                dist.cumulative = cumulative;
                dist.converged = true;
                return dist;
            }
        }
        if (n_max >= options.max_n) {
            dist.probabilities = std::move(probs);
            dist.cumulative = cumulative;
            dist.converged = false;
            return dist;
        }
        n_max = std::min(2 * n_max, options.max_n);
    }
}

WignerPoint HeraldedState::wigner(double x, double y) const {
    require_state();
    const int m = params_.m;
    const Complex beta = Complex{x, y} / std::numbers::sqrt2;
    const std::array<Complex, 2> point{beta, std::conj(beta)};
    const Complex d = genfunc::derivative_in_parameters(exponents::wigner(coeffs_), MultiIndex{m, m}, point,
                                                        with_order(series_, 2 * m));
    const Complex w = d / (std::numbers::pi * factorial(m) * p_d_ * std::sqrt(coeffs_.eps4 * coeffs_.kappa9));
    if (std::abs(w.imag()) > kImagResidue * std::max(1.0, std::abs(w.real()))) {
        std::ostringstream os;
        os << "Wigner value at (" << x << ", " << y << ") has imaginary residue " << w.imag();
        throw NumericalError(os.str());
    }
    return {x, y, w.real()};
}

std::vector<WignerPoint> HeraldedState::wigner_grid(const GridSpec &grid) const {
    require_state();
    if (grid.nx < 1 || grid.ny < 1) {
        throw ContractViolation("Wigner grid needs at least one point per axis");
    }
    std::vector<WignerPoint> points;
    points.reserve(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny));
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            points.push_back(wigner(grid.x_at(i), grid.y_at(j)));
        }
    }
    return points;
}

double success_probability(const CircuitParams &params) { return HeraldedState(params).success_probability(); }
Complex moment(const CircuitParams &params, int k, int l) { return HeraldedState(params).moment(k, l); }
QuadratureVariances variances(const CircuitParams &params) { return HeraldedState(params).variances(); }
double pnd(const CircuitParams &params, int n) { return HeraldedState(params).pnd(n); }
WignerPoint wigner(const CircuitParams &params, double x, double y) { return HeraldedState(params).wigner(x, y); }
std::vector<WignerPoint> wigner_grid(const CircuitParams &params, const GridSpec &grid) {
    return HeraldedState(params).wigner_grid(grid);
}

double grid_integral(const std::vector<WignerPoint> &points, const GridSpec &grid) {
    double sum = 0.0;
    for (const auto &p : points) {
        sum += p.w;
    }
    // d²β = dx dy / 2 for β = (x + iy)/√2.
    return 0.5 * sum * grid.dx() * grid.dy();
}

std::string_view to_string(SqueezingKind kind) noexcept {
    switch (kind) {
    case SqueezingKind::crossing:
        return "crossing";
    case SqueezingKind::always_squeezed:
        return "always-squeezed";
    case SqueezingKind::never_squeezed:
        return "never-squeezed";
    }
    return "unknown";
}

ThresholdResult squeezing_threshold(int m, double T, double eta1, double eta2, const ThresholdOptions &options) {
    if (!(options.r_min > 0.0) || !(options.r_max > options.r_min) || !(options.scan_step > 0.0) ||
        !(options.tolerance > 0.0)) {
        throw ContractViolation("squeezing_threshold: invalid scan bracket or tolerance");
    }
    const auto excess = [&](double r) {
        return HeraldedState(CircuitParams{r, eta1, eta2, T, m}).variances().var_p - 0.5;
    };

    ThresholdResult result;
    double lo = options.r_min;
    double f_lo = excess(lo);
    bool any_below = f_lo < 0.0;
    bool any_above = f_lo > 0.0;
    if (f_lo == 0.0) {
        result.r_c = lo;
        return result;
    }
    const auto steps = static_cast<int>(std::floor((options.r_max - options.r_min) / options.scan_step + 1e-9));
    for (int i = 1; i <= steps + 1; ++i) {
        const double hi = std::min(options.r_min + i * options.scan_step, options.r_max);
        const double f_hi = excess(hi);
        any_below = any_below || f_hi < 0.0;
        any_above = any_above || f_hi > 0.0;
        if (f_hi == 0.0) {
            result.r_c = hi;
            return result;
        }
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            double a = lo;
            double b = hi;
            const bool lo_negative = f_lo < 0.0;
            while (b - a > options.tolerance) {
                if (++result.iterations > options.max_iterations) {
                    std::ostringstream os;
                    os << "squeezing_threshold: bisection did not converge after " << options.max_iterations
                       << " iterations; bracket [" << a << ", " << b << "] for m=" << m << " T=" << T
                       << " eta1=" << eta1 << " eta2=" << eta2;
                    throw NumericalError(os.str());
                }
                const double mid = 0.5 * (a + b);
                const double f_mid = excess(mid);
                if (f_mid == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((f_mid < 0.0) == lo_negative) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            result.r_c = 0.5 * (a + b);
            return result;
        }
        lo = hi;
        f_lo = f_hi;
        if (hi >= options.r_max) {
            break;
        }
    }
    result.kind = any_below && !any_above ? SqueezingKind::always_squeezed : SqueezingKind::never_squeezed;
    return result;
}

namespace svs {

QuadratureVariances variances(double r) { return {0.5 * std::exp(2.0 * r), 0.5 * std::exp(-2.0 * r)}; }

double mean_photon_number(double r) {
    const double s = std::sinh(r);
    return s * s;
}

Complex moment(double r, int k, int l) {
    const double lam = std::tanh(r);
    const double denom = 1.0 - lam * lam;
    QuadraticExponent e(2);
    e.add_monomial(0, 0, 0.5 * lam / denom);
    e.add_monomial(1, 1, 0.5 * lam / denom);
    e.add_monomial(0, 1, lam * lam / denom);
    return genfunc::extract_derivative(e, MultiIndex{k, l}, with_order({}, k + l));
}

double pnd(double r, int n) {
    if (n < 0) {
        throw ContractViolation("photon number must be non-negative");
    }
    if (n % 2 != 0) {
        return 0.0;
    }
    const double lam = std::tanh(r);
    if (n == 0) {
        return std::sqrt(1.0 - lam * lam);
    }
    if (lam == 0.0) {
        return 0.0;
    }
    const int h = n / 2;
    // n! λⁿ (1 − λ²)^{1/2} / (2ⁿ ((n/2)!)²), in log space.
    const double log_value = std::lgamma(n + 1.0) + n * std::log(lam) + 0.5 * std::log1p(-lam * lam) -
                             n * std::numbers::ln2 - 2.0 * std::lgamma(h + 1.0);
    return std::exp(log_value);
}

double wigner(double r, double x, double y) {
    const double lam = std::tanh(r);
    const double denom = 1.0 - lam * lam;
    const double mod2 = 0.5 * (x * x + y * y);   // |β|²
    const double re_sq = (x * x - y * y);        // β² + β*²
    return 2.0 / std::numbers::pi *
           std::exp(-2.0 * (1.0 + lam * lam) / denom * mod2 + 2.0 * lam / denom * re_sq);
}

} // namespace svs

} // namespace mssvs::observables
