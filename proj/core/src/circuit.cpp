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
#include "mssvs/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mssvs/error.hpp"

namespace mssvs::circuit {

namespace {

void require_unit_interval(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << name << " = " << value << " lies outside [0, 1]";
        throw DomainError(os.str());
    }
}

void require_positive(double value, const char *name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "discriminant " << name << " = " << value << " is not positive";
        throw DomainError(os.str());
    }
}

} // namespace

void CircuitParams::validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        std::ostringstream os;
        os << "r = " << r << " must be a finite non-negative number";
        throw DomainError(os.str());
    }
    require_unit_interval(eta1, "eta1");
    require_unit_interval(eta2, "eta2");
    require_unit_interval(T, "T");
    if (m < 0) {
        throw DomainError("m = " + std::to_string(m) + " must be non-negative");
    }
}

std::string CircuitParams::describe() const {
    std::ostringstream os;
    os << "r=" << r << " T=" << T << " eta1=" << eta1 << " eta2=" << eta2 << " m=" << m;
    return os.str();
}

Complex TwoModeGaussianCF::operator()(Complex alpha, Complex beta) const {
    const double mod_a = std::norm(alpha);
    const double mod_b = std::norm(beta);
    const double sq_a = 2.0 * (alpha * alpha).real();
    const double sq_b = 2.0 * (beta * beta).real();
    const double cross_x = 2.0 * (alpha * beta).real();
    const double cross_y = 2.0 * (alpha * std::conj(beta)).real();
    return std::exp(Complex{w_aa * mod_a + w_as * sq_a + w_bb * mod_b + w_bs * sq_b + w_x * cross_x + w_y * cross_y});
}

double TwoModeGaussianCF::max_abs_difference(const TwoModeGaussianCF &o) const {
    return std::max({std::abs(w_aa - o.w_aa), std::abs(w_as - o.w_as), std::abs(w_bb - o.w_bb),
                     std::abs(w_bs - o.w_bs), std::abs(w_x - o.w_x), std::abs(w_y - o.w_y)});
}

TwoModeGaussianCF stage1_cf(const CircuitParams &params) {
    params.validate();
    const double lambda = std::tanh(params.r);
    const double denom = 1.0 - lambda * lambda;
    TwoModeGaussianCF cf;
    cf.w_aa = -(1.0 + lambda * lambda) / (2.0 * denom);
    cf.w_as = lambda / (2.0 * denom);
    cf.w_bb = -0.5;
    return cf;
}

TwoModeGaussianCF apply_loss(const TwoModeGaussianCF &cf, Mode mode, double eta) {
    require_unit_interval(eta, "eta");
    const double keep = 1.0 - eta;
    const double amp = std::sqrt(keep);
    TwoModeGaussianCF out = cf;
    if (mode == Mode::a) {
        out.w_aa = keep * cf.w_aa - 0.5 * eta;
        out.w_as = keep * cf.w_as;
    } else {
        out.w_bb = keep * cf.w_bb - 0.5 * eta;
        out.w_bs = keep * cf.w_bs;
    }
    out.w_x = amp * cf.w_x;
    out.w_y = amp * cf.w_y;
    return out;
}

TwoModeGaussianCF apply_mode_mixing(const TwoModeGaussianCF &cf, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cc = c * c;
    const double ss = s * s;
    const double cs = c * s;
    TwoModeGaussianCF out;
    out.w_aa = cc * cf.w_aa + ss * cf.w_bb - 2.0 * cs * cf.w_y;
    out.w_bb = ss * cf.w_aa + cc * cf.w_bb + 2.0 * cs * cf.w_y;
    out.w_as = cc * cf.w_as + ss * cf.w_bs - cs * cf.w_x;
    out.w_bs = ss * cf.w_as + cc * cf.w_bs + cs * cf.w_x;
    out.w_x = 2.0 * cs * (cf.w_as - cf.w_bs) + (cc - ss) * cf.w_x;
    out.w_y = cs * (cf.w_aa - cf.w_bb) + (cc - ss) * cf.w_y;
    return out;
}

TwoModeGaussianCF apply_beamsplitter(const TwoModeGaussianCF &cf, double T) {
    require_unit_interval(T, "T");
    return apply_mode_mixing(cf, std::acos(std::sqrt(T)));
}

StageCFs propagate(const CircuitParams &params) {
    StageCFs stages;
    stages.stage1 = stage1_cf(params);
    stages.stage2 = apply_loss(stages.stage1, Mode::a, params.eta1);
    stages.stage3 = apply_beamsplitter(stages.stage2, params.T);
    stages.stage4 = apply_loss(stages.stage3, Mode::b, params.eta2);
    return stages;
}

DerivedCoefficients derived_coefficients(const CircuitParams &params) {
    params.validate();
    DerivedCoefficients c;
    const double lam = std::tanh(params.r);
    const double lam2 = lam * lam;
    const double denom = 1.0 - lam2;
    const double keep1 = 1.0 - params.eta1;
    const double keep2 = 1.0 - params.eta2;
    const double T = params.T;

    c.lambda = lam;
    c.tau1 = keep1 * T / denom;
    c.tau2 = keep1 * (1.0 - T) / denom;
    c.tau3 = keep1 * std::sqrt(T * (1.0 - T)) / denom;

    c.eps1 = 1.0 + lam2 * c.tau2 * keep2;
    c.eps2 = 0.5 * lam * c.tau2 * keep2;
    c.eps3 = lam * c.tau3 * std::sqrt(keep2);
    c.eps4 = c.eps1 * c.eps1 - 4.0 * c.eps2 * c.eps2;
    require_positive(c.eps4, "eps4");

    const double e3sq = c.eps3 * c.eps3;
    c.eps5 = 4.0 * lam * c.eps2 * e3sq - (1.0 + lam2) * c.eps1 * e3sq;
    c.eps6 = (1.0 + lam2) * c.eps2 * e3sq - lam * c.eps1 * e3sq;
    c.eps7 = lam * c.eps1 - 2.0 * c.eps2;
    c.eps8 = c.eps1 - 2.0 * lam * c.eps2;

    c.kappa1 = 1.0 + lam2 * c.tau1 + c.eps5 / c.eps4;
    c.kappa2 = 0.5 * lam * c.tau1 + c.eps6 / c.eps4;
    c.kappa3 = c.eps3 / c.eps4;
    c.kappa4 = c.kappa1 * c.kappa1 - 4.0 * c.kappa2 * c.kappa2;
    require_positive(c.kappa4, "kappa4");

    const double e_sum = c.eps1 * c.eps1 + 4.0 * c.eps2 * c.eps2;
    c.kappa5 = 8.0 * lam * c.eps1 * c.eps2 - (1.0 + lam2) * e_sum;
    c.kappa6 = lam * e_sum - 2.0 * (1.0 + lam2) * c.eps1 * c.eps2;
    c.kappa7 = c.kappa1 * c.eps7 - 2.0 * c.kappa2 * c.eps8;
    c.kappa8 = c.kappa1 * c.eps8 - 2.0 * c.kappa2 * c.eps7;
    const double shifted = c.kappa1 - 0.5;
    c.kappa9 = shifted * shifted - 4.0 * c.kappa2 * c.kappa2;
    require_positive(c.kappa9, "kappa9");
    return c;
}

TwoModeGaussianCF stage3_from_coefficients(const DerivedCoefficients &c) {
    const double lam = c.lambda;
    TwoModeGaussianCF cf;
    cf.w_aa = -(0.5 + lam * lam * c.tau1);
    cf.w_as = 0.5 * lam * c.tau1;
    cf.w_bb = -(0.5 + lam * lam * c.tau2);
    cf.w_bs = 0.5 * lam * c.tau2;
    cf.w_x = lam * c.tau3;
    cf.w_y = -lam * lam * c.tau3;
    return cf;
}

} // namespace mssvs::circuit
