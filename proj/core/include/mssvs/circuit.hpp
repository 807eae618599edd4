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
 * The lossy photon-subtraction circuit as a chain of Gaussian
 * characteristic-function (CF) maps:
 *
 *   SVS ⊗ |0⟩  →  loss(η₁) on a  →  beam splitter(T)  →  loss(η₂) on b  →  detect m on b.
 *
 * Every stage stays inside a six-weight Gaussian family, so each map is a
 * linear transformation of those weights. The heralding stage is not a CF map;
 * its content lives in the scalar coefficient set consumed by observables.
 */

#include <complex>
#include <string>

namespace mssvs::circuit {

using Complex = std::complex<double>;

/// The five user knobs of the scheme.
struct CircuitParams {
    double r = 0.0;    ///< input squeezing parameter, r ≥ 0
    double eta1 = 0.0; ///< loss factor on mode a before the beam splitter, in [0, 1]
    double eta2 = 0.0; ///< loss factor on mode b before detection, in [0, 1]
    double T = 1.0;    ///< beam-splitter transmissivity, in [0, 1]
    int m = 0;         ///< number of photons detected in mode b

    /// Throws DomainError naming the first offending field.
    void validate() const;
    [[nodiscard]] std::string describe() const;
};

enum class Mode { a, b };

/// χ(α, β) = exp( w_aa|α|² + w_as(α² + α*²) + w_bb|β|² + w_bs(β² + β*²)
///               + w_x(αβ + α*β*) + w_y(αβ* + α*β) ).
///
/// Real weights make χ real-valued and χ(−α, −β) = χ(α, β)*, and the absence of
/// a constant term gives χ(0, 0) = 1.
struct TwoModeGaussianCF {
    double w_aa = 0.0;
    double w_as = 0.0;
    double w_bb = 0.0;
    double w_bs = 0.0;
    double w_x = 0.0;
    double w_y = 0.0;

    [[nodiscard]] Complex operator()(Complex alpha, Complex beta) const;
    [[nodiscard]] double max_abs_difference(const TwoModeGaussianCF &other) const;
};

/// CF of the squeezed vacuum on mode a times vacuum on mode b.
[[nodiscard]] TwoModeGaussianCF stage1_cf(const CircuitParams &params);

/// Pure-loss channel on one mode: χ_out(α) = χ_in(√(1−η) α) e^{−η|α|²/2}.
[[nodiscard]] TwoModeGaussianCF apply_loss(const TwoModeGaussianCF &cf, Mode mode, double eta);

/// Real mode rotation by an arbitrary angle θ. The CF arguments transform as
///   α → cos θ α + sin θ β,  β → cos θ β − sin θ α,
/// which is the Heisenberg picture of a a → cos θ a + sin θ b mixer.
[[nodiscard]] TwoModeGaussianCF apply_mode_mixing(const TwoModeGaussianCF &cf, double theta);

/// Beam splitter with transmissivity T = cos²θ, θ ∈ [0, π/2].
[[nodiscard]] TwoModeGaussianCF apply_beamsplitter(const TwoModeGaussianCF &cf, double T);

/// All four CF stages of the circuit (stage 5 is the heralded single mode).
struct StageCFs {
    TwoModeGaussianCF stage1;
    TwoModeGaussianCF stage2;
    TwoModeGaussianCF stage3;
    TwoModeGaussianCF stage4;
};

[[nodiscard]] StageCFs propagate(const CircuitParams &params);

/// Scalar coefficients shared by the closed-form observables.
struct DerivedCoefficients {
    double lambda = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau3 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double eps4 = 0.0;
    double eps5 = 0.0;
    double eps6 = 0.0;
    double eps7 = 0.0;
    double eps8 = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa3 = 0.0;
    double kappa4 = 0.0;
    double kappa5 = 0.0;
    double kappa6 = 0.0;
    double kappa7 = 0.0;
    double kappa8 = 0.0;
    double kappa9 = 0.0;
};

/// Computes every coefficient and checks eps4, kappa4, kappa9 > 0.
/// Throws DomainError (naming the failing discriminant) otherwise.
[[nodiscard]] DerivedCoefficients derived_coefficients(const CircuitParams &params);

/// Stage-3 CF written directly in terms of λ and τ₁..τ₃.
[[nodiscard]] TwoModeGaussianCF stage3_from_coefficients(const DerivedCoefficients &coeffs);

} // namespace mssvs::circuit
