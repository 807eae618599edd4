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
 * Closed-form observables of the heralded multiphoton-subtracted squeezed
 * vacuum: success probability, normally ordered moments, quadrature
 * variances, squeezing threshold, photon-number distribution and Wigner
 * function. Each one is a derivative at the origin of an exponential-quadratic
 * generating function whose coefficients come from circuit::DerivedCoefficients.
 */

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "mssvs/circuit.hpp"
#include "mssvs/genfunc.hpp"

namespace mssvs::observables {

using circuit::CircuitParams;
using Complex = std::complex<double>;

struct QuadratureVariances {
    double var_x = 0.5; ///< Δ²X with X = (a + a†)/√2
    double var_p = 0.5; ///< Δ²P with P = (a − a†)/(√2 i)
};

/// Phase-space sample, β = (x + iy)/√2.
struct WignerPoint {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

/// Rectangular grid; points are ordered with x as the outer index.
struct GridSpec {
    double x_min = -3.0;
    double x_max = 3.0;
    double y_min = -3.0;
    double y_max = 3.0;
    int nx = 101;
    int ny = 101;

    static GridSpec square(double half_width, int resolution) {
        return {-half_width, half_width, -half_width, half_width, resolution, resolution};
    }
    [[nodiscard]] double x_at(int i) const;
    [[nodiscard]] double y_at(int j) const;
    [[nodiscard]] double dx() const;
    [[nodiscard]] double dy() const;
};

struct PndOptions {
    /// Stop once the cumulative probability reaches 1 − tail_tolerance.
    double tail_tolerance = 1e-10;
    /// Hard limit on the largest photon number evaluated.
    int max_n = 128;
};

struct PhotonDistribution {
    std::vector<double> probabilities; ///< P(0) … P(N)
    double cumulative = 0.0;
    bool converged = false; ///< cumulative reached 1 − tail_tolerance before max_n
};

/// Generating-function exponents behind each observable. Variables are
/// (μ, ν) for the herald projector, then (f, g) for a†/a or (s, t) for ⟨n|/|n⟩.
namespace exponents {
[[nodiscard]] genfunc::QuadraticExponent success(const circuit::DerivedCoefficients &c);
[[nodiscard]] genfunc::QuadraticExponent moment(const circuit::DerivedCoefficients &c);
[[nodiscard]] genfunc::QuadraticExponent photon_number(const circuit::DerivedCoefficients &c);
/// Parameters are (β, β*); the β-dependent Gaussian envelope sits in the constant.
[[nodiscard]] genfunc::AffineExponentFamily wigner(const circuit::DerivedCoefficients &c);
} // namespace exponents

/// The heralded output state for one parameter point. Coefficients and the
/// success probability are computed once on construction; every accessor is
/// const and safe to call concurrently.
class HeraldedState {
  public:
    explicit HeraldedState(const CircuitParams &params, genfunc::SeriesOptions series = {});

    [[nodiscard]] const CircuitParams &params() const noexcept { return params_; }
    [[nodiscard]] const circuit::DerivedCoefficients &coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] double success_probability() const noexcept { return p_d_; }
    /// False when the herald never fires (p_d = 0); state observables then throw.
    [[nodiscard]] bool exists() const noexcept { return p_d_ > 0.0; }

    /// ⟨a†^k a^l⟩ of the normalized state.
    [[nodiscard]] Complex moment(int k, int l) const;
    [[nodiscard]] QuadratureVariances variances() const;
    [[nodiscard]] double pnd(int n) const;
    [[nodiscard]] PhotonDistribution pnd_distribution(const PndOptions &options = {}) const;
    /// P(0) … P(max_n) in one series evaluation, without adaptive stopping.
    [[nodiscard]] std::vector<double> pnd_range(int max_n) const;
    [[nodiscard]] WignerPoint wigner(double x, double y) const;
    [[nodiscard]] std::vector<WignerPoint> wigner_grid(const GridSpec &grid) const;

  private:
    void require_state() const;
    [[nodiscard]] double clamp_probability(double value, int n) const;

    CircuitParams params_;
    circuit::DerivedCoefficients coeffs_;
    genfunc::SeriesOptions series_;
    double p_d_ = 0.0;
};

[[nodiscard]] double success_probability(const CircuitParams &params);
[[nodiscard]] Complex moment(const CircuitParams &params, int k, int l);
[[nodiscard]] QuadratureVariances variances(const CircuitParams &params);
[[nodiscard]] double pnd(const CircuitParams &params, int n);
[[nodiscard]] WignerPoint wigner(const CircuitParams &params, double x, double y);
[[nodiscard]] std::vector<WignerPoint> wigner_grid(const CircuitParams &params, const GridSpec &grid);

/// ∫ W d²β over a grid produced by wigner_grid, as the Riemann sum Σ w Δx Δy / 2
/// (the ½ is the Jacobian of β = (x + iy)/√2).
[[nodiscard]] double grid_integral(const std::vector<WignerPoint> &points, const GridSpec &grid);

enum class SqueezingKind {
    crossing,        ///< Δ²P falls through ½ at r_c
    always_squeezed, ///< Δ²P < ½ over the whole scanned range
    never_squeezed,  ///< Δ²P > ½ over the whole scanned range
};

[[nodiscard]] std::string_view to_string(SqueezingKind kind) noexcept;

struct ThresholdOptions {
    double r_min = 1e-4;
    double r_max = 3.0;
    double scan_step = 0.05;
    double tolerance = 1e-6;
    int max_iterations = 200;
};

struct ThresholdResult {
    std::optional<double> r_c;
    SqueezingKind kind = SqueezingKind::crossing;
    int iterations = 0;
};

/// Smallest r at which Δ²P(r) = ½, located by a coarse scan followed by
/// bisection. "Always squeezed" and "never squeezed" are ordinary results.
/// Throws NumericalError if bisection fails to converge.
[[nodiscard]] ThresholdResult squeezing_threshold(int m, double T, double eta1, double eta2,
                                                  const ThresholdOptions &options = {});

/// Closed forms for the bare squeezed vacuum S(r)|0⟩.
namespace svs {
[[nodiscard]] QuadratureVariances variances(double r);
[[nodiscard]] double mean_photon_number(double r);
/// ⟨a†^k a^l⟩ from its (f, g) generating function.
[[nodiscard]] Complex moment(double r, int k, int l);
[[nodiscard]] double pnd(double r, int n);
[[nodiscard]] double wigner(double r, double x, double y);
} // namespace svs

} // namespace mssvs::observables
