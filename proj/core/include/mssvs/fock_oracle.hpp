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
 * Brute-force reference simulation of the circuit in a truncated Fock basis.
 *
 * Nothing here uses characteristic functions or generating functions: states
 * are vectors and density matrices, channels are Kraus operators, the beam
 * splitter is a unitary built from its action on creation operators, and
 * observables are traces. The closed-form results in observables.hpp are
 * checked against these values.
 *
 * Two-mode objects use the product basis |n_a, n_b⟩ with flat index
 * n_a·cutoff + n_b. Beam-splitter blocks of total photon number J < cutoff lie
 * entirely inside that basis and are exactly unitary there.
 */

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mssvs/circuit.hpp"
#include "mssvs/observables.hpp"

namespace mssvs::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using circuit::CircuitParams;
using circuit::Mode;

inline constexpr int kDefaultCutoff = 40;
inline constexpr double kTailTolerance = 1e-10;
inline constexpr double kHeraldFloor = 1e-14;

/// Pure single-mode state on levels 0 … cutoff−1.
struct FockState {
    Vector amplitudes;

    [[nodiscard]] int cutoff() const noexcept { return static_cast<int>(amplitudes.size()); }
    [[nodiscard]] double norm_squared() const { return amplitudes.squaredNorm(); }
    /// Probability carried by the top `levels` basis states.
    [[nodiscard]] double tail_mass(int levels = 4) const;
};

/// Single- or two-mode density matrix in a truncated Fock basis.
class FockDensity {
  public:
    static FockDensity single_mode(Matrix rho);
    static FockDensity two_mode(Matrix rho, int cutoff);
    static FockDensity pure(const FockState &state);
    /// ρ_a ⊗ ρ_b for two single-mode densities with equal cutoff.
    static FockDensity tensor(const FockDensity &mode_a, const FockDensity &mode_b);

    [[nodiscard]] int modes() const noexcept { return modes_; }
    [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return rho_; }

    [[nodiscard]] Eigen::Index index(int n_a, int n_b) const noexcept {
        return static_cast<Eigen::Index>(n_a) * cutoff_ + n_b;
    }

    [[nodiscard]] double trace() const;
    [[nodiscard]] double hermiticity_error() const;
    [[nodiscard]] double min_eigenvalue() const;
    [[nodiscard]] FockDensity normalized() const;

  private:
    FockDensity(Matrix rho, int modes, int cutoff);

    Matrix rho_;
    int modes_ = 1;
    int cutoff_ = 0;
};

/// Kraus operators of the pure-loss channel with loss factor η:
///   K_j |n⟩ = √(C(n, j) (1−η)^{n−j} η^j) |n − j⟩.
class KrausSet {
  public:
    KrausSet(double eta, int cutoff);

    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
    /// Amplitude of K_j on |n⟩ (zero for j > n).
    [[nodiscard]] double coefficient(int j, int n) const {
        return j > n ? 0.0 : table_[static_cast<std::size_t>(j) * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(n)];
    }
    [[nodiscard]] Matrix op(int j) const;
    /// max |Σ_j K_j†K_j − 1| over the retained levels.
    [[nodiscard]] double completeness_error() const;

  private:
    double eta_;
    int cutoff_;
    std::vector<double> table_;
};

/// S(r)|0⟩ truncated to `cutoff` levels. Throws TruncationError naming the
/// smallest sufficient cutoff when the discarded probability exceeds
/// `tail_tolerance`.
[[nodiscard]] FockState squeezed_vacuum(double r, int cutoff, double tail_tolerance = kTailTolerance);

/// a^k applied to a pure state (not renormalized).
[[nodiscard]] FockState annihilate(const FockState &state, int k);

[[nodiscard]] FockDensity apply_loss_kraus(const FockDensity &state, Mode mode, double eta);

/// Beam splitter U with U a U† = √T a + √(1−T) b and U b U† = −√(1−T) a + √T b,
/// stored as real blocks of fixed total photon number J, basis |p, J − p⟩.
class BeamSplitter {
  public:
    /// Builds blocks J = 0 … max_total; a negative max_total means every block
    /// that touches the product basis (2·cutoff − 2).
    BeamSplitter(double T, int cutoff, int max_total = -1);

    [[nodiscard]] double transmissivity() const noexcept { return T_; }
    [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] int max_total() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
    [[nodiscard]] const Eigen::MatrixXd &block(int total) const;

    /// U restricted to the product basis (blocks with J ≥ cutoff are clipped).
    [[nodiscard]] Eigen::MatrixXd dense() const;
    /// U|ψ⟩ for a two-mode product-basis vector.
    [[nodiscard]] Vector apply(const Vector &state) const;
    /// U ρ U†.
    [[nodiscard]] FockDensity apply(const FockDensity &state) const;

  private:
    double T_;
    int cutoff_;
    std::vector<Eigen::MatrixXd> blocks_;
};

[[nodiscard]] BeamSplitter beamsplitter_unitary(double T, int cutoff);

struct HeraldResult {
    double p_d = 0.0;
    /// Normalized mode-a state; empty when p_d < kHeraldFloor.
    std::optional<FockDensity> state;
};

/// Projects mode b of a two-mode density onto |m⟩.
[[nodiscard]] HeraldResult herald(const FockDensity &two_mode, int m);

/// ⟨m|D(α)|n⟩ from the associated-Laguerre closed form
///   ⟨m|D(α)|n⟩ = √(n!/m!) α^{m−n} e^{−|α|²/2} L_n^{(m−n)}(|α|²),  m ≥ n,
/// with the prefactor in log space and L evaluated by its three-term
/// recurrence along each diagonal. Accurate for large cutoffs and |α|.
[[nodiscard]] Matrix displacement_matrix(Complex alpha, int cutoff);
/// The same matrix from √(m+1) D_{m+1,n} = √n D_{m,n−1} + α D_{m,n}.
/// This recurrence loses accuracy once m greatly exceeds |α|², so it is only
/// an independent cross-check at modest cutoffs.
[[nodiscard]] Matrix displacement_matrix_recurrence(Complex alpha, int cutoff);

/// Tr[ρ a†^k a^l] for a single-mode density.
[[nodiscard]] Complex moment(const FockDensity &state, int k, int l);
/// (2/π) Tr[ρ D(β) (−1)^{a†a} D†(β)] with β = (x + iy)/√2.
[[nodiscard]] double wigner(const FockDensity &state, double x, double y);
[[nodiscard]] std::vector<observables::WignerPoint> wigner_grid(const FockDensity &state,
                                                                const observables::GridSpec &grid);
/// Tr[ρ D_a(α) D_b(β)] for a two-mode density.
[[nodiscard]] Complex characteristic_function(const FockDensity &two_mode, Complex alpha, Complex beta);
/// ⟨ψ|ρ|ψ⟩ / ⟨ψ|ψ⟩.
[[nodiscard]] double fidelity(const FockDensity &state, const FockState &pure);

struct OracleObservables {
    std::vector<double> pnd;
    Complex n_mean;
    Complex a_dag;
    Complex a_dag2;
    observables::QuadratureVariances variances;
    double parity = 0.0; ///< ⟨(−1)^{a†a}⟩
};

[[nodiscard]] OracleObservables oracle_observables(const FockDensity &state);

struct OracleConfig {
    int cutoff = kDefaultCutoff;
    bool auto_escalate = true;
    int cutoff_step = 20;
    int max_cutoff = 320;
    /// Bound on the input squeezed-vacuum probability lost to truncation.
    double input_tail_tolerance = kTailTolerance;
    /// Bound on the share of p_d contributed by the top four input levels.
    /// Coherences with the discarded levels scale like its square root, and
    /// heralding favors large photon numbers, so this is far tighter than the
    /// input tail.
    double herald_tail_tolerance = 1e-20;
};

struct OracleResult {
    double p_d = 0.0;
    std::optional<FockDensity> state; ///< empty when the herald is impossible
    int cutoff = 0;                   ///< cutoff actually used
    double input_tail = 0.0;
    double herald_tail = 0.0;
};

/// Runs the whole circuit: S(r)|0⟩⊗|0⟩ → loss η₁ on a → beam splitter → loss η₂
/// on b → project b on |m⟩. The mixed intermediate states are carried as an
/// exact Kraus-branch ensemble of two-mode vectors, which keeps large cutoffs
/// cheap. With auto_escalate the cutoff grows until both tail criteria hold;
/// TruncationError is thrown if max_cutoff is reached first.
[[nodiscard]] OracleResult simulate(const CircuitParams &params, const OracleConfig &config = {});

/// Every stage as an explicit two-mode density matrix. Memory grows as
/// cutoff⁴, so keep the cutoff small (≲ 40). Used to cross-check simulate()
/// and the stage characteristic functions.
struct DenseStages {
    FockDensity stage1;
    FockDensity stage2;
    FockDensity stage3;
    FockDensity stage4;
    HeraldResult heralded;
};

[[nodiscard]] DenseStages simulate_stages(const CircuitParams &params, int cutoff);

} // namespace mssvs::fock
