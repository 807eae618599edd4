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

#include "mssvs/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "mssvs/error.hpp"

namespace mssvs::fock {

namespace {

void require_cutoff(int cutoff) {
    if (cutoff < 1) {
        throw ContractViolation("cutoff must be at least 1, got " + std::to_string(cutoff));
    }
}

void require_modes(const FockDensity &state, int modes, const char *where) {
    if (state.modes() != modes) {
        throw ContractViolation(std::string(where) + " expects a " + std::to_string(modes) +
                                "-mode density, got " + std::to_string(state.modes()) + " modes");
    }
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Squeezed-vacuum amplitudes on [0, cutoff) together with the exact probability
// on [cutoff, ∞) and the smallest cutoff whose tail is below `tolerance`.
struct SqueezedAmplitudes {
    Eigen::VectorXd amplitudes;
    double tail = 0.0;
    int required_cutoff = 1;
};

SqueezedAmplitudes squeezed_amplitudes(double r, int cutoff, double tolerance) {
    const double lambda = std::tanh(r);
    SqueezedAmplitudes out;
    out.amplitudes = Eigen::VectorXd::Zero(cutoff);

    // Even levels only: c_{2k+2} = c_{2k} λ √((2k+1)(2k+2)) / (2(k+1)).
    // Walk until the remaining terms are far below any tolerance of interest.
    std::vector<double> probs;
    double c = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0;; ++k) {
        const int n = 2 * k;
        probs.push_back(c * c);
        probs.push_back(0.0);
        if (n < cutoff) {
            out.amplitudes(n) = c;
        }
        if (n >= cutoff && (c * c < 1e-40 || lambda == 0.0)) {
            break;
        }
        if (lambda == 0.0 && n + 2 >= cutoff) {
            break;
        }
        c *= lambda * std::sqrt((2.0 * k + 1.0) * (2.0 * k + 2.0)) / (2.0 * (k + 1.0));
    }

    // Suffix sums give the tail beyond every candidate cutoff.
    std::vector<double> suffix(probs.size() + 1, 0.0);
    for (std::size_t i = probs.size(); i-- > 0;) {
        suffix[i] = suffix[i + 1] + probs[i];
    }
    out.tail = static_cast<std::size_t>(cutoff) < suffix.size() ? suffix[static_cast<std::size_t>(cutoff)] : 0.0;
    out.required_cutoff = static_cast<int>(suffix.size());
    for (std::size_t n = 1; n < suffix.size(); ++n) {
        if (suffix[n] < tolerance) {
            out.required_cutoff = static_cast<int>(n);
            break;
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// States

double FockState::tail_mass(int levels) const {
    const int n = cutoff();
    const int start = std::max(0, n - levels);
    return amplitudes.segment(start, n - start).squaredNorm();
}

FockDensity::FockDensity(Matrix rho, int modes, int cutoff) : rho_(std::move(rho)), modes_(modes), cutoff_(cutoff) {}

FockDensity FockDensity::single_mode(Matrix rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw ContractViolation("single-mode density must be a non-empty square matrix");
    }
    const int n = static_cast<int>(rho.rows());
    return FockDensity(std::move(rho), 1, n);
}

FockDensity FockDensity::two_mode(Matrix rho, int cutoff) {
    require_cutoff(cutoff);
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
    if (rho.rows() != dim || rho.cols() != dim) {
        throw ContractViolation("two-mode density with cutoff " + std::to_string(cutoff) + " must be " +
                                std::to_string(dim) + "x" + std::to_string(dim));
    }
    return FockDensity(std::move(rho), 2, cutoff);
}

FockDensity FockDensity::pure(const FockState &state) {
    require_cutoff(state.cutoff());
    return single_mode(state.amplitudes * state.amplitudes.adjoint());
}

FockDensity FockDensity::tensor(const FockDensity &mode_a, const FockDensity &mode_b) {
    require_modes(mode_a, 1, "tensor");
    require_modes(mode_b, 1, "tensor");
    if (mode_a.cutoff() != mode_b.cutoff()) {
        throw ContractViolation("tensor needs equal cutoffs");
    }
    const int n = mode_a.cutoff();
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    Matrix rho(dim, dim);
    const Matrix &A = mode_a.matrix();
    const Matrix &B = mode_b.matrix();
    for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
            rho.block(static_cast<Eigen::Index>(a) * n, static_cast<Eigen::Index>(c) * n, n, n) = A(a, c) * B;
        }
    }
    return two_mode(std::move(rho), n);
}

double FockDensity::trace() const { return rho_.trace().real(); }

double FockDensity::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double FockDensity::min_eigenvalue() const {
    const Matrix hermitian = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

FockDensity FockDensity::normalized() const {
    const double t = trace();
    if (!(t > 0.0)) {
        throw NumericalError("cannot normalize a density with trace " + std::to_string(t));
    }
    return FockDensity(rho_ / t, modes_, cutoff_);
}

FockState squeezed_vacuum(double r, int cutoff, double tail_tolerance) {
    require_cutoff(cutoff);
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("squeezing r must be finite and non-negative, got " + std::to_string(r));
    }
    const SqueezedAmplitudes sq = squeezed_amplitudes(r, cutoff, tail_tolerance);
    if (sq.tail >= tail_tolerance) {
        throw TruncationError("squeezed vacuum with r = " + std::to_string(r) + " loses probability " +
                                  std::to_string(sq.tail) + " above cutoff " + std::to_string(cutoff) +
                                  "; use cutoff >= " + std::to_string(sq.required_cutoff),
                              sq.required_cutoff);
    }
    return FockState{sq.amplitudes.cast<Complex>()};
}

FockState annihilate(const FockState &state, int k) {
    if (k < 0) {
        throw ContractViolation("annihilate: negative power");
    }
    const int n = state.cutoff();
    FockState out{Vector::Zero(n)};
    for (int q = k; q < n; ++q) {
        out.amplitudes(q - k) = state.amplitudes(q) * std::exp(0.5 * (log_factorial(q) - log_factorial(q - k)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loss

KrausSet::KrausSet(double eta, int cutoff) : eta_(eta), cutoff_(cutoff) {
    require_cutoff(cutoff);
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw DomainError("loss factor must lie in [0, 1], got " + std::to_string(eta));
    }
    const auto n_cut = static_cast<std::size_t>(cutoff);
    table_.assign(n_cut * n_cut, 0.0);
    const double log_keep = std::log1p(-eta);
    const double log_lose = std::log(eta);
    for (int j = 0; j < cutoff; ++j) {
        for (int n = j; n < cutoff; ++n) {
            double value;
            if (eta == 0.0) {
                value = j == 0 ? 1.0 : 0.0;
            } else if (eta == 1.0) {
                value = j == n ? 1.0 : 0.0;
            } else {
                const double log_sq = log_factorial(n) - log_factorial(j) - log_factorial(n - j) +
                                      (n - j) * log_keep + j * log_lose;
                value = std::exp(0.5 * log_sq);
            }
            table_[static_cast<std::size_t>(j) * n_cut + static_cast<std::size_t>(n)] = value;
        }
    }
}

Matrix KrausSet::op(int j) const {
    Matrix k = Matrix::Zero(cutoff_, cutoff_);
    for (int n = j; n < cutoff_; ++n) {
        k(n - j, n) = coefficient(j, n);
    }
    return k;
}

double KrausSet::completeness_error() const {
    double worst = 0.0;
    for (int n = 0; n < cutoff_; ++n) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            sum += coefficient(j, n) * coefficient(j, n);
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

FockDensity apply_loss_kraus(const FockDensity &state, Mode mode, double eta) {
    const int n = state.cutoff();
    const KrausSet kraus(eta, n);
    const Matrix &rho = state.matrix();

    if (state.modes() == 1) {
        Matrix out = Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            for (int c = 0; c < n; ++c) {
                Complex sum = 0.0;
                for (int j = 0; a + j < n && c + j < n; ++j) {
                    sum += kraus.coefficient(j, a + j) * kraus.coefficient(j, c + j) * rho(a + j, c + j);
                }
                out(a, c) = sum;
            }
        }
        return FockDensity::single_mode(std::move(out));
    }

    // Two modes: shift the lossy index of both row and column by j.
    const Eigen::Index dim = rho.rows();
    Matrix out = Matrix::Zero(dim, dim);
    const bool on_a = mode == Mode::a;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int row_lossy = on_a ? a : b;
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    const int col_lossy = on_a ? c : d;
                    Complex sum = 0.0;
                    for (int j = 0; row_lossy + j < n && col_lossy + j < n; ++j) {
                        const Eigen::Index row = on_a ? state.index(a + j, b) : state.index(a, b + j);
                        const Eigen::Index col = on_a ? state.index(c + j, d) : state.index(c, d + j);
                        sum += kraus.coefficient(j, row_lossy + j) * kraus.coefficient(j, col_lossy + j) * rho(row, col);
                    }
                    out(state.index(a, b), state.index(c, d)) = sum;
                }
            }
        }
    }
    return FockDensity::two_mode(std::move(out), n);
}

// ---------------------------------------------------------------------------
// Beam splitter

BeamSplitter::BeamSplitter(double T, int cutoff, int max_total) : T_(T), cutoff_(cutoff) {
    require_cutoff(cutoff);
    if (!(T >= 0.0 && T <= 1.0)) {
        throw DomainError("transmissivity must lie in [0, 1], got " + std::to_string(T));
    }
    const int top = max_total < 0 ? 2 * cutoff - 2 : max_total;
    const double t = std::sqrt(T);
    const double s = std::sqrt(1.0 - T);

    // Column q of block J is U|q, J−q⟩, built from block J−1 by one creation:
    //   q ≥ 1:  U|q, J−q⟩ = (√T a† + √(1−T) b†) U|q−1, J−q⟩ / √q
    //   q = 0:  U|0, J⟩   = (−√(1−T) a† + √T b†) U|0, J−1⟩ / √J
    // where a† sends index p to p+1 with √(p+1) and b† keeps p with √(J−p).
    blocks_.reserve(static_cast<std::size_t>(top) + 1);
    blocks_.emplace_back(Eigen::MatrixXd::Ones(1, 1));
    for (int J = 1; J <= top; ++J) {
        const Eigen::MatrixXd &prev = blocks_.back();
        Eigen::MatrixXd cur = Eigen::MatrixXd::Zero(J + 1, J + 1);
        for (int q = 0; q <= J; ++q) {
            const int src = q == 0 ? 0 : q - 1;
            const double coef_a = q == 0 ? -s : t;
            const double coef_b = q == 0 ? t : s;
            const double norm = 1.0 / std::sqrt(q == 0 ? static_cast<double>(J) : static_cast<double>(q));
            for (int p = 0; p < J; ++p) {
                const double v = prev(p, src);
                cur(p + 1, q) += coef_a * std::sqrt(p + 1.0) * v * norm;
                cur(p, q) += coef_b * std::sqrt(static_cast<double>(J - p)) * v * norm;
            }
        }
        blocks_.push_back(std::move(cur));
    }
}

const Eigen::MatrixXd &BeamSplitter::block(int total) const {
    if (total < 0 || total > max_total()) {
        throw ContractViolation("beam-splitter block " + std::to_string(total) + " not built (max " +
                                std::to_string(max_total()) + ")");
    }
    return blocks_[static_cast<std::size_t>(total)];
}

Eigen::MatrixXd BeamSplitter::dense() const {
    const int n = cutoff_;
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, dim);
    for (int J = 0; J <= max_total(); ++J) {
        const Eigen::MatrixXd &blk = blocks_[static_cast<std::size_t>(J)];
        const int lo = std::max(0, J - (n - 1));
        const int hi = std::min(J, n - 1);
        for (int p = lo; p <= hi; ++p) {
            for (int q = lo; q <= hi; ++q) {
                u(static_cast<Eigen::Index>(p) * n + (J - p), static_cast<Eigen::Index>(q) * n + (J - q)) = blk(p, q);
            }
        }
    }
    return u;
}

Vector BeamSplitter::apply(const Vector &state) const {
    const int n = cutoff_;
    if (state.size() != static_cast<Eigen::Index>(n) * n) {
        throw ContractViolation("beam splitter: vector size does not match cutoff");
    }
    Vector out = Vector::Zero(state.size());
    for (int J = 0; J <= 2 * n - 2; ++J) {
        const int lo = std::max(0, J - (n - 1));
        const int hi = std::min(J, n - 1);
        for (int q = lo; q <= hi; ++q) {
            const Complex amp = state(static_cast<Eigen::Index>(q) * n + (J - q));
            if (amp == Complex(0.0)) {
                continue;
            }
            const Eigen::MatrixXd &blk = block(J);
            for (int p = lo; p <= hi; ++p) {
                out(static_cast<Eigen::Index>(p) * n + (J - p)) += blk(p, q) * amp;
            }
        }
    }
    return out;
}

FockDensity BeamSplitter::apply(const FockDensity &state) const {
    require_modes(state, 2, "beam splitter");
    if (state.cutoff() != cutoff_) {
        throw ContractViolation("beam splitter: density cutoff does not match");
    }
    const int n = cutoff_;
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int J = 0; J <= max_total(); ++J) {
        const Eigen::MatrixXd &blk = blocks_[static_cast<std::size_t>(J)];
        const int lo = std::max(0, J - (n - 1));
        const int hi = std::min(J, n - 1);
        for (int p = lo; p <= hi; ++p) {
            for (int q = lo; q <= hi; ++q) {
                if (blk(p, q) != 0.0) {
                    entries.emplace_back(static_cast<Eigen::Index>(p) * n + (J - p),
                                         static_cast<Eigen::Index>(q) * n + (J - q), blk(p, q));
                }
            }
        }
    }
    Eigen::SparseMatrix<Complex> u(dim, dim);
    u.setFromTriplets(entries.begin(), entries.end());
    // U ρ U† = (U (U ρ)†)†.
    const Matrix left = u * state.matrix();
    Matrix adj = left.adjoint();
    Matrix both = u * adj;
    return FockDensity::two_mode(both.adjoint(), n);
}

BeamSplitter beamsplitter_unitary(double T, int cutoff) { return BeamSplitter(T, cutoff); }

// ---------------------------------------------------------------------------
// Heralding and observables

HeraldResult herald(const FockDensity &two_mode, int m) {
    require_modes(two_mode, 2, "herald");
    const int n = two_mode.cutoff();
    if (m < 0 || m >= n) {
        throw ContractViolation("herald: photon number " + std::to_string(m) + " outside cutoff " + std::to_string(n));
    }
    Matrix rho(n, n);
    for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
            rho(a, c) = two_mode.matrix()(two_mode.index(a, m), two_mode.index(c, m));
        }
    }
    HeraldResult out;
    out.p_d = rho.trace().real();
    if (out.p_d >= kHeraldFloor) {
        out.state = FockDensity::single_mode(rho / out.p_d);
    }
    return out;
}

Matrix displacement_matrix(Complex alpha, int cutoff) {
    require_cutoff(cutoff);
    if (alpha == Complex(0.0)) {
        return Matrix::Identity(cutoff, cutoff);
    }
    const double x = std::norm(alpha);
    const double log_abs = 0.5 * std::log(x);
    const Complex unit_lower = alpha / std::abs(alpha);               // phase of α
    const Complex unit_upper = -std::conj(alpha) / std::abs(alpha);   // phase of −α*
    Matrix d(cutoff, cutoff);
    std::vector<double> lag(static_cast<std::size_t>(cutoff));
    for (int gap = 0; gap < cutoff; ++gap) {
        // L_k^{(gap)}(x) for k = 0 … cutoff−1−gap:
        //   (k+1) L_{k+1} = (2k + 1 + gap − x) L_k − (k + gap) L_{k−1}
        const int len = cutoff - gap;
        lag[0] = 1.0;
        if (len > 1) {
            lag[1] = 1.0 + gap - x;
        }
        for (int k = 1; k + 1 < len; ++k) {
            lag[static_cast<std::size_t>(k) + 1] =
                ((2.0 * k + 1.0 + gap - x) * lag[static_cast<std::size_t>(k)] -
                 (k + gap) * lag[static_cast<std::size_t>(k) - 1]) /
                (k + 1.0);
        }
        const Complex phase_lower = std::pow(unit_lower, gap);
        const Complex phase_upper = std::pow(unit_upper, gap);
        for (int k = 0; k < len; ++k) {
            const double magnitude =
                std::exp(0.5 * (log_factorial(k) - log_factorial(k + gap)) + gap * log_abs - 0.5 * x) *
                lag[static_cast<std::size_t>(k)];
            d(k + gap, k) = magnitude * phase_lower;
            if (gap > 0) {
                d(k, k + gap) = magnitude * phase_upper;
            }
        }
    }
    return d;
}

Matrix displacement_matrix_recurrence(Complex alpha, int cutoff) {
    require_cutoff(cutoff);
    Matrix d(cutoff, cutoff);
    Complex first = std::exp(-0.5 * std::norm(alpha));
    for (int col = 0; col < cutoff; ++col) {
        d(0, col) = first;
        first *= -std::conj(alpha) / std::sqrt(col + 1.0);
    }
    for (int row = 0; row + 1 < cutoff; ++row) {
        const double scale = 1.0 / std::sqrt(row + 1.0);
        for (int col = 0; col < cutoff; ++col) {
            Complex next = alpha * d(row, col);
            if (col > 0) {
                next += std::sqrt(static_cast<double>(col)) * d(row, col - 1);
            }
            d(row + 1, col) = next * scale;
        }
    }
    return d;
}

Complex moment(const FockDensity &state, int k, int l) {
    require_modes(state, 1, "moment");
    if (k < 0 || l < 0) {
        throw ContractViolation("moment orders must be non-negative");
    }
    // a†^k a^l = Σ_q √(q! (q−l+k)!) / (q−l)! |q−l+k⟩⟨q|
    const int n = state.cutoff();
    Complex sum = 0.0;
    for (int q = l; q < n && q - l + k < n; ++q) {
        const double c = std::exp(0.5 * (log_factorial(q) + log_factorial(q - l + k)) - log_factorial(q - l));
        sum += c * state.matrix()(q, q - l + k);
    }
    return sum;
}

double wigner(const FockDensity &state, double x, double y) {
    require_modes(state, 1, "wigner");
    const int n = state.cutoff();
    const Complex beta(x / std::numbers::sqrt2, y / std::numbers::sqrt2);
    const Matrix d = displacement_matrix(2.0 * beta, n);
    Complex sum = 0.0;
    for (int p = 0; p < n; ++p) {
        const double parity = (p % 2 == 0) ? 1.0 : -1.0;
        for (int q = 0; q < n; ++q) {
            sum += parity * state.matrix()(p, q) * d(q, p);
        }
    }
    return 2.0 / std::numbers::pi * sum.real();
}

std::vector<observables::WignerPoint> wigner_grid(const FockDensity &state, const observables::GridSpec &grid) {
    std::vector<observables::WignerPoint> out;
    out.reserve(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny));
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const double x = grid.x_at(i);
            const double y = grid.y_at(j);
            out.push_back({x, y, wigner(state, x, y)});
        }
    }
    return out;
}

Complex characteristic_function(const FockDensity &two_mode, Complex alpha, Complex beta) {
    require_modes(two_mode, 2, "characteristic_function");
    const int n = two_mode.cutoff();
    const Matrix da = displacement_matrix(alpha, n);
    const Matrix db = displacement_matrix(beta, n);
    const Matrix &rho = two_mode.matrix();
    // Tr[ρ (D_a ⊗ D_b)] = Σ ρ[(a,b),(c,d)] D_a(c,a) D_b(d,b)
    Complex sum = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const Eigen::Index row = two_mode.index(a, b);
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    sum += rho(row, two_mode.index(c, d)) * da(c, a) * db(d, b);
                }
            }
        }
    }
    return sum;
}

double fidelity(const FockDensity &state, const FockState &pure) {
    require_modes(state, 1, "fidelity");
    const Eigen::Index n = std::min<Eigen::Index>(state.cutoff(), pure.cutoff());
    const double norm = pure.norm_squared();
    if (!(norm > 0.0)) {
        throw ContractViolation("fidelity: target state has zero norm");
    }
    const Vector psi = pure.amplitudes.head(n);
    const Complex overlap = psi.dot(state.matrix().topLeftCorner(n, n) * psi);
    return overlap.real() / norm;
}

OracleObservables oracle_observables(const FockDensity &state) {
    require_modes(state, 1, "oracle_observables");
    OracleObservables out;
    const int n = state.cutoff();
    out.pnd.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out.pnd[static_cast<std::size_t>(k)] = state.matrix()(k, k).real();
        out.parity += (k % 2 == 0 ? 1.0 : -1.0) * out.pnd[static_cast<std::size_t>(k)];
    }
    out.n_mean = moment(state, 1, 1);
    out.a_dag = moment(state, 1, 0);
    out.a_dag2 = moment(state, 2, 0);

    const Complex a1 = moment(state, 0, 1);
    const Complex a2 = moment(state, 0, 2);
    const double n_mean = out.n_mean.real();
    const double x_mean = std::numbers::sqrt2 * a1.real();
    const double p_mean = std::numbers::sqrt2 * a1.imag();
    out.variances.var_x = 0.5 * (2.0 * a2.real() + 2.0 * n_mean + 1.0) - x_mean * x_mean;
    out.variances.var_p = 0.5 * (-2.0 * a2.real() + 2.0 * n_mean + 1.0) - p_mean * p_mean;
    return out;
}

// ---------------------------------------------------------------------------
// Full circuit

namespace {

OracleResult run_streaming(const CircuitParams &params, int cutoff, double input_tolerance) {
    const int n = cutoff;
    const int m = params.m;
    const SqueezedAmplitudes sq = squeezed_amplitudes(params.r, n, input_tolerance);
    const Eigen::VectorXd &psi = sq.amplitudes;
    const KrausSet loss_a(params.eta1, n);
    const KrausSet loss_b(params.eta2, n);
    const BeamSplitter bs(params.T, n, n - 1);

    // Loss on a is unravelled into branches j, loss on b into branches l.
    // Every branch is pure and real; after the beam splitter acts on |J, 0⟩
    // and b is projected on m (having lost l photons), mode a holds
    //   φ_{jl}(a) = k^b_l(m+l) · k^a_j(J+j) ψ(J+j) · U_J(a, J),  J = a + m + l.
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd phi(n);
    double tail = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int l = 0; j + m + l < n; ++l) {
            const int len = n - j - m - l;
            const int b = m + l;
            const double kb = loss_b.coefficient(l, b);
            if (kb == 0.0) {
                continue;
            }
            for (int a = 0; a < len; ++a) {
                const int J = a + b;
                phi(a) = kb * loss_a.coefficient(j, J + j) * psi(J + j) * bs.block(J)(a, J);
            }
            rho.topLeftCorner(len, len).noalias() += phi.head(len) * phi.head(len).transpose();
            // Input level feeding φ(a) is a + m + l + j; the top four count as tail.
            for (int a = std::max(0, n - 4 - b - j); a < len; ++a) {
                tail += phi(a) * phi(a);
            }
        }
    }

    OracleResult out;
    out.cutoff = n;
    out.input_tail = sq.tail;
    out.p_d = rho.trace();
    out.herald_tail = out.p_d > 0.0 ? tail / out.p_d : 0.0;
    if (out.p_d >= kHeraldFloor) {
        out.state = FockDensity::single_mode((rho / out.p_d).cast<Complex>());
    }
    return out;
}

} // namespace

OracleResult simulate(const CircuitParams &params, const OracleConfig &config) {
    params.validate();
    require_cutoff(config.cutoff);
    int cutoff = std::max(config.cutoff, params.m + 5);

    if (!config.auto_escalate) {
        OracleResult res = run_streaming(params, cutoff, config.input_tail_tolerance);
        if (res.input_tail >= config.input_tail_tolerance) {
            (void)squeezed_vacuum(params.r, cutoff, config.input_tail_tolerance); // throws with the required cutoff
        }
        return res;
    }

    while (true) {
        OracleResult res = run_streaming(params, cutoff, config.input_tail_tolerance);
        const bool input_ok = res.input_tail < config.input_tail_tolerance;
        const bool herald_ok = res.p_d < kHeraldFloor || res.herald_tail < config.herald_tail_tolerance;
        if (input_ok && herald_ok) {
            return res;
        }
        if (cutoff >= config.max_cutoff) {
            throw TruncationError("oracle did not converge for " + params.describe() + " within cutoff " +
                                      std::to_string(config.max_cutoff) + " (input tail " +
                                      std::to_string(res.input_tail) + ", herald tail " +
                                      std::to_string(res.herald_tail) + ")",
                                  -1);
        }
        cutoff = std::min(cutoff + config.cutoff_step, config.max_cutoff);
    }
}

DenseStages simulate_stages(const CircuitParams &params, int cutoff) {
    params.validate();
    if (params.m >= cutoff) {
        throw ContractViolation("simulate_stages: cutoff must exceed the heralded photon number");
    }
    const FockState psi = squeezed_vacuum(params.r, cutoff);
    Matrix vacuum = Matrix::Zero(cutoff, cutoff);
    vacuum(0, 0) = 1.0;

    FockDensity s1 = FockDensity::tensor(FockDensity::pure(psi), FockDensity::single_mode(vacuum));
    FockDensity s2 = apply_loss_kraus(s1, Mode::a, params.eta1);
    FockDensity s3 = BeamSplitter(params.T, cutoff).apply(s2);
    FockDensity s4 = apply_loss_kraus(s3, Mode::b, params.eta2);
    HeraldResult h = herald(s4, params.m);
    return DenseStages{std::move(s1), std::move(s2), std::move(s3), std::move(s4), std::move(h)};
}

} // namespace mssvs::fock
