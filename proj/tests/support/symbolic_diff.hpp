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

// Test-only reference for genfunc: differentiates P(x)·e^{E(x)} term by term.
//
// Every derivative maps P e^E to (∂P + P ∂E) e^E, so after k steps the value
// at the origin is P(0)·e^{E(0)}. Nothing here shares code with the series
// recurrence in genfunc.

#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace mssvs::testing {

using Complex = std::complex<double>;
using Exponents = std::vector<int>;

class Polynomial {
  public:
    explicit Polynomial(std::size_t n_vars) : n_vars_(n_vars) {}

    static Polynomial constant(std::size_t n_vars, Complex c) {
        Polynomial p(n_vars);
        p.add(Exponents(n_vars, 0), c);
        return p;
    }

    void add(const Exponents &e, Complex c) {
        if (c == Complex(0.0)) {
            return;
        }
        terms_[e] += c;
    }

    [[nodiscard]] Polynomial derivative(std::size_t var) const {
        Polynomial out(n_vars_);
        for (const auto &[e, c] : terms_) {
            if (e[var] == 0) {
                continue;
            }
            Exponents d = e;
            --d[var];
            out.add(d, c * static_cast<double>(e[var]));
        }
        return out;
    }

    [[nodiscard]] Polynomial operator*(const Polynomial &o) const {
        Polynomial out(n_vars_);
        for (const auto &[e1, c1] : terms_) {
            for (const auto &[e2, c2] : o.terms_) {
                Exponents e(n_vars_);
                for (std::size_t i = 0; i < n_vars_; ++i) {
                    e[i] = e1[i] + e2[i];
                }
                out.add(e, c1 * c2);
            }
        }
        return out;
    }

    [[nodiscard]] Polynomial operator+(const Polynomial &o) const {
        Polynomial out = *this;
        for (const auto &[e, c] : o.terms_) {
            out.add(e, c);
        }
        return out;
    }

    [[nodiscard]] Complex at_origin() const {
        const auto it = terms_.find(Exponents(n_vars_, 0));
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

  private:
    std::size_t n_vars_;
    std::map<Exponents, Complex> terms_;
};

/// One monomial coeff · x_i · x_j (j < 0: linear coeff · x_i; i < 0: constant).
struct Term {
    int i = -1;
    int j = -1;
    Complex coeff;
};

inline Polynomial exponent_polynomial(std::size_t n_vars, const std::vector<Term> &terms) {
    Polynomial p(n_vars);
    for (const Term &t : terms) {
        Exponents e(n_vars, 0);
        if (t.i >= 0) {
            ++e[static_cast<std::size_t>(t.i)];
        }
        if (t.j >= 0) {
            ++e[static_cast<std::size_t>(t.j)];
        }
        p.add(e, t.coeff);
    }
    return p;
}

/// ∂^{Σk} e^{E} / ∂x^k at 0 for E = Σ terms.
inline Complex symbolic_derivative(std::size_t n_vars, const std::vector<Term> &terms, const std::vector<int> &orders) {
    const Polynomial e = exponent_polynomial(n_vars, terms);
    Polynomial prefactor = Polynomial::constant(n_vars, 1.0);
    for (std::size_t var = 0; var < n_vars; ++var) {
        const Polynomial de = e.derivative(var);
        for (int k = 0; k < orders[var]; ++k) {
            prefactor = prefactor.derivative(var) + prefactor * de;
        }
    }
    return prefactor.at_origin() * std::exp(e.at_origin());
}

/// Same derivative with every coefficient replaced by its modulus: an upper
/// bound on the size of the terms that cancel in symbolic_derivative.
inline double symbolic_scale(std::size_t n_vars, std::vector<Term> terms, const std::vector<int> &orders) {
    for (Term &t : terms) {
        t.coeff = std::abs(t.coeff);
    }
    return std::abs(symbolic_derivative(n_vars, terms, orders));
}

} // namespace mssvs::testing
