// Copyright 2026 The lkme authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lkme/generators.hpp"
#include "lkme/projection.hpp"
#include "lkme/types.hpp"

namespace lkme {

struct LindbladTerm {
    double coefficient = 0.0;
    ComplexMatrix op;
};

// Structured commutator output: a Hamiltonian piece plus signed single-op
// dissipator terms. Kept structured (instead of flattened to a matrix) so the
// coherent component stays inspectable; evaluation is a separate step.
struct GeneratorTerms {
    ComplexMatrix hamiltonian;
    std::vector<LindbladTerm> lindblad_terms;
    double hbar = 1.0;
    bool physical = true;  // false as soon as any coefficient is negative
};

inline Superoperator evaluate(const GeneratorTerms& terms) {
    Superoperator g = hamiltonian_superop(terms.hamiltonian, terms.hbar);
    for (const auto& term : terms.lindblad_terms) {
        g += term.coefficient * lindblad_single_superop(term.op);
    }
    return g;
}

inline GeneratorTerms negated(const GeneratorTerms& terms) {
    GeneratorTerms out;
    out.hbar = terms.hbar;
    out.hamiltonian = -terms.hamiltonian;
    out.physical = true;
    for (const auto& term : terms.lindblad_terms) {
        out.lindblad_terms.push_back({-term.coefficient, term.op});
        out.physical = out.physical && -term.coefficient >= 0.0;
    }
    return out;
}

inline Superoperator commutator_super(const Superoperator& g1, const Superoperator& g2) {
    require_square(g1, "commutator_super");
    require_same_dim(g1, g2, "commutator_super");
    return g1 * g2 - g2 * g1;
}

// [Hs(H), Hs(G)] = Hs(-(i/hbar)[H, G]): closed in the Hamiltonian family.
inline GeneratorTerms hh_commutator_closed(const ComplexMatrix& h, const ComplexMatrix& g, double hbar = 1.0) {
    require_square(h, "hh_commutator_closed");
    require_same_dim(h, g, "hh_commutator_closed");
    if (!(hbar > 0.0)) {
        throw DomainError("hh_commutator_closed: hbar must be positive");
    }
    if (!is_hermitian(h) || !is_hermitian(g)) {
        throw ShapeError("hh_commutator_closed: inputs must be Hermitian");
    }
    GeneratorTerms out;
    out.hbar = hbar;
    out.hamiltonian = Complex(0.0, -1.0 / hbar) * commutator(h, g);
    out.physical = true;
    return out;
}

// [Hs(H), L1s(A)] = -L1s(A + i[H,A])/(2 hbar) + L1s(A - i[H,A])/(2 hbar):
// a coherent drive turns one dissipator into a signed pair.
inline GeneratorTerms hl_commutator_closed(const ComplexMatrix& h, const ComplexMatrix& a, double hbar = 1.0) {
    require_square(h, "hl_commutator_closed");
    require_same_dim(h, a, "hl_commutator_closed");
    if (!(hbar > 0.0)) {
        throw DomainError("hl_commutator_closed: hbar must be positive");
    }
    if (!is_hermitian(h)) {
        throw ShapeError("hl_commutator_closed: H must be Hermitian");
    }
    const ComplexMatrix c = commutator(h, a);
    const Complex i(0.0, 1.0);
    GeneratorTerms out;
    out.hbar = hbar;
    out.hamiltonian = ComplexMatrix::Zero(h.rows(), h.cols());
    out.lindblad_terms.push_back({-1.0 / (2.0 * hbar), a + i * c});
    out.lindblad_terms.push_back({1.0 / (2.0 * hbar), a - i * c});
    out.physical = false;
    return out;
}

// The same commutator as a two-operator spec over {A, [H,A]} with the
// off-diagonal rate matrix -(i/hbar)[[0, -1], [1, 0]].
inline LindbladSpec hl_commutator_pair_spec(const ComplexMatrix& h, const ComplexMatrix& a, double hbar = 1.0) {
    require_square(h, "hl_commutator_pair_spec");
    require_same_dim(h, a, "hl_commutator_pair_spec");
    if (!(hbar > 0.0)) {
        throw DomainError("hl_commutator_pair_spec: hbar must be positive");
    }
    if (!is_hermitian(h)) {
        throw ShapeError("hl_commutator_pair_spec: H must be Hermitian");
    }
    LindbladSpec spec;
    spec.gamma.resize(2, 2);
    spec.gamma << 0.0, Complex(0.0, 1.0 / hbar), Complex(0.0, -1.0 / hbar), 0.0;
    spec.ops = {a, commutator(h, a)};
    spec.physical = false;
    return spec;
}

// [L1s(A), L1s(B)] expands into six signed dissipators plus the coherent
// piece Hs(i hbar [A^dag A, B^dag B]/4).
inline GeneratorTerms ll_commutator_closed(const ComplexMatrix& a, const ComplexMatrix& b, double hbar = 1.0) {
    require_square(a, "ll_commutator_closed");
    require_same_dim(a, b, "ll_commutator_closed");
    if (!(hbar > 0.0)) {
        throw DomainError("ll_commutator_closed: hbar must be positive");
    }
    const ComplexMatrix p = a.adjoint() * a;
    const ComplexMatrix q = b.adjoint() * b;
    const ComplexMatrix bp = commutator(b, p);
    const ComplexMatrix aq = commutator(a, q);
    GeneratorTerms out;
    out.hbar = hbar;
    out.hamiltonian = Complex(0.0, 0.25 * hbar) * commutator(p, q);
    out.lindblad_terms = {
        {1.0, a * b},      {-1.0, b * a},     {0.25, b + bp},
        {-0.25, b - bp},   {0.25, a - aq},    {-0.25, a + aq},
    };
    out.physical = false;
    return out;
}

inline NegativeRateReport negative_rates_from_gamma(const ComplexMatrix& gamma) {
    const ComplexMatrix sym = (gamma + gamma.adjoint()) / 2.0;
    const HermitianEig eig = hermitian_eig(sym);
    NegativeRateReport report;
    for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
        if (eig.eigenvalues(j) < -kPsdFloor) {
            report.negative_rates.push_back(eig.eigenvalues(j));
        }
    }
    report.has_negative = !report.negative_rates.empty();
    return report;
}

// Judge term structures by the spectrum of the projected rate matrix, so
// sign cancellations between terms are resolved before reporting.
inline NegativeRateReport detect_negative_rates(const GeneratorTerms& terms, const SuperBasis& basis,
                                                const DualBasis& dual) {
    const GeneratorDecomposition decomp = project_generator(evaluate(terms), basis, dual);
    return negative_rates_from_gamma(decomp.gamma);
}

inline NegativeRateReport detect_negative_rates(const GeneratorTerms& terms) {
    const Eigen::Index n = terms.hamiltonian.rows();
    const SuperBasis basis = build_basis(static_cast<int>(n));
    return detect_negative_rates(terms, basis, build_dual(basis));
}

}  // namespace lkme
