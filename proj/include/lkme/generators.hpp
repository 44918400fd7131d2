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
#include <string>
#include <utility>
#include <vector>

#include "lkme/linalg.hpp"
#include "lkme/types.hpp"
#include "lkme/vec.hpp"

namespace lkme {

// A rate matrix Gamma plus the ordered Lindblad operators it couples.
// Gamma(k, j) weighs the term L_k rho L_j^dag.
struct LindbladSpec {
    ComplexMatrix gamma;
    std::vector<ComplexMatrix> ops;
    // Algebraic intermediates (commutators, BCH remainders) routinely carry an
    // indefinite Gamma; they must be marked non-physical.
    bool physical = true;
};

struct CanonicalTerm {
    double rate = 0.0;  // signed; negative rates mark re-coherence content
    ComplexMatrix op;   // traceless, Hilbert-Schmidt norm sqrt(2)
};

// Diagonal-rate form: traceless Hermitian H plus (rate, traceless op) pairs.
struct CanonicalForm {
    ComplexMatrix hamiltonian;
    std::vector<CanonicalTerm> terms;
    double hbar = 1.0;
};

struct GammaReport {
    bool hermitian = false;
    double hermiticity_deviation = 0.0;
    double min_eigenvalue = 0.0;
    bool psd = false;
};

struct NegativeRateReport {
    bool has_negative = false;
    std::vector<double> negative_rates;
};

enum class LambConvention {
    half,         // S = (R - R^dag)/2, generically anti-Hermitian
    standard_2i,  // S = (R - R^dag)/(2i), Hermitian
};

struct LambShiftChannel {
    std::string omega;  // frequency label, carried through to the result
    ComplexMatrix R;    // one-sided Fourier transform of the bath auto-correlation
    std::vector<ComplexMatrix> ops;
};

struct LambShiftResult {
    std::vector<std::pair<std::string, ComplexMatrix>> gamma_per_omega;
    ComplexMatrix h_ls;
    // The half convention leaves S anti-Hermitian, so H_LS generically fails
    // Hermiticity; the deviation is reported instead of thrown.
    double hermiticity_deviation = 0.0;
    bool hermitian = false;
};

namespace detail {

inline void check_spec(const LindbladSpec& spec, const std::string& who, bool enforce_psd) {
    require_square(spec.gamma, who);
    const Eigen::Index m = spec.gamma.rows();
    if (static_cast<Eigen::Index>(spec.ops.size()) != m) {
        throw DimensionError(who + ": Gamma is " + std::to_string(m) + "x" + std::to_string(m) + " but " +
                             std::to_string(spec.ops.size()) + " operators were given");
    }
    if (spec.ops.empty()) {
        throw DimensionError(who + ": need at least one operator");
    }
    const Eigen::Index n = spec.ops.front().rows();
    for (const auto& op : spec.ops) {
        require_square(op, who);
        if (op.rows() != n) {
            throw DimensionError(who + ": operators must share one dimension");
        }
    }
    if (!is_hermitian(spec.gamma)) {
        throw ShapeError(who + ": Gamma must be Hermitian");
    }
    if (enforce_psd && spec.physical) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(spec.gamma, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdFloor) {
            throw ShapeError(who + ": Gamma of a physical spec must be positive semidefinite; " +
                             "set physical = false for algebraic intermediates");
        }
    }
}

}  // namespace detail

// Hs(H) = (-i/hbar)(H (x) I - I (x) H^T), the commutator part of the generator.
inline Superoperator hamiltonian_superop(const ComplexMatrix& h, double hbar = 1.0) {
    require_square(h, "hamiltonian_superop");
    if (!(hbar > 0.0)) {
        throw DomainError("hamiltonian_superop: hbar must be positive");
    }
    if (!is_hermitian(h)) {
        throw ShapeError("hamiltonian_superop: H must be Hermitian");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.rows());
    return Complex(0.0, -1.0 / hbar) * (odot(h, id) - odot(id, h));
}

// L1s(A) = A (x) conj(A) - (I (x) (A^dag A)^T)/2 - ((A^dag A) (x) I)/2.
inline Superoperator lindblad_single_superop(const ComplexMatrix& a) {
    require_square(a, "lindblad_single_superop");
    const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.rows());
    const ComplexMatrix aa = a.adjoint() * a;
    return odot(a, a.adjoint()) - 0.5 * odot(id, aa) - 0.5 * odot(aa, id);
}

inline Superoperator lindblad_superop(const LindbladSpec& spec) {
    detail::check_spec(spec, "lindblad_superop", true);
    const Eigen::Index n = spec.ops.front().rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    Superoperator out = Superoperator::Zero(n * n, n * n);
    const Eigen::Index m = spec.gamma.rows();
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const Complex c = spec.gamma(k, j);
            if (c == 0.0) {
                continue;  // keeps diagonal Gamma bitwise equal to the weighted single-op sum
            }
            const ComplexMatrix cross = spec.ops[j].adjoint() * spec.ops[k];
            out += c * (odot(spec.ops[k], spec.ops[j].adjoint()) - 0.5 * odot(id, cross) - 0.5 * odot(cross, id));
        }
    }
    return out;
}

inline Superoperator evaluate(const CanonicalForm& form) {
    Superoperator g = hamiltonian_superop(form.hamiltonian, form.hbar);
    for (const auto& term : form.terms) {
        g += term.rate * lindblad_single_superop(term.op);
    }
    return g;
}

// Diagonalize Gamma, fold operator traces into H (shift by tr(A)/N with the
// compensator (i hbar / 2N)(tr(A^dag) A - tr(A) A^dag) scaled by the rate),
// remove tr(H)/N, and rescale every operator to Hilbert-Schmidt norm sqrt(2)
// with the norm squared over two folded into the rate. The generator is
// unchanged throughout.
inline CanonicalForm canonicalize(const ComplexMatrix& h, const LindbladSpec& spec, double hbar = 1.0) {
    require_square(h, "canonicalize");
    if (!(hbar > 0.0)) {
        throw DomainError("canonicalize: hbar must be positive");
    }
    if (!is_hermitian(h)) {
        throw ShapeError("canonicalize: H must be Hermitian");
    }
    detail::check_spec(spec, "canonicalize", false);
    const Eigen::Index n = h.rows();
    if (spec.ops.front().rows() != n) {
        throw DimensionError("canonicalize: H and the Lindblad operators must share one dimension");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const HermitianEig eig = hermitian_eig(spec.gamma);
    CanonicalForm out;
    out.hbar = hbar;
    ComplexMatrix ham = h;
    const Eigen::Index m = spec.gamma.rows();
    for (Eigen::Index j = 0; j < m; ++j) {
        const double rate = eig.eigenvalues(j);
        ComplexMatrix a = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < m; ++k) {
            a += eig.eigenvectors(k, j) * spec.ops[k];
        }
        const Complex tra = a.trace();
        ham += rate * (Complex(0.0, hbar / (2.0 * static_cast<double>(n))) * (std::conj(tra) * a - tra * a.adjoint()));
        a -= (tra / static_cast<double>(n)) * id;
        const double weight = a.squaredNorm();
        if (std::abs(rate) * weight < kTermDropTol) {
            continue;
        }
        out.terms.push_back({rate * weight / 2.0, std::sqrt(2.0 / weight) * a});
    }
    ham -= (std::real(ham.trace()) / static_cast<double>(n)) * id;
    out.hamiltonian = std::move(ham);
    return out;
}

inline LambShiftResult lamb_shift(const std::vector<LambShiftChannel>& channels,
                                  LambConvention convention = LambConvention::half) {
    if (channels.empty()) {
        throw DomainError("lamb_shift: need at least one frequency channel");
    }
    Eigen::Index n = -1;
    for (const auto& ch : channels) {
        require_square(ch.R, "lamb_shift");
        if (static_cast<Eigen::Index>(ch.ops.size()) != ch.R.rows()) {
            throw DimensionError("lamb_shift: channel '" + ch.omega + "' has " + std::to_string(ch.ops.size()) +
                                 " operators for a " + std::to_string(ch.R.rows()) + "x" + std::to_string(ch.R.rows()) +
                                 " R matrix");
        }
        for (const auto& op : ch.ops) {
            require_square(op, "lamb_shift");
            if (n < 0) {
                n = op.rows();
            }
            if (op.rows() != n) {
                throw DimensionError("lamb_shift: operators must share one dimension");
            }
        }
    }
    if (n < 0) {
        throw DimensionError("lamb_shift: no operators given");
    }
    const Complex denom = convention == LambConvention::half ? Complex(2.0, 0.0) : Complex(0.0, 2.0);
    LambShiftResult out;
    out.h_ls = ComplexMatrix::Zero(n, n);
    for (const auto& ch : channels) {
        out.gamma_per_omega.push_back({ch.omega, (ch.R + ch.R.adjoint()) / 2.0});
        const ComplexMatrix s = (ch.R - ch.R.adjoint()) / denom;
        const Eigen::Index m = ch.R.rows();
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index k = 0; k < m; ++k) {
                out.h_ls += s(j, k) * (ch.ops[j].adjoint() * ch.ops[k]);
            }
        }
    }
    out.hermiticity_deviation = hermiticity_deviation(out.h_ls);
    out.hermitian = out.hermiticity_deviation <= kStructuralTol * std::max(1.0, out.h_ls.norm());
    return out;
}

inline GammaReport validate_gamma(const ComplexMatrix& gamma) {
    require_square(gamma, "validate_gamma");
    GammaReport report;
    report.hermiticity_deviation = hermiticity_deviation(gamma);
    report.hermitian = is_hermitian(gamma);
    if (gamma.rows() == 0) {
        report.psd = true;
        return report;
    }
    const ComplexMatrix sym = (gamma + gamma.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = es.eigenvalues().minCoeff();
    report.psd = report.min_eigenvalue >= -kPsdFloor;
    return report;
}

// Rates below -kPsdFloor in an already canonical form.
inline NegativeRateReport detect_negative_rates(const CanonicalForm& form) {
    NegativeRateReport report;
    for (const auto& term : form.terms) {
        if (term.rate < -kPsdFloor) {
            report.negative_rates.push_back(term.rate);
        }
    }
    report.has_negative = !report.negative_rates.empty();
    return report;
}

}  // namespace lkme
