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

#include "lkme/generators.hpp"
#include "lkme/linalg.hpp"
#include "lkme/su.hpp"
#include "lkme/types.hpp"
#include "lkme/vec.hpp"

namespace lkme {

// Lindblad-form directions of the N^4-dimensional superoperator space,
// stacked as columns: first the N^2-1 Hamiltonian directions Hs(S_i), then
// the (N^2-1)^2 dissipator directions D_{j,k} in (j, k) row-major order,
// where D_{j,k} = odot(S_j, S_k) - odot(I, S_k S_j)/2 - odot(S_k S_j, I)/2.
// The set is linearly independent but not orthogonal.
struct SuperBasis {
    int sysdim = 0;
    ComplexMatrix vectors;  // N^4 x D with D = (N^2-1) N^2
    std::vector<ComplexMatrix> su_ops;
    double min_singular_value = 0.0;
    double max_singular_value = 0.0;
};

// Bi-orthogonal partner of a SuperBasis: dual^dag * basis = I.
struct DualBasis {
    ComplexMatrix vectors;
};

struct GeneratorDecomposition {
    // Hamiltonian coefficients against the SU(N) generators. Kept complex so
    // projection stays exactly linear; Hermiticity-preserving trace-preserving
    // inputs yield real entries up to roundoff.
    ComplexVector h;
    ComplexMatrix gamma;         // dissipator coefficients, (j, k) slots
    double residual_norm = 0.0;  // Frobenius norm of the out-of-span component
    bool in_span = false;
};

struct ChannelExtraction {
    GeneratorDecomposition decomposition;
    CanonicalForm canonical;
    bool branch_warning = false;
    double divisible_norm = 0.0;
    double residual_norm = 0.0;
    NegativeRateReport negative_rates;
};

inline SuperBasis build_basis(int n) {
    if (n < 2) {
        throw DomainError("build_basis: need dimension >= 2, got " + std::to_string(n));
    }
    SuperBasis basis;
    basis.sysdim = n;
    basis.su_ops = su_generators(n);
    const int m = n * n - 1;
    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
    basis.vectors.resize(nn * nn, m + m * m);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    for (int i = 0; i < m; ++i) {
        basis.vectors.col(i) = vec(hamiltonian_superop(basis.su_ops[i], 1.0));
    }
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            const ComplexMatrix cross = basis.su_ops[k] * basis.su_ops[j];
            const Superoperator djk =
                odot(basis.su_ops[j], basis.su_ops[k]) - 0.5 * odot(id, cross) - 0.5 * odot(cross, id);
            basis.vectors.col(m + j * m + k) = vec(djk);
        }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> gram(ComplexMatrix(basis.vectors.adjoint() * basis.vectors),
                                                      Eigen::EigenvaluesOnly);
    basis.min_singular_value = std::sqrt(std::max(gram.eigenvalues().minCoeff(), 0.0));
    basis.max_singular_value = std::sqrt(std::max(gram.eigenvalues().maxCoeff(), 0.0));
    if (basis.min_singular_value <= 1e-8 * basis.max_singular_value) {
        throw SingularityError("build_basis: basis is rank deficient at N = " + std::to_string(n));
    }
    return basis;
}

inline DualBasis build_dual(const SuperBasis& basis, double tol = kRankCutoff) {
    DualBasis dual;
    dual.vectors = pseudo_inverse(basis.vectors, tol).adjoint();
    const Eigen::Index d = basis.vectors.cols();
    const double dev = (dual.vectors.adjoint() * basis.vectors - ComplexMatrix::Identity(d, d)).norm();
    if (dev > kStructuralTol) {
        throw SingularityError("build_dual: bi-orthogonality failed, deviation " + std::to_string(dev));
    }
    return dual;
}

inline GeneratorDecomposition project_generator(const Superoperator& g, const SuperBasis& basis,
                                                const DualBasis& dual) {
    const Eigen::Index nn = static_cast<Eigen::Index>(basis.sysdim) * basis.sysdim;
    if (g.rows() != nn || g.cols() != nn) {
        throw DimensionError("project_generator: superoperator side must be " + std::to_string(nn));
    }
    const int m = basis.sysdim * basis.sysdim - 1;
    const ComplexVector flat = vec(g);
    const ComplexVector coeff = dual.vectors.adjoint() * flat;
    GeneratorDecomposition decomp;
    decomp.h = coeff.head(m);
    decomp.gamma.resize(m, m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            decomp.gamma(j, k) = coeff(m + j * m + k);
        }
    }
    decomp.residual_norm = (flat - basis.vectors * coeff).norm();
    decomp.in_span = decomp.residual_norm <= kStructuralTol * flat.norm();
    return decomp;
}

inline Superoperator reconstruct(const GeneratorDecomposition& decomp, const SuperBasis& basis) {
    const int m = basis.sysdim * basis.sysdim - 1;
    if (decomp.h.size() != m || decomp.gamma.rows() != m || decomp.gamma.cols() != m) {
        throw DimensionError("reconstruct: coefficient shapes do not match the basis");
    }
    ComplexVector coeff(m + m * m);
    coeff.head(m) = decomp.h;
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            coeff(m + j * m + k) = decomp.gamma(j, k);
        }
    }
    return unvec(basis.vectors * coeff);
}

// Channel log -> projection -> canonical data. The in-span part is the
// infinitesimally divisible component; whatever is left orthogonal to the
// basis is reported through residual_norm. Complete positivity of the input
// is deliberately not checked.
inline ChannelExtraction extract_lindblad_from_channel(const Superoperator& t, const SuperBasis& basis,
                                                       const DualBasis& dual) {
    const LogResult lr = mat_log(t);
    ChannelExtraction out;
    out.branch_warning = lr.branch_warning;
    out.decomposition = project_generator(lr.value, basis, dual);
    out.residual_norm = out.decomposition.residual_norm;
    out.divisible_norm = reconstruct(out.decomposition, basis).norm();
    const Eigen::Index n = basis.sysdim;
    const int m = basis.sysdim * basis.sysdim - 1;
    ComplexMatrix ham = ComplexMatrix::Zero(n, n);
    for (int k = 0; k < m; ++k) {
        ham += std::real(out.decomposition.h(k)) * basis.su_ops[k];
    }
    const ComplexMatrix gamma_h = (out.decomposition.gamma + out.decomposition.gamma.adjoint()) / 2.0;
    const HermitianEig eig = hermitian_eig(gamma_h);
    CanonicalForm canonical;
    canonical.hbar = 1.0;
    canonical.hamiltonian = std::move(ham);
    for (int j = 0; j < m; ++j) {
        const double rate = eig.eigenvalues(j);
        if (std::abs(rate) * 2.0 < kTermDropTol) {
            continue;  // recovered operators carry Hilbert-Schmidt norm sqrt(2)
        }
        ComplexMatrix a = ComplexMatrix::Zero(n, n);
        for (int k = 0; k < m; ++k) {
            a += eig.eigenvectors(k, j) * basis.su_ops[k];
        }
        canonical.terms.push_back({rate, std::move(a)});
    }
    out.negative_rates = detect_negative_rates(canonical);
    out.canonical = std::move(canonical);
    return out;
}

inline ChannelExtraction extract_lindblad_from_channel(const Superoperator& t, double tol = kRankCutoff) {
    const Eigen::Index n = superop_sysdim(t);
    if (n < 2) {
        throw DimensionError("extract_lindblad_from_channel: need system dimension >= 2");
    }
    const SuperBasis basis = build_basis(static_cast<int>(n));
    const DualBasis dual = build_dual(basis, tol);
    return extract_lindblad_from_channel(t, basis, dual);
}

}  // namespace lkme
