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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "lkme/types.hpp"

namespace lkme {

struct LogResult {
    ComplexMatrix value;
    // Set when an eigenvalue sits within 0.1 rad of the negative real axis,
    // where the principal branch is about to wrap.
    bool branch_warning = false;
};

struct HermitianEig {
    RealVector eigenvalues;       // ascending
    ComplexMatrix eigenvectors;   // unitary, columns match the eigenvalues
};

// Scaling-and-squaring Pade exponential; generators here are non-normal, so
// no spectral shortcut is taken.
inline ComplexMatrix mat_exp(const ComplexMatrix& m) {
    require_square(m, "mat_exp");
    if (!m.allFinite()) {
        throw DomainError("mat_exp: entries must be finite");
    }
    return m.exp();
}

// Principal logarithm (eigenvalue arguments in (-pi, pi]) via inverse
// scaling-and-squaring on the Schur form. Branch proximity is reported,
// never silently resolved.
inline LogResult mat_log(const ComplexMatrix& m) {
    require_square(m, "mat_log");
    if (!m.allFinite()) {
        throw DomainError("mat_log: entries must be finite");
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
    if (es.info() != Eigen::Success) {
        throw SingularityError("mat_log: eigenvalue computation did not converge");
    }
    const ComplexVector& ev = es.eigenvalues();
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double a = std::abs(ev(k));
        min_abs = std::min(min_abs, a);
        max_abs = std::max(max_abs, a);
    }
    if (ev.size() > 0 && min_abs <= 1e-14 * max_abs) {
        throw SingularityError("mat_log: matrix is singular to working precision");
    }
    bool warn = false;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (std::numbers::pi - std::abs(std::arg(ev(k))) < 0.1) {
            warn = true;
        }
    }
    return {m.log(), warn};
}

inline HermitianEig hermitian_eig(const ComplexMatrix& m, double tol = kStructuralTol) {
    require_square(m, "hermitian_eig");
    if (!is_hermitian(m, tol)) {
        throw ShapeError("hermitian_eig: matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success) {
        throw SingularityError("hermitian_eig: eigenvalue computation did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

// Moore-Penrose inverse; singular values below tol * sigma_max are dropped.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double tol = kRankCutoff) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cutoff) {
            inv(k) = 1.0 / sv(k);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace lkme
