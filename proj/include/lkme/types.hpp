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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace lkme {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Row-first flattening of a density matrix; length is always sysdim^2.
using VecState = ComplexVector;

// N^2 x N^2 matrix acting on vec-ed density matrices.
using Superoperator = ComplexMatrix;

// Structural checks (Hermiticity, trace preservation) at double precision
// with N^4-sized intermediates.
inline constexpr double kStructuralTol = 1e-10;

// Singular values below kRankCutoff * sigma_max count as zero.
inline constexpr double kRankCutoff = 1e-12;

// Canonicalization drops terms whose weight |rate| * |op|_HS^2 falls below this.
inline constexpr double kTermDropTol = 1e-12;

// Eigenvalue floor below which a rate matrix counts as indefinite.
inline constexpr double kPsdFloor = 1e-10;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_square(const ComplexMatrix& m, const std::string& who) {
    if (m.rows() != m.cols()) {
        throw DimensionError(who + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    }
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const std::string& who) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(who + ": operand dimensions differ");
    }
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b + b * a;
}

inline double hermiticity_deviation(const ComplexMatrix& m) {
    return (m - m.adjoint()).norm();
}

// Relative test |M - M^dag| <= tol * |M|; the zero matrix passes.
inline bool is_hermitian(const ComplexMatrix& m, double tol = kStructuralTol) {
    return hermiticity_deviation(m) <= tol * m.norm();
}

}  // namespace lkme
