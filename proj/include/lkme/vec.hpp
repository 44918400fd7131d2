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

#include <unsupported/Eigen/KroneckerProduct>

#include "lkme/types.hpp"

namespace lkme {

// vec([[a,b],[c,d]]) = (a,b,c,d)^T. Row-first, so vec(L rho R) = (L (x) R^T) vec(rho).
inline VecState vec(const ComplexMatrix& m) {
    require_square(m, "vec");
    const Eigen::Index n = m.rows();
    VecState v(n * n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            v(r * n + c) = m(r, c);
        }
    }
    return v;
}

inline ComplexMatrix unvec(const VecState& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) + " is not a perfect square");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = v(r * n + c);
        }
    }
    return m;
}

// odot(L, R) = L (x) R^T, the matrix realizing rho -> L rho R on vec-ed states.
// Satisfies odot(A, B) * odot(C, D) = odot(A*C, D*B).
inline Superoperator odot(const ComplexMatrix& l, const ComplexMatrix& r) {
    require_square(l, "odot");
    require_square(r, "odot");
    if (l.rows() != r.rows()) {
        throw DimensionError("odot: operands must act on the same space");
    }
    return Eigen::kroneckerProduct(l, r.transpose());
}

// System dimension N of an N^2 x N^2 superoperator.
inline Eigen::Index superop_sysdim(const ComplexMatrix& g) {
    require_square(g, "superop_sysdim");
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(g.rows()))));
    if (n * n != g.rows()) {
        throw DimensionError("superop_sysdim: side " + std::to_string(g.rows()) + " is not a perfect square");
    }
    return n;
}

}  // namespace lkme
