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

#include "lkme/types.hpp"

namespace lkme {

// Generalized Gell-Mann matrices: Hermitian, traceless, tr(S_j S_k) = 2 delta_jk.
// Ordering is fixed so coefficient matrices stay comparable across runs:
// symmetric pairs by (row, col) lexicographic, then antisymmetric pairs,
// then the diagonal family. N = 2 yields (sigma_x, sigma_y, sigma_z).
inline std::vector<ComplexMatrix> su_generators(int n) {
    if (n < 2) {
        throw DomainError("su_generators: need dimension >= 2, got " + std::to_string(n));
    }
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(n) * n - 1);
    for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
            ComplexMatrix s = ComplexMatrix::Zero(n, n);
            s(r, c) = 1.0;
            s(c, r) = 1.0;
            out.push_back(std::move(s));
        }
    }
    for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
            ComplexMatrix s = ComplexMatrix::Zero(n, n);
            s(r, c) = Complex(0.0, -1.0);
            s(c, r) = Complex(0.0, 1.0);
            out.push_back(std::move(s));
        }
    }
    for (int l = 1; l < n; ++l) {
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        const double scale = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
        for (int j = 0; j < l; ++j) {
            s(j, j) = scale;
        }
        s(l, l) = -scale * l;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace lkme
