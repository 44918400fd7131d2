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
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lkme/linalg.hpp"
#include "lkme/types.hpp"

namespace lkme {

struct BchResult {
    Superoperator generator;
    int order = 0;
    bool norm_warning = false;
};

struct EvolutionSegment {
    Superoperator generator;  // units 1/time
    double duration = 0.0;
};

struct CombinedGenerator {
    Superoperator generator;
    bool branch_warning = false;
};

struct ConjugatedGenerator {
    Superoperator exact;
    Superoperator first_order;
};

// log(exp(X) exp(Y)) truncated after the stated order:
//   X + Y + [X,Y]/2 + [X,[X,Y]]/12 - [Y,[X,Y]]/12 - [Y,[X,[X,Y]]]/24.
// The warning fires when |X| + |Y| > ln 2, a common sufficient bound for
// convergence of the series.
inline BchResult bch_truncated(const Superoperator& x, const Superoperator& y, int order) {
    require_square(x, "bch_truncated");
    require_same_dim(x, y, "bch_truncated");
    if (order < 1 || order > 4) {
        throw DomainError("bch_truncated: order must be in 1..4, got " + std::to_string(order));
    }
    BchResult result;
    result.order = order;
    result.norm_warning = x.norm() + y.norm() > std::numbers::ln2;
    Superoperator z = x + y;
    if (order >= 2) {
        const Superoperator xy = commutator(x, y);
        z += 0.5 * xy;
        if (order >= 3) {
            z += (commutator(x, xy) - commutator(y, xy)) / 12.0;
            if (order >= 4) {
                z -= commutator(y, commutator(x, xy)) / 24.0;
            }
        }
    }
    result.generator = std::move(z);
    return result;
}

// Left fold over the list, re-truncating after each pairwise step, so the
// result approximates log(exp(G_1) exp(G_2) ... exp(G_n)) with G_1 leftmost.
inline BchResult bch_sequence(const std::vector<Superoperator>& gens, int order) {
    if (gens.empty()) {
        throw DomainError("bch_sequence: need at least one generator");
    }
    if (order < 1 || order > 4) {
        throw DomainError("bch_sequence: order must be in 1..4, got " + std::to_string(order));
    }
    require_square(gens.front(), "bch_sequence");
    BchResult result;
    result.order = order;
    result.generator = gens.front();
    for (std::size_t k = 1; k < gens.size(); ++k) {
        BchResult step = bch_truncated(result.generator, gens[k], order);
        result.generator = std::move(step.generator);
        result.norm_warning = result.norm_warning || step.norm_warning;
    }
    return result;
}

// Single time-independent generator reproducing a piecewise-constant
// schedule. Segments are listed earliest first; the earliest propagator is
// the rightmost factor of the product.
inline CombinedGenerator exact_combined_generator(const std::vector<EvolutionSegment>& segments) {
    if (segments.empty()) {
        throw DomainError("exact_combined_generator: need at least one segment");
    }
    const Eigen::Index nn = segments.front().generator.rows();
    Superoperator prod = Superoperator::Identity(nn, nn);
    for (const auto& seg : segments) {
        require_square(seg.generator, "exact_combined_generator");
        if (seg.generator.rows() != nn) {
            throw DimensionError("exact_combined_generator: segment dimensions differ");
        }
        if (seg.duration < 0.0) {
            throw DomainError("exact_combined_generator: durations must be nonnegative");
        }
        prod = mat_exp(seg.duration * seg.generator) * prod;
    }
    LogResult lr = mat_log(prod);
    return {std::move(lr.value), lr.branch_warning};
}

// Pulse sandwich exp(t Hs) exp(T Ls) exp(-t Hs). The similarity transform
// identity exp(X) exp(Y) exp(-X) = exp(exp(X) Y exp(-X)) makes the conjugated
// generator exact; first_order keeps only the leading commutator, which is
// how a strong impulsive drive shapes the noise to first order in t.
inline ConjugatedGenerator conjugated_generator(const Superoperator& hs, double t_omega, const Superoperator& ls,
                                                double duration) {
    require_square(hs, "conjugated_generator");
    require_same_dim(hs, ls, "conjugated_generator");
    if (!(duration > 0.0)) {
        throw DomainError("conjugated_generator: duration must be positive");
    }
    const Superoperator u = mat_exp(t_omega * hs);
    const Superoperator uinv = mat_exp(-t_omega * hs);
    ConjugatedGenerator out;
    out.exact = duration * (u * ls * uinv);
    out.first_order = duration * (ls + t_omega * commutator(hs, ls));
    return out;
}

// (exp(X/n) exp(Y/n))^n, converging to exp(X + Y) with error O(1/n).
inline Superoperator trotter_compose(const Superoperator& x, const Superoperator& y, long n) {
    require_square(x, "trotter_compose");
    require_same_dim(x, y, "trotter_compose");
    if (n < 1) {
        throw DomainError("trotter_compose: need n >= 1");
    }
    const double steps = static_cast<double>(n);
    Superoperator base = mat_exp(x / steps) * mat_exp(y / steps);
    Superoperator result = Superoperator::Identity(x.rows(), x.cols());
    long e = n;
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

}  // namespace lkme
