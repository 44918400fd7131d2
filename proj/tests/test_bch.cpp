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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lkme/bch.hpp"
#include "lkme/generators.hpp"
#include "lkme/linalg.hpp"
#include "lkme/types.hpp"

using namespace lkme;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix lowering() {
    ComplexMatrix m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

Superoperator sample_x() {
    return 0.1 * hamiltonian_superop(pauli_x());
}

Superoperator sample_y() {
    return 0.1 * lindblad_single_superop(lowering());
}

}  // namespace

TEST_CASE("bch_truncated validates the order", "[bch]") {
    const Superoperator x = sample_x();
    CHECK_THROWS_AS(bch_truncated(x, x, 0), DomainError);
    CHECK_THROWS_AS(bch_truncated(x, x, 5), DomainError);
}

TEST_CASE("bch_truncated is exact for commuting arguments", "[bch]") {
    const Superoperator x = sample_x();
    const Superoperator y = (x * x).eval();
    for (int order = 1; order <= 4; ++order) {
        const BchResult res = bch_truncated(x, y, order);
        CHECK((res.generator - (x + y)).norm() < 1e-12);
        CHECK(res.order == order);
        CHECK_FALSE(res.norm_warning);
    }
}

TEST_CASE("bch_truncated with a zero argument returns the other", "[bch]") {
    const Superoperator x = sample_x();
    const Superoperator zero = Superoperator::Zero(4, 4);
    CHECK((bch_truncated(x, zero, 4).generator - x).norm() == 0.0);
}

TEST_CASE("bch_truncated warns outside the convergence ball", "[bch]") {
    const Superoperator x = 10.0 * sample_x();
    CHECK(bch_truncated(x, x, 2).norm_warning);
    CHECK_FALSE(bch_truncated(sample_x(), sample_y(), 2).norm_warning);
}

TEST_CASE("bch_truncated error shrinks as the order grows", "[bch]") {
    ComplexMatrix a(2, 2);
    a << 0.3, Complex(0, 1), 1, -0.2;
    const Superoperator x = sample_x() + 0.1 * lindblad_single_superop(lowering());
    const Superoperator y =
        0.1 * hamiltonian_superop(pauli_z()) + 0.1 * lindblad_single_superop(a);
    const Superoperator exact = mat_log((mat_exp(x) * mat_exp(y)).eval()).value;
    double previous = 1e300;
    for (int order = 1; order <= 4; ++order) {
        const double err = (bch_truncated(x, y, order).generator - exact).norm();
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-5);
}

TEST_CASE("bch_sequence folds left to right", "[bch]") {
    const Superoperator x = sample_x();
    const Superoperator y = sample_y();
    CHECK_THROWS_AS(bch_sequence({}, 2), DomainError);
    CHECK((bch_sequence({x}, 3).generator - x).norm() == 0.0);
    CHECK((bch_sequence({x, (2.0 * x).eval(), (3.0 * x).eval()}, 2).generator - 6.0 * x).norm() < 1e-12);
    CHECK((bch_sequence({x, y}, 2).generator - bch_truncated(x, y, 2).generator).norm() == 0.0);
    CHECK((bch_sequence({x, y}, 2).generator - bch_sequence({y, x}, 2).generator).norm() > 1e-4);
}

TEST_CASE("exact_combined_generator multiplies segments time-ordered", "[bch]") {
    const Superoperator x = sample_x();
    const Superoperator y = sample_y();

    CHECK_THROWS_AS(exact_combined_generator({}), DomainError);
    CHECK_THROWS_AS(exact_combined_generator({{x, -0.5}}), DomainError);

    const CombinedGenerator single = exact_combined_generator({{x, 0.25}});
    CHECK((single.generator - 0.25 * x).norm() < 1e-12);
    CHECK_FALSE(single.branch_warning);

    const CombinedGenerator commuting = exact_combined_generator({{x, 1.0}, {(x * x).eval(), 1.0}});
    CHECK((commuting.generator - (x + x * x)).norm() < 1e-12);

    // Earliest segment acts first, so it sits rightmost in the product.
    const CombinedGenerator ordered = exact_combined_generator({{x, 1.0}, {y, 1.0}});
    const Superoperator want = mat_log((mat_exp(y) * mat_exp(x)).eval()).value;
    CHECK((ordered.generator - want).norm() < 1e-12);
    const Superoperator wrong = mat_log((mat_exp(x) * mat_exp(y)).eval()).value;
    CHECK((ordered.generator - wrong).norm() > 1e-4);
}

TEST_CASE("conjugated_generator reduces to plain scaling in easy cases", "[bch]") {
    const Superoperator hs = hamiltonian_superop(pauli_x());
    const Superoperator ls = lindblad_single_superop(pauli_z());

    CHECK_THROWS_AS(conjugated_generator(hs, 0.1, ls, 0.0), DomainError);
    CHECK_THROWS_AS(conjugated_generator(hs, 0.1, ls, -1.0), DomainError);

    const ConjugatedGenerator at_zero = conjugated_generator(hs, 0.0, ls, 0.7);
    CHECK((at_zero.exact - 0.7 * ls).norm() < 1e-12);
    CHECK((at_zero.first_order - 0.7 * ls).norm() < 1e-12);

    const Superoperator commuting = hamiltonian_superop(pauli_z());
    const ConjugatedGenerator still = conjugated_generator(commuting, 0.3, ls, 0.7);
    CHECK((still.exact - 0.7 * ls).norm() < 1e-11);
    CHECK((still.first_order - 0.7 * ls).norm() < 1e-12);
}

TEST_CASE("conjugated_generator matches the sandwich product", "[bch]") {
    const Superoperator hs = hamiltonian_superop(pauli_x());
    const Superoperator ls = lindblad_single_superop(pauli_z());
    const double t_omega = 0.2;
    const double duration = 0.9;

    const ConjugatedGenerator conj = conjugated_generator(hs, t_omega, ls, duration);
    const CombinedGenerator sandwich = exact_combined_generator(
        {{(-hs).eval(), t_omega}, {ls, duration}, {hs, t_omega}});
    CHECK((conj.exact - sandwich.generator).norm() < 1e-11);

    // The first-order truncation misses a piece quadratic in the pulse area.
    const ConjugatedGenerator fine = conjugated_generator(hs, t_omega / 10.0, ls, duration);
    const double gap = (conj.exact - conj.first_order).norm();
    const double fine_gap = (fine.exact - fine.first_order).norm();
    CHECK(gap / fine_gap > 50.0);
    CHECK(gap / fine_gap < 200.0);
}

TEST_CASE("trotter_compose approximates the combined flow", "[bch]") {
    const Superoperator x = sample_x();
    const Superoperator y = sample_y();

    CHECK_THROWS_AS(trotter_compose(x, y, 0), DomainError);

    const Superoperator once = trotter_compose(x, y, 1);
    CHECK((once - mat_exp(x) * mat_exp(y)).norm() < 1e-13);

    const Superoperator commuting = trotter_compose(x, (x * x).eval(), 8);
    CHECK((commuting - mat_exp((x + x * x).eval())).norm() < 1e-12);

    const Superoperator exact = mat_exp((x + y).eval());
    const double err4 = (trotter_compose(x, y, 4) - exact).norm();
    const double err16 = (trotter_compose(x, y, 16) - exact).norm();
    CHECK(err16 < err4 / 2.0);
}
