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
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lkme/algebra.hpp"
#include "lkme/bch.hpp"
#include "lkme/generators.hpp"
#include "lkme/io.hpp"
#include "lkme/linalg.hpp"
#include "lkme/projection.hpp"
#include "lkme/su.hpp"
#include "lkme/types.hpp"
#include "lkme/vec.hpp"

namespace lkme {

struct VerifyOptions {
    int trials = 200;
    std::uint64_t seed = 7;
    std::vector<int> dims = {2, 3, 4};
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_deviation = 0.0;
    double threshold = 0.0;
    std::string detail;
    nlohmann::ordered_json replay;  // worst-trial inputs, populated only on failure
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

// Independent stream per (seed, check, dim, trial) so any trial can be
// regenerated in isolation and batches are parallelism-invariant.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double re = dist(rng);
            const double im = dist(rng);
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
    const ComplexMatrix m = random_matrix(rng, n);
    return ((m + m.adjoint()) / 2.0).eval();
}

inline ComplexMatrix random_unit_norm(std::mt19937_64& rng, int n) {
    ComplexMatrix m = random_matrix(rng, n);
    m /= m.norm();
    return m;
}

inline LindbladSpec random_physical_spec(std::mt19937_64& rng, int n, int nops) {
    LindbladSpec spec;
    const ComplexMatrix m = random_matrix(rng, nops);
    spec.gamma = (m * m.adjoint() / static_cast<double>(nops)).eval();
    spec.ops.reserve(static_cast<std::size_t>(nops));
    for (int k = 0; k < nops; ++k) {
        spec.ops.push_back(random_matrix(rng, n));
    }
    return spec;
}

inline double pick_hbar(std::mt19937_64& rng) {
    constexpr double values[] = {0.5, 1.0, 2.0};
    return values[rng() % 3];
}

inline double rel_deviation(const ComplexMatrix& got, const ComplexMatrix& want) {
    return (got - want).norm() / std::max(1.0, want.norm());
}

inline std::vector<double> geomspace(double lo, double hi, int npts) {
    std::vector<double> out(static_cast<std::size_t>(npts));
    const double step = std::log(hi / lo) / (npts - 1);
    for (int k = 0; k < npts; ++k) {
        out[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
    }
    return out;
}

inline double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += std::log(xs[k]);
        my += std::log(ys[k]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = std::log(xs[k]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(ys[k]) - my);
    }
    return sxy / sxx;
}

using Capture = std::vector<std::pair<std::string, ComplexMatrix>>;

inline void capture_matrix(Capture* cap, const std::string& label, const ComplexMatrix& m) {
    if (cap != nullptr) {
        cap->emplace_back(label, m);
    }
}

inline void capture_scalar(Capture* cap, const std::string& label, double value) {
    if (cap != nullptr) {
        ComplexMatrix m(1, 1);
        m(0, 0) = value;
        cap->emplace_back(label, m);
    }
}

// Scans all trials for the worst deviation; on failure the worst trial is
// re-seeded and its inputs captured so the replay file pins the instance.
template <typename TrialFn>
CheckResult run_trials(std::string name, double threshold, int trials, std::uint64_t seed, int dim, TrialFn&& fn) {
    CheckResult res;
    res.name = std::move(name);
    res.threshold = threshold;
    const std::uint64_t tag = fnv1a64(res.name);
    double worst = -1.0;
    int worst_trial = 0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(mix_seed(seed, tag, static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(t)));
        const double dev = fn(rng, static_cast<Capture*>(nullptr));
        if (dev > worst) {
            worst = dev;
            worst_trial = t;
        }
    }
    res.max_deviation = worst;
    res.pass = worst <= threshold;
    if (!res.pass) {
        std::mt19937_64 rng(
            mix_seed(seed, tag, static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(worst_trial)));
        Capture inputs;
        fn(rng, &inputs);
        res.replay["check"] = res.name;
        res.replay["seed"] = seed;
        res.replay["dim"] = dim;
        res.replay["trial"] = worst_trial;
        res.replay["deviation"] = worst;
        res.replay["threshold"] = threshold;
        nlohmann::ordered_json ins = nlohmann::ordered_json::object();
        for (const auto& [label, m] : inputs) {
            ins[label] = matrix_to_json(m);
        }
        res.replay["inputs"] = ins;
    }
    return res;
}

inline std::string format_slope_detail(double target, double band) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "target slope %g, tolerance %g, reported value is |slope - target|", target, band);
    return buf;
}

}  // namespace detail

// Randomized closed-form identity suite for the generator algebra.
inline std::vector<CheckResult> verify_identities(const VerifyOptions& opt) {
    using detail::Capture;
    std::vector<CheckResult> out;
    for (int n : opt.dims) {
        const std::string suffix = ".N" + std::to_string(n);

        out.push_back(detail::run_trials(
            "identities.hh_closed" + suffix, 1e-10, opt.trials, opt.seed, n, [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix g = detail::random_hermitian(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "g", g);
                const Superoperator closed = evaluate(hh_commutator_closed(h, g, hbar));
                const Superoperator numeric =
                    commutator_super(hamiltonian_superop(h, hbar), hamiltonian_superop(g, hbar));
                return detail::rel_deviation(closed, numeric);
            }));

        out.push_back(detail::run_trials(
            "identities.hl_closed" + suffix, 1e-10, opt.trials, opt.seed, n, [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "a", a);
                const Superoperator closed = evaluate(hl_commutator_closed(h, a, hbar));
                const Superoperator numeric =
                    commutator_super(hamiltonian_superop(h, hbar), lindblad_single_superop(a));
                return detail::rel_deviation(closed, numeric);
            }));

        out.push_back(detail::run_trials(
            "identities.hl_pair" + suffix, 1e-10, opt.trials, opt.seed, n, [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "a", a);
                const Superoperator closed = lindblad_superop(hl_commutator_pair_spec(h, a, hbar));
                const Superoperator numeric =
                    commutator_super(hamiltonian_superop(h, hbar), lindblad_single_superop(a));
                return detail::rel_deviation(closed, numeric);
            }));

        out.push_back(detail::run_trials(
            "identities.ll_closed" + suffix, 1e-10, opt.trials, opt.seed, n, [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                const ComplexMatrix b = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "a", a);
                detail::capture_matrix(cap, "b", b);
                const Superoperator closed = evaluate(ll_commutator_closed(a, b, hbar));
                const Superoperator numeric =
                    commutator_super(lindblad_single_superop(a), lindblad_single_superop(b));
                return detail::rel_deviation(closed, numeric);
            }));

        out.push_back(detail::run_trials(
            "identities.ll_antisymmetry" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                const ComplexMatrix b = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "a", a);
                detail::capture_matrix(cap, "b", b);
                const Superoperator ab = evaluate(ll_commutator_closed(a, b, hbar));
                const Superoperator ba = evaluate(ll_commutator_closed(b, a, hbar));
                return (ab + ba).norm() / std::max(1.0, ab.norm());
            }));

        out.push_back(detail::run_trials(
            "identities.trace_removal" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "a", a);
                const Complex tr = a.trace();
                const ComplexMatrix id = ComplexMatrix::Identity(n, n);
                const ComplexMatrix shifted = a - (tr / static_cast<double>(n)) * id;
                const ComplexMatrix comp =
                    Complex(0.0, hbar / (2.0 * n)) * (std::conj(tr) * a - tr * a.adjoint());
                const Superoperator lhs = lindblad_single_superop(a);
                const Superoperator rhs = lindblad_single_superop(shifted) + hamiltonian_superop(comp, hbar);
                return detail::rel_deviation(rhs, lhs);
            }));

        out.push_back(detail::run_trials(
            "identities.trace_preserving" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "a", a);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const VecState idvec = vec(ComplexMatrix::Identity(n, n));
                double dev = 0.0;
                for (const Superoperator& g :
                     {hamiltonian_superop(h, hbar), lindblad_single_superop(a), lindblad_superop(spec)}) {
                    dev = std::max(dev, (idvec.adjoint() * g).norm() / std::max(1.0, g.norm()));
                }
                return dev;
            }));

        out.push_back(detail::run_trials(
            "identities.hermiticity_preserving" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                const ComplexMatrix rho = detail::random_hermitian(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "a", a);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                detail::capture_matrix(cap, "rho", rho);
                double dev = 0.0;
                for (const Superoperator& g :
                     {hamiltonian_superop(h, hbar), lindblad_single_superop(a), lindblad_superop(spec)}) {
                    const ComplexMatrix image = unvec(g * vec(rho));
                    dev = std::max(dev, hermiticity_deviation(image) / std::max(1.0, image.norm()));
                }
                return dev;
            }));

        out.push_back(detail::run_trials(
            "identities.canonicalize_roundtrip" + suffix, 1e-10, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const Superoperator before = hamiltonian_superop(h, hbar) + lindblad_superop(spec);
                const Superoperator after = evaluate(canonicalize(h, spec, hbar));
                return detail::rel_deviation(after, before);
            }));

        out.push_back(detail::run_trials(
            "identities.canonicalize_form" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const CanonicalForm form = canonicalize(h, spec, hbar);
                double dev = std::abs(form.hamiltonian.trace()) / std::max(1.0, form.hamiltonian.norm());
                for (const auto& term : form.terms) {
                    dev = std::max(dev, std::abs(term.op.trace()));
                    dev = std::max(dev, std::abs(term.op.squaredNorm() - 2.0) / 2.0);
                }
                return dev;
            }));

        out.push_back(detail::run_trials(
            "identities.canonicalize_idempotent" + suffix, 1e-12, opt.trials, opt.seed, n,
            [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const CanonicalForm first = canonicalize(h, spec, hbar);
                LindbladSpec again;
                const auto nterms = static_cast<Eigen::Index>(first.terms.size());
                again.gamma = ComplexMatrix::Zero(nterms, nterms);
                for (Eigen::Index j = 0; j < nterms; ++j) {
                    again.gamma(j, j) = first.terms[static_cast<std::size_t>(j)].rate;
                    again.ops.push_back(first.terms[static_cast<std::size_t>(j)].op);
                }
                const CanonicalForm second = canonicalize(first.hamiltonian, again, hbar);
                double dev = (second.hamiltonian - first.hamiltonian).norm() /
                             std::max(1.0, first.hamiltonian.norm());
                std::vector<double> r1;
                std::vector<double> r2;
                for (const auto& t : first.terms) {
                    r1.push_back(t.rate);
                }
                for (const auto& t : second.terms) {
                    r2.push_back(t.rate);
                }
                std::sort(r1.begin(), r1.end());
                std::sort(r2.begin(), r2.end());
                if (r1.size() != r2.size()) {
                    return 1.0;
                }
                for (std::size_t k = 0; k < r1.size(); ++k) {
                    dev = std::max(dev, std::abs(r1[k] - r2[k]) / std::max(1.0, std::abs(r1[k])));
                }
                return dev;
            }));

        out.push_back(detail::run_trials(
            "identities.jacobi" + suffix, 1e-9, opt.trials, opt.seed, n, [n](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const ComplexMatrix a = detail::random_matrix(rng, n);
                const ComplexMatrix b = detail::random_matrix(rng, n);
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "a", a);
                detail::capture_matrix(cap, "b", b);
                const Superoperator x = hamiltonian_superop(h, hbar);
                const Superoperator y = lindblad_single_superop(a);
                const Superoperator z = lindblad_single_superop(b);
                const Superoperator j = commutator_super(commutator_super(x, y), z) +
                                        commutator_super(commutator_super(y, z), x) +
                                        commutator_super(commutator_super(z, x), y);
                return j.norm() / std::max(1.0, x.norm() * y.norm() * z.norm());
            }));
    }
    return out;
}

// Composition suite: truncation scaling laws, time-ordering goldens, the
// pulse-sandwich conjugation identity, and Trotter convergence.
inline std::vector<CheckResult> verify_bch(const VerifyOptions& opt) {
    using detail::Capture;
    constexpr int kMatDim = 4;
    std::vector<CheckResult> out;

    struct SlopeWindow {
        int order;
        double lo;
    };
    // Lower scale cutoffs keep each fit above the double-precision floor of
    // the exact-log oracle; all windows sit inside [1e-3, 1e-1].
    constexpr SlopeWindow windows[] = {{1, 1e-3}, {2, 1e-3}, {3, 3e-3}, {4, 2e-2}};
    for (const auto& w : windows) {
        const double target = w.order + 1.0;
        CheckResult res = detail::run_trials(
            "bch.truncation_slope_order" + std::to_string(w.order), 0.2, 3, opt.seed, kMatDim,
            [&w, target](std::mt19937_64& rng, Capture* cap) {
                const ComplexMatrix x = detail::random_unit_norm(rng, kMatDim);
                const ComplexMatrix y = detail::random_unit_norm(rng, kMatDim);
                detail::capture_matrix(cap, "x", x);
                detail::capture_matrix(cap, "y", y);
                const std::vector<double> scales = detail::geomspace(w.lo, 1e-1, 7);
                std::vector<double> errors;
                errors.reserve(scales.size());
                for (double s : scales) {
                    const Superoperator sx = s * x;
                    const Superoperator sy = s * y;
                    const Superoperator exact = mat_log(mat_exp(sx) * mat_exp(sy)).value;
                    errors.push_back((bch_truncated(sx, sy, w.order).generator - exact).norm());
                }
                return std::abs(detail::fit_loglog_slope(scales, errors) - target);
            });
        res.detail = detail::format_slope_detail(target, 0.2);
        out.push_back(std::move(res));
    }

    {
        CheckResult res = detail::run_trials(
            "bch.sequence_slope_order2", 0.4, 3, opt.seed, kMatDim, [](std::mt19937_64& rng, Capture* cap) {
                const ComplexMatrix g0 = detail::random_unit_norm(rng, kMatDim);
                const ComplexMatrix g1 = detail::random_unit_norm(rng, kMatDim);
                const ComplexMatrix g2 = detail::random_unit_norm(rng, kMatDim);
                detail::capture_matrix(cap, "g0", g0);
                detail::capture_matrix(cap, "g1", g1);
                detail::capture_matrix(cap, "g2", g2);
                const std::vector<double> scales = detail::geomspace(1e-3, 1e-1, 7);
                std::vector<double> errors;
                errors.reserve(scales.size());
                for (double s : scales) {
                    const Superoperator folded = bch_sequence({s * g0, s * g1, s * g2}, 2).generator;
                    const Superoperator exact =
                        mat_log(mat_exp(s * g0) * mat_exp(s * g1) * mat_exp(s * g2)).value;
                    errors.push_back((folded - exact).norm());
                }
                return std::abs(detail::fit_loglog_slope(scales, errors) - 3.0);
            });
        res.detail = detail::format_slope_detail(3.0, 0.4);
        out.push_back(std::move(res));
    }

    out.push_back(detail::run_trials(
        "bch.commuting_exact", 1e-12, opt.trials, opt.seed, kMatDim, [](std::mt19937_64& rng, Capture* cap) {
            ComplexMatrix x = detail::random_unit_norm(rng, kMatDim);
            x *= 0.4;
            const ComplexMatrix y = x * x;
            detail::capture_matrix(cap, "x", x);
            const Superoperator exact = mat_log(mat_exp(x) * mat_exp(y)).value;
            double dev = 0.0;
            for (int order = 1; order <= 4; ++order) {
                dev = std::max(dev, detail::rel_deviation(bch_truncated(x, y, order).generator, exact));
            }
            return dev;
        }));

    out.push_back(detail::run_trials(
        "bch.conjugation_sandwich", 1e-10, std::min(opt.trials, 50), opt.seed, 2,
        [](std::mt19937_64& rng, Capture* cap) {
            const ComplexMatrix h = detail::random_hermitian(rng, 2);
            const ComplexMatrix a = detail::random_unit_norm(rng, 2);
            std::uniform_real_distribution<double> ud(0.0, 1.0);
            const double t_omega = 0.05 + 0.25 * ud(rng);
            const double duration = 0.3 + 0.7 * ud(rng);
            detail::capture_matrix(cap, "h", h);
            detail::capture_matrix(cap, "a", a);
            detail::capture_scalar(cap, "t_omega", t_omega);
            detail::capture_scalar(cap, "duration", duration);
            const Superoperator hs = hamiltonian_superop(h);
            const Superoperator ls = lindblad_single_superop(a);
            const ConjugatedGenerator conj = conjugated_generator(hs, t_omega, ls, duration);
            const CombinedGenerator combined = exact_combined_generator({
                {-hs, t_omega},
                {ls, duration},
                {hs, t_omega},
            });
            return detail::rel_deviation(combined.generator, conj.exact);
        }));

    {
        CheckResult res = detail::run_trials(
            "bch.shaped_noise_slope", 0.1, 1, opt.seed, 2, [](std::mt19937_64&, Capture*) {
                ComplexMatrix sx(2, 2);
                sx << 0, 1, 1, 0;
                ComplexMatrix sz(2, 2);
                sz << 1, 0, 0, -1;
                const Superoperator hs = hamiltonian_superop(sx);
                const Superoperator ls = lindblad_single_superop(sz);
                const std::vector<double> ts = {1e-1, 1e-2, 1e-3};
                std::vector<double> errors;
                errors.reserve(ts.size());
                for (double t : ts) {
                    const ConjugatedGenerator conj = conjugated_generator(hs, t, ls, 1.0);
                    errors.push_back((conj.exact - conj.first_order).norm());
                }
                return std::abs(detail::fit_loglog_slope(ts, errors) - 2.0);
            });
        res.detail = detail::format_slope_detail(2.0, 0.1);
        out.push_back(std::move(res));
    }

    out.push_back(detail::run_trials(
        "bch.shaped_noise_structured_form", 1e-10, opt.trials, opt.seed, 2, [](std::mt19937_64& rng, Capture* cap) {
            const double hbar = detail::pick_hbar(rng);
            const ComplexMatrix h = detail::random_hermitian(rng, 2);
            const ComplexMatrix a = detail::random_matrix(rng, 2);
            std::uniform_real_distribution<double> ud(0.0, 1.0);
            const double t_omega = 0.01 + 0.29 * ud(rng);
            detail::capture_scalar(cap, "hbar", hbar);
            detail::capture_matrix(cap, "h", h);
            detail::capture_matrix(cap, "a", a);
            detail::capture_scalar(cap, "t_omega", t_omega);
            const Superoperator hs = hamiltonian_superop(h, hbar);
            const Superoperator ls = lindblad_single_superop(a);
            const Superoperator first_order = conjugated_generator(hs, t_omega, ls, 1.0).first_order;
            GeneratorTerms structured = hl_commutator_closed(h, a, hbar);
            for (auto& term : structured.lindblad_terms) {
                term.coefficient *= t_omega;
            }
            structured.lindblad_terms.push_back({1.0, a});
            return detail::rel_deviation(evaluate(structured), first_order);
        }));

    {
        CheckResult res = detail::run_trials(
            "bch.trotter_slope", 0.1, 3, opt.seed, kMatDim, [](std::mt19937_64& rng, Capture* cap) {
                const ComplexMatrix x = detail::random_unit_norm(rng, kMatDim);
                const ComplexMatrix y = detail::random_unit_norm(rng, kMatDim);
                detail::capture_matrix(cap, "x", x);
                detail::capture_matrix(cap, "y", y);
                const Superoperator target = mat_exp(x + y);
                std::vector<double> ns;
                std::vector<double> errors;
                for (long n = 8; n <= 256; n *= 2) {
                    ns.push_back(static_cast<double>(n));
                    errors.push_back((trotter_compose(x, y, n) - target).norm());
                }
                return std::abs(detail::fit_loglog_slope(ns, errors) - (-1.0));
            });
        res.detail = detail::format_slope_detail(-1.0, 0.1);
        out.push_back(std::move(res));
    }

    return out;
}

// Bi-orthogonal basis suite: rank and duality structure, span membership of
// Lindblad-form generators, channel round-trips, and the re-coherence flag.
inline std::vector<CheckResult> verify_projection(const VerifyOptions& opt) {
    using detail::Capture;
    std::vector<CheckResult> out;
    for (int n : opt.dims) {
        const std::string suffix = ".N" + std::to_string(n);
        const SuperBasis basis = build_basis(n);
        const DualBasis dual = build_dual(basis);
        const int m = n * n - 1;
        const Eigen::Index expected_cols = static_cast<Eigen::Index>(m) * (m + 1);

        {
            CheckResult res;
            res.name = "projection.basis_rank" + suffix;
            res.threshold = 0.5;
            const bool shape_ok = basis.vectors.cols() == expected_cols;
            const bool rank_ok = basis.min_singular_value > 1e-8 * basis.max_singular_value;
            res.max_deviation = (shape_ok && rank_ok) ? 0.0 : 1.0;
            res.pass = shape_ok && rank_ok;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "columns=%ld expected=%ld, singular values [%.3e, %.3e]",
                          static_cast<long>(basis.vectors.cols()), static_cast<long>(expected_cols),
                          basis.min_singular_value, basis.max_singular_value);
            res.detail = buf;
            out.push_back(std::move(res));
        }

        {
            CheckResult res;
            res.name = "projection.dual_identity" + suffix;
            res.threshold = 1e-10;
            const Eigen::Index d = basis.vectors.cols();
            res.max_deviation =
                (dual.vectors.adjoint() * basis.vectors - ComplexMatrix::Identity(d, d)).norm();
            res.pass = res.max_deviation <= res.threshold;
            out.push_back(std::move(res));
        }

        {
            CheckResult res;
            res.name = "projection.projector_idempotent" + suffix;
            res.threshold = 1e-9;
            const ComplexMatrix proj = basis.vectors * dual.vectors.adjoint();
            res.max_deviation = (proj * proj - proj).norm();
            res.pass = res.max_deviation <= res.threshold;
            out.push_back(std::move(res));
        }

        {
            CheckResult res;
            res.name = "projection.span_equality" + suffix;
            res.threshold = 1e-10;
            const ComplexMatrix proj = basis.vectors * dual.vectors.adjoint();
            res.max_deviation =
                (proj * basis.vectors - basis.vectors).norm() / std::max(1.0, basis.vectors.norm());
            res.pass = res.max_deviation <= res.threshold;
            out.push_back(std::move(res));
        }

        out.push_back(detail::run_trials(
            "projection.basis_slots" + suffix, 1e-12, 1, opt.seed, n, [&](std::mt19937_64&, Capture*) {
                double dev = 0.0;
                for (int i = 0; i < m; ++i) {
                    const GeneratorDecomposition dec =
                        project_generator(hamiltonian_superop(basis.su_ops[static_cast<std::size_t>(i)]), basis, dual);
                    ComplexVector want = ComplexVector::Zero(m);
                    want(i) = 1.0;
                    dev = std::max(dev, (dec.h - want).norm());
                    dev = std::max(dev, dec.gamma.norm());
                    dev = std::max(dev, dec.residual_norm);
                }
                return dev;
            }));

        out.push_back(detail::run_trials(
            "projection.in_span" + suffix, 1e-10, opt.trials, opt.seed, n, [&](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const Superoperator g = hamiltonian_superop(h, hbar) + lindblad_superop(spec);
                const GeneratorDecomposition dec = project_generator(g, basis, dual);
                return dec.residual_norm / std::max(1.0, g.norm());
            }));

        out.push_back(detail::run_trials(
            "projection.hermitian_coefficients" + suffix, 1e-9, opt.trials, opt.seed, n,
            [&](std::mt19937_64& rng, Capture* cap) {
                const double hbar = detail::pick_hbar(rng);
                const ComplexMatrix h = detail::random_hermitian(rng, n);
                const LindbladSpec spec = detail::random_physical_spec(rng, n, 1 + static_cast<int>(rng() % n));
                detail::capture_scalar(cap, "hbar", hbar);
                detail::capture_matrix(cap, "h", h);
                detail::capture_matrix(cap, "gamma", spec.gamma);
                for (std::size_t k = 0; k < spec.ops.size(); ++k) {
                    detail::capture_matrix(cap, "op" + std::to_string(k), spec.ops[k]);
                }
                const Superoperator g = hamiltonian_superop(h, hbar) + lindblad_superop(spec);
                const GeneratorDecomposition dec = project_generator(g, basis, dual);
                const double scale = std::max(1.0, g.norm());
                double dev = dec.h.imag().cwiseAbs().maxCoeff() / scale;
                dev = std::max(dev, hermiticity_deviation(dec.gamma) / scale);
                return dev;
            }));

        const int round_trials = n >= 4 ? std::min(opt.trials, 20) : opt.trials;
        auto round_trip_body = [&, n](std::mt19937_64& rng, Capture* cap, bool residual_ratio) {
            ComplexVector h = ComplexVector::Zero(m);
            std::normal_distribution<double> dist(0.0, 1.0);
            for (int k = 0; k < m; ++k) {
                h(k) = dist(rng);
            }
            const ComplexMatrix mm = detail::random_matrix(rng, m);
            ComplexMatrix gamma = (mm * mm.adjoint() / static_cast<double>(m)).eval();
            std::uniform_real_distribution<double> ud(0.2, 1.0);
            GeneratorDecomposition seedling;
            seedling.h = h;
            seedling.gamma = gamma;
            Superoperator g = reconstruct(seedling, basis);
            const double scale = 0.5 * ud(rng) / std::max(g.norm(), 1e-300);
            h *= scale;
            gamma *= scale;
            g *= scale;
            detail::capture_matrix(cap, "gamma", gamma);
            detail::capture_matrix(cap, "h_coefficients", ComplexMatrix(h));
            const Superoperator channel = mat_exp(g);
            const LogResult lr = mat_log(channel);
            const GeneratorDecomposition dec = project_generator(lr.value, basis, dual);
            if (residual_ratio) {
                return dec.residual_norm / std::max(lr.value.norm(), 1e-300);
            }
            return std::max((dec.h - h).norm(), (dec.gamma - gamma).norm());
        };

        out.push_back(detail::run_trials(
            "projection.channel_round_trip" + suffix, 1e-8, round_trials, opt.seed, n,
            [&](std::mt19937_64& rng, Capture* cap) { return round_trip_body(rng, cap, false); }));

        out.push_back(detail::run_trials(
            "projection.channel_residual" + suffix, 1e-10, round_trials, opt.seed, n,
            [&](std::mt19937_64& rng, Capture* cap) { return round_trip_body(rng, cap, true); }));

        if (n == 2) {
            out.push_back(detail::run_trials(
                "projection.golden_commutator" + suffix, 1e-10, 1, opt.seed, n, [&](std::mt19937_64&, Capture*) {
                    ComplexMatrix a(2, 2);
                    a << 1, -4, 3, -1;
                    ComplexMatrix b(2, 2);
                    b << -2, 4, 2, 2;
                    ComplexMatrix sy(2, 2);
                    sy << 0, Complex(0, -1), Complex(0, 1), 0;
                    const Superoperator numeric =
                        commutator_super(lindblad_single_superop(a), lindblad_single_superop(b));
                    return detail::rel_deviation(numeric, hamiltonian_superop((14.0 * sy).eval()));
                }));

            out.push_back(detail::run_trials(
                "projection.golden_projection" + suffix, 1e-9, 1, opt.seed, n, [&](std::mt19937_64&, Capture*) {
                    ComplexMatrix a(2, 2);
                    a << 1, -4, 3, -1;
                    ComplexMatrix b(2, 2);
                    b << -2, 4, 2, 2;
                    const Superoperator numeric =
                        commutator_super(lindblad_single_superop(a), lindblad_single_superop(b));
                    const GeneratorDecomposition dec = project_generator(numeric, basis, dual);
                    ComplexVector want = ComplexVector::Zero(3);
                    want(1) = 14.0;
                    return std::max((dec.h - want).norm(), dec.gamma.norm());
                }));

            {
                CheckResult res;
                res.name = "projection.ll_negative_rates" + suffix;
                res.threshold = 0.05;
                const std::uint64_t tag = detail::fnv1a64(res.name);
                const int pairs = 100;
                int flagged = 0;
                int first_clean = -1;
                for (int t = 0; t < pairs; ++t) {
                    std::mt19937_64 rng(detail::mix_seed(opt.seed, tag, static_cast<std::uint64_t>(n),
                                                         static_cast<std::uint64_t>(t)));
                    const ComplexMatrix a = detail::random_matrix(rng, n);
                    const ComplexMatrix b = detail::random_matrix(rng, n);
                    const NegativeRateReport report =
                        detect_negative_rates(ll_commutator_closed(a, b), basis, dual);
                    if (report.has_negative) {
                        ++flagged;
                    } else if (first_clean < 0) {
                        first_clean = t;
                    }
                }
                res.max_deviation = static_cast<double>(pairs - flagged) / pairs;
                res.pass = res.max_deviation <= res.threshold;
                char buf[96];
                std::snprintf(buf, sizeof(buf), "negative-rate pairs: %d/%d", flagged, pairs);
                res.detail = buf;
                if (!res.pass && first_clean >= 0) {
                    std::mt19937_64 rng(detail::mix_seed(opt.seed, tag, static_cast<std::uint64_t>(n),
                                                         static_cast<std::uint64_t>(first_clean)));
                    const ComplexMatrix a = detail::random_matrix(rng, n);
                    const ComplexMatrix b = detail::random_matrix(rng, n);
                    res.replay["check"] = res.name;
                    res.replay["seed"] = opt.seed;
                    res.replay["trial"] = first_clean;
                    res.replay["inputs"]["a"] = matrix_to_json(a);
                    res.replay["inputs"]["b"] = matrix_to_json(b);
                }
                out.push_back(std::move(res));
            }
        }
    }
    return out;
}

inline std::vector<CheckResult> verify_all(const VerifyOptions& opt) {
    std::vector<CheckResult> out = verify_identities(opt);
    std::vector<CheckResult> bch = verify_bch(opt);
    std::vector<CheckResult> proj = verify_projection(opt);
    out.insert(out.end(), std::make_move_iterator(bch.begin()), std::make_move_iterator(bch.end()));
    out.insert(out.end(), std::make_move_iterator(proj.begin()), std::make_move_iterator(proj.end()));
    return out;
}

}  // namespace lkme
