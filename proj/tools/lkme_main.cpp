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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lkme/lkme.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitSingular = 4;

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

struct CliState {
    double hbar = 1.0;
    int order = 2;
    double tol = lkme::kRankCutoff;
    int trials = 200;
    std::uint64_t seed = 7;
    std::vector<int> dims{2, 3, 4};
    std::string output;

    std::string superop_kind;
    std::vector<std::string> superop_inputs;
    std::string gamma_path;

    std::string mode = "numeric";
    std::string lhs_kind = "hs";
    std::string rhs_kind = "l1s";
    std::string lhs_path;
    std::string rhs_path;

    std::string schedule_path;
    std::string channel_path;
    std::string suite;

    std::vector<std::string> echo;
};

void emit(const ordered_json& j, const std::string& output) {
    if (output.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(output);
    if (!out) {
        throw lkme::ParseError("cannot open " + output + " for writing");
    }
    out << j.dump(2) << "\n";
}

lkme::MatrixFile read_operator_file(const std::string& path) {
    lkme::MatrixFile file = lkme::read_matrix_file(path);
    if (file.kind != lkme::MatrixKind::Operator) {
        throw lkme::ParseError(path + ": expected an operator file, got kind \"" + to_string(file.kind) + "\"");
    }
    return file;
}

ordered_json terms_to_json(const lkme::GeneratorTerms& terms) {
    ordered_json j;
    j["hbar"] = terms.hbar;
    j["physical"] = terms.physical;
    j["hamiltonian"] = lkme::matrix_to_json(terms.hamiltonian);
    ordered_json arr = ordered_json::array();
    for (const auto& term : terms.lindblad_terms) {
        ordered_json tj;
        tj["coefficient"] = term.coefficient;
        tj["op"] = lkme::matrix_to_json(term.op);
        arr.push_back(std::move(tj));
    }
    j["lindblad_terms"] = std::move(arr);
    return j;
}

ordered_json canonical_to_json(const lkme::CanonicalForm& form) {
    ordered_json j;
    j["hbar"] = form.hbar;
    j["hamiltonian"] = lkme::matrix_to_json(form.hamiltonian);
    ordered_json arr = ordered_json::array();
    for (const auto& term : form.terms) {
        ordered_json tj;
        tj["rate"] = term.rate;
        tj["op"] = lkme::matrix_to_json(term.op);
        arr.push_back(std::move(tj));
    }
    j["terms"] = std::move(arr);
    return j;
}

ordered_json rates_to_json(const lkme::NegativeRateReport& report) {
    ordered_json j;
    j["has_negative"] = report.has_negative;
    j["rates"] = report.negative_rates;
    return j;
}

int run_superop(const CliState& st) {
    using namespace lkme;
    Superoperator result;
    if (st.superop_kind == "ls") {
        if (st.gamma_path.empty()) {
            throw ParseError("superop ls requires --gamma");
        }
        MatrixFile gfile = read_matrix_file(st.gamma_path);
        if (gfile.kind == MatrixKind::Superoperator) {
            throw ParseError(st.gamma_path + ": --gamma must hold a rate matrix, not a superoperator");
        }
        LindbladSpec spec;
        spec.gamma = gfile.matrix;
        spec.physical = false;
        for (const auto& path : st.superop_inputs) {
            spec.ops.push_back(read_operator_file(path).matrix);
        }
        result = lindblad_superop(spec);
    } else {
        if (st.superop_inputs.size() != 1) {
            throw ParseError("superop " + st.superop_kind + " takes exactly one input file");
        }
        const MatrixFile file = read_operator_file(st.superop_inputs.front());
        result = st.superop_kind == "hs" ? hamiltonian_superop(file.matrix, st.hbar)
                                         : lindblad_single_superop(file.matrix);
    }
    emit(matrix_file_to_json(make_matrix_file(result, MatrixKind::Superoperator)), st.output);
    return kExitOk;
}

int run_commute(const CliState& st) {
    using namespace lkme;
    Stopwatch watch;
    const MatrixFile lhs = read_operator_file(st.lhs_path);
    const MatrixFile rhs = read_operator_file(st.rhs_path);
    if (lhs.dim != rhs.dim) {
        throw DimensionError("commute: input dimensions differ");
    }
    const int n = lhs.dim;

    const auto build = [&](const std::string& kind, const ComplexMatrix& m) {
        return kind == "hs" ? hamiltonian_superop(m, st.hbar) : lindblad_single_superop(m);
    };
    const Superoperator numeric =
        commutator_super(build(st.lhs_kind, lhs.matrix), build(st.rhs_kind, rhs.matrix));

    ordered_json report;
    report["command"] = st.echo;
    report["hbar"] = st.hbar;
    report["mode"] = st.mode;
    report["lhs_kind"] = st.lhs_kind;
    report["rhs_kind"] = st.rhs_kind;

    Superoperator comm = numeric;
    if (st.mode == "closed") {
        GeneratorTerms terms;
        if (st.lhs_kind == "hs" && st.rhs_kind == "hs") {
            terms = hh_commutator_closed(lhs.matrix, rhs.matrix, st.hbar);
        } else if (st.lhs_kind == "hs" && st.rhs_kind == "l1s") {
            terms = hl_commutator_closed(lhs.matrix, rhs.matrix, st.hbar);
        } else if (st.lhs_kind == "l1s" && st.rhs_kind == "hs") {
            terms = negated(hl_commutator_closed(rhs.matrix, lhs.matrix, st.hbar));
        } else {
            terms = ll_commutator_closed(lhs.matrix, rhs.matrix, st.hbar);
        }
        comm = evaluate(terms);
        report["closed_terms"] = terms_to_json(terms);
        report["closed_vs_numeric_deviation"] = detail::rel_deviation(comm, numeric);
    }
    report["commutator"] = matrix_file_to_json(make_matrix_file(comm, MatrixKind::Superoperator));

    const SuperBasis basis = build_basis(n);
    const DualBasis dual = build_dual(basis, st.tol);
    const GeneratorDecomposition dec = project_generator(comm, basis, dual);
    ordered_json proj;
    proj["h"] = complex_vector_to_json(dec.h);
    proj["gamma"] = matrix_to_json(dec.gamma);
    proj["residual_norm"] = dec.residual_norm;
    proj["in_span"] = dec.in_span;
    report["projection"] = std::move(proj);

    const NegativeRateReport rates = negative_rates_from_gamma(dec.gamma);
    report["negative_rates"] = rates_to_json(rates);

    ordered_json warnings = ordered_json::array();
    if (rates.has_negative) {
        warnings.push_back(
            "negative canonical rates: the commutator is not itself a Markovian generator (re-coherence content)");
    }
    if (!dec.in_span) {
        warnings.push_back("commutator has a component outside the Lindblad span");
    }
    report["warnings"] = std::move(warnings);
    report["timing_ms"] = watch.ms();
    emit(report, st.output);
    return kExitOk;
}

int run_sequence(const CliState& st) {
    using namespace lkme;
    Stopwatch watch;
    std::ifstream in(st.schedule_path);
    if (!in) {
        throw ParseError("cannot open " + st.schedule_path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(st.schedule_path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
        throw ParseError(st.schedule_path + ": schedule needs a \"segments\" array");
    }
    std::vector<EvolutionSegment> segments;
    ordered_json durations = ordered_json::array();
    for (const auto& sj : j["segments"]) {
        if (!sj.is_object() || !sj.contains("generator") || !sj["generator"].is_string() ||
            !sj.contains("duration") || !sj["duration"].is_number()) {
            throw ParseError(st.schedule_path +
                             ": each segment needs {\"generator\": <path>, \"duration\": <number>}");
        }
        const std::string path = sj["generator"].get<std::string>();
        MatrixFile file = read_matrix_file(path);
        if (file.kind != MatrixKind::Superoperator) {
            throw ParseError(path + ": expected a superoperator file");
        }
        const double duration = sj["duration"].get<double>();
        segments.push_back({std::move(file.matrix), duration});
        durations.push_back(duration);
    }
    if (segments.empty()) {
        throw DomainError("sequence: schedule has no segments");
    }

    const CombinedGenerator exact = exact_combined_generator(segments);
    // The BCH fold approximates the log of a left-to-right product, while the
    // earliest segment is the rightmost propagator factor, so the scaled
    // generators are folded latest-first.
    std::vector<Superoperator> scaled;
    scaled.reserve(segments.size());
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        scaled.push_back(it->duration * it->generator);
    }
    const BchResult bch = bch_sequence(scaled, st.order);

    ordered_json report;
    report["command"] = st.echo;
    report["hbar"] = st.hbar;
    report["order"] = st.order;
    report["segment_count"] = segments.size();
    report["durations"] = std::move(durations);
    report["exact_generator"] = matrix_file_to_json(make_matrix_file(exact.generator, MatrixKind::Superoperator));
    report["bch_generator"] = matrix_file_to_json(make_matrix_file(bch.generator, MatrixKind::Superoperator));
    report["difference_norm"] = (exact.generator - bch.generator).norm();
    ordered_json warnings = ordered_json::array();
    if (exact.branch_warning) {
        warnings.push_back("matrix logarithm close to the branch cut; combined generator may be on another branch");
    }
    if (bch.norm_warning) {
        warnings.push_back("BCH convergence heuristic violated: generator norms exceed ln 2");
    }
    report["warnings"] = std::move(warnings);
    report["timing_ms"] = watch.ms();
    emit(report, st.output);
    return kExitOk;
}

int run_extract(const CliState& st) {
    using namespace lkme;
    Stopwatch watch;
    const MatrixFile file = read_matrix_file(st.channel_path);
    if (file.kind != MatrixKind::Superoperator) {
        throw ParseError(st.channel_path + ": expected a superoperator file");
    }
    const ChannelExtraction ext = extract_lindblad_from_channel(file.matrix, st.tol);

    ordered_json report;
    report["command"] = st.echo;
    report["hbar"] = st.hbar;
    report["dim"] = file.dim;
    report["h"] = complex_vector_to_json(ext.decomposition.h);
    report["gamma"] = matrix_to_json(ext.decomposition.gamma);
    report["canonical"] = canonical_to_json(ext.canonical);
    report["residual_norm"] = ext.residual_norm;
    report["divisible_norm"] = ext.divisible_norm;
    report["in_span"] = ext.decomposition.in_span;
    report["branch_warning"] = ext.branch_warning;
    report["negative_rates"] = rates_to_json(ext.negative_rates);
    ordered_json warnings = ordered_json::array();
    if (ext.branch_warning) {
        warnings.push_back("matrix logarithm close to the branch cut; extraction may sit on another branch");
    }
    if (!ext.decomposition.in_span) {
        warnings.push_back("channel logarithm has a non-divisible component outside the Lindblad span");
    }
    if (ext.negative_rates.has_negative) {
        warnings.push_back("negative canonical rates: channel is not the exponential of a Markovian generator");
    }
    report["warnings"] = std::move(warnings);
    report["timing_ms"] = watch.ms();
    emit(report, st.output);
    return kExitOk;
}

int run_verify(const CliState& st) {
    using namespace lkme;
    Stopwatch watch;
    VerifyOptions opt;
    opt.trials = st.trials;
    opt.seed = st.seed;
    opt.dims = st.dims;

    std::vector<CheckResult> checks;
    if (st.suite == "identities") {
        checks = verify_identities(opt);
    } else if (st.suite == "bch") {
        checks = verify_bch(opt);
    } else if (st.suite == "projection") {
        checks = verify_projection(opt);
    } else {
        checks = verify_all(opt);
    }

    bool all_pass = true;
    ordered_json checks_json = ordered_json::array();
    ordered_json replay_files = ordered_json::array();
    for (const auto& check : checks) {
        all_pass = all_pass && check.pass;
        ordered_json cj;
        cj["name"] = check.name;
        cj["pass"] = check.pass;
        cj["max_deviation"] = check.max_deviation;
        cj["threshold"] = check.threshold;
        cj["detail"] = check.detail;
        checks_json.push_back(std::move(cj));
        if (!check.pass && !check.replay.is_null()) {
            const std::string path = "replay_" + check.name + ".json";
            std::ofstream out(path);
            if (out) {
                out << check.replay.dump(2) << "\n";
                replay_files.push_back(path);
            }
        }
    }

    ordered_json report;
    report["command"] = st.echo;
    report["suite"] = st.suite;
    report["trials"] = st.trials;
    report["seed"] = st.seed;
    report["dims"] = st.dims;
    report["pass"] = all_pass;
    report["checks"] = std::move(checks_json);
    if (!replay_files.empty()) {
        report["replay_files"] = std::move(replay_files);
    }
    report["timing_ms"] = watch.ms();
    emit(report, st.output);
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebra of Markovian semigroup generators as explicit matrices"};
    app.fallthrough();
    app.require_subcommand(1);

    CliState st;
    st.echo.reserve(static_cast<std::size_t>(argc > 1 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) {
        st.echo.emplace_back(argv[i]);
    }

    app.add_option("--hbar", st.hbar, "Planck constant scaling (default 1.0)")->check(CLI::PositiveNumber);
    app.add_option("--order", st.order, "BCH truncation order (default 2)")->check(CLI::Range(1, 4));
    app.add_option("--tol", st.tol, "singular value cutoff for the dual basis")->check(CLI::PositiveNumber);
    app.add_option("--trials", st.trials, "randomized trials per check (default 200)")->check(CLI::PositiveNumber);
    app.add_option("--seed", st.seed, "seed for randomized verification (default 7)");
    app.add_option("--dims", st.dims, "system dimensions for verification (default 2,3,4)")
        ->delimiter(',')
        ->check(CLI::Range(2, 6));
    app.add_option("--output", st.output, "write the report here instead of stdout");

    auto* superop = app.add_subcommand("superop", "Build a superoperator matrix from operator files");
    superop->add_option("kind", st.superop_kind, "hs | l1s | ls")
        ->required()
        ->check(CLI::IsMember({"hs", "l1s", "ls"}));
    superop->add_option("inputs", st.superop_inputs, "operator MatrixFile paths")->required();
    superop->add_option("--gamma", st.gamma_path, "rate-matrix MatrixFile (ls only)");

    auto* commute = app.add_subcommand("commute", "Commutator of two generators, numeric or closed form");
    commute->add_option("--mode", st.mode, "numeric | closed")->check(CLI::IsMember({"numeric", "closed"}));
    commute->add_option("--lhs-kind", st.lhs_kind, "hs | l1s")->check(CLI::IsMember({"hs", "l1s"}));
    commute->add_option("--rhs-kind", st.rhs_kind, "hs | l1s")->check(CLI::IsMember({"hs", "l1s"}));
    commute->add_option("--lhs", st.lhs_path, "left operator MatrixFile")->required();
    commute->add_option("--rhs", st.rhs_path, "right operator MatrixFile")->required();

    auto* sequence = app.add_subcommand("sequence", "Combine a piecewise-constant schedule into one generator");
    sequence->add_option("schedule", st.schedule_path, "schedule JSON file, segments earliest first")->required();

    auto* extract = app.add_subcommand("extract", "Extract Lindblad form from a channel superoperator");
    extract->add_option("channel", st.channel_path, "superoperator MatrixFile")->required();

    auto* verify = app.add_subcommand("verify", "Run randomized verification suites");
    verify->add_option("suite", st.suite, "identities | bch | projection | all")
        ->required()
        ->check(CLI::IsMember({"identities", "bch", "projection", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (app.got_subcommand(superop)) {
            return run_superop(st);
        }
        if (app.got_subcommand(commute)) {
            return run_commute(st);
        }
        if (app.got_subcommand(sequence)) {
            return run_sequence(st);
        }
        if (app.got_subcommand(extract)) {
            return run_extract(st);
        }
        return run_verify(st);
    } catch (const lkme::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const lkme::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
}
