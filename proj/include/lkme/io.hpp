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
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lkme/types.hpp"

namespace lkme {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class MatrixKind { Operator, Superoperator, Gamma };

// On-disk matrix exchange format:
//   {"dim": N, "kind": "operator", "entries": [[[re, im], ...], ...]}
// dim is always the system dimension; a superoperator carries dim^2 x dim^2
// entries, the other kinds dim x dim.
struct MatrixFile {
    int dim = 0;
    MatrixKind kind = MatrixKind::Operator;
    ComplexMatrix matrix;
};

inline std::string to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::Operator:
            return "operator";
        case MatrixKind::Superoperator:
            return "superoperator";
        case MatrixKind::Gamma:
            return "gamma";
    }
    throw DomainError("to_string: unknown matrix kind");
}

inline MatrixKind matrix_kind_from_string(const std::string& s) {
    if (s == "operator") {
        return MatrixKind::Operator;
    }
    if (s == "superoperator") {
        return MatrixKind::Superoperator;
    }
    if (s == "gamma") {
        return MatrixKind::Gamma;
    }
    throw ParseError("unknown matrix kind \"" + s + "\"");
}

inline nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::ordered_json complex_vector_to_json(const ComplexVector& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out.push_back({v(k).real(), v(k).imag()});
    }
    return out;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) {
        throw ParseError("entries must be a nonempty array of rows");
    }
    const std::size_t nrows = rows.size();
    std::size_t ncols = 0;
    ComplexMatrix m;
    for (std::size_t r = 0; r < nrows; ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || row.empty()) {
            throw ParseError("entries row " + std::to_string(r) + " must be a nonempty array");
        }
        if (r == 0) {
            ncols = row.size();
            m.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
        } else if (row.size() != ncols) {
            throw ParseError("entries row " + std::to_string(r) + " has inconsistent length");
        }
        for (std::size_t c = 0; c < ncols; ++c) {
            const auto& cell = row[c];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
                throw ParseError("entry (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") must be a [re, im] pair of numbers");
            }
            const double re = cell[0].get<double>();
            const double im = cell[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw ParseError("entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not finite");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re, im);
        }
    }
    return m;
}

inline MatrixFile matrix_file_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ParseError("matrix file must be a JSON object");
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer()) {
        throw ParseError("matrix file needs an integer \"dim\"");
    }
    MatrixFile file;
    file.dim = j["dim"].get<int>();
    if (file.dim < 1) {
        throw ParseError("dim must be >= 1");
    }
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) {
            throw ParseError("kind must be a string");
        }
        file.kind = matrix_kind_from_string(j["kind"].get<std::string>());
    }
    if (!j.contains("entries")) {
        throw ParseError("matrix file needs \"entries\"");
    }
    file.matrix = matrix_from_json(j["entries"]);
    const Eigen::Index side = file.kind == MatrixKind::Superoperator
                                  ? static_cast<Eigen::Index>(file.dim) * file.dim
                                  : static_cast<Eigen::Index>(file.dim);
    if (file.matrix.rows() != side || file.matrix.cols() != side) {
        throw ParseError("entries shape " + std::to_string(file.matrix.rows()) + "x" +
                         std::to_string(file.matrix.cols()) + " does not match dim " + std::to_string(file.dim) +
                         " for kind " + to_string(file.kind));
    }
    return file;
}

inline MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return matrix_file_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline MatrixFile make_matrix_file(const ComplexMatrix& m, MatrixKind kind) {
    require_square(m, "make_matrix_file");
    MatrixFile file;
    file.kind = kind;
    if (kind == MatrixKind::Superoperator) {
        const auto side = m.rows();
        const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(side))));
        if (dim * dim != side) {
            throw DimensionError("make_matrix_file: superoperator side is not a perfect square");
        }
        file.dim = static_cast<int>(dim);
    } else {
        file.dim = static_cast<int>(m.rows());
    }
    file.matrix = m;
    return file;
}

inline nlohmann::ordered_json matrix_file_to_json(const MatrixFile& file) {
    nlohmann::ordered_json j;
    j["dim"] = file.dim;
    j["kind"] = to_string(file.kind);
    j["entries"] = matrix_to_json(file.matrix);
    return j;
}

inline void write_matrix_file(const std::string& path, const MatrixFile& file) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot open " + path + " for writing");
    }
    out << matrix_file_to_json(file).dump(2) << "\n";
}

}  // namespace lkme
