#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qlex/error.hpp"
#include "qlex/matrix.hpp"

namespace qlex::test {

// 10x5 hand-ranked fixture. Its rankings under several column sequences are
// known exactly and asserted as golden values throughout the suite.
inline const char* kGoldenCsv =
    "1,1,1,2,1\n"
    "1,1,1,2,0\n"
    "0,0,0,3,0\n"
    "1,1,1,2,0\n"
    "1,0,1,1,1\n"
    "1,1,1,1,1\n"
    "1,1,1,3,0\n"
    "1,1,0,2,1\n"
    "1,0,1,1,0\n"
    "1,1,1,1,1\n";

inline DataMatrix golden_matrix() {
    std::istringstream in(kGoldenCsv);
    return load_matrix(in, TextFormat::Csv, false);
}

// 5x3 binary fixture with known single- and two-column rankings.
inline DataMatrix tiny_matrix() {
    return DataMatrix::from_columns({{0, 1, 1, 0, 0}, {1, 1, 0, 1, 0}, {0, 0, 0, 1, 1}});
}

// Row-major literal -> DataMatrix, for one-off shapes in tests.
inline DataMatrix matrix_from_rows(const std::vector<std::vector<std::int32_t>>& rows) {
    std::vector<std::vector<std::int32_t>> columns(rows.at(0).size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        columns[c].resize(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) columns[c][r] = rows[r][c];
    }
    return DataMatrix::from_columns(columns);
}

// Runs f, returns the engine error code it threw, if any.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace qlex::test
