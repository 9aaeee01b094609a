#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qlex/error.hpp"

namespace qlex {

enum class TextFormat { Csv, Tsv };

/// Categorical data matrix with per-column dictionary encoding.
///
/// Cells hold dense integer codes in [0, arity(col)). Codes are assigned in
/// ascending order of the original tokens (numeric order when every token in
/// the column parses as a number, byte-wise order otherwise), so comparing
/// codes is the same as comparing the original values. Immutable once built.
class DataMatrix {
public:
    std::int32_t rows() const { return rows_; }
    std::int32_t cols() const { return cols_; }

    std::int32_t code(std::int32_t row, std::int32_t col) const {
        return cells_[static_cast<std::size_t>(col) * rows_ + row];
    }

    /// Column-major storage: contiguous codes for one column.
    const std::int32_t* col_data(std::int32_t col) const {
        return cells_.data() + static_cast<std::size_t>(col) * rows_;
    }

    std::int32_t arity(std::int32_t col) const { return col_arity_[col]; }
    const std::vector<std::int32_t>& arities() const { return col_arity_; }

    /// Original token for a cell.
    const std::string& decode(std::int32_t row, std::int32_t col) const {
        return tokens_[col][code(row, col)];
    }

    /// All tokens of a column, in code order.
    const std::vector<std::string>& tokens(std::int32_t col) const {
        return tokens_[col];
    }

    /// Code of a token in the given column, or -1 when absent.
    std::int32_t token_code(std::int32_t col, const std::string& token) const;

    bool column_is_numeric(std::int32_t col) const { return numeric_[col] != 0; }

    /// Build from raw integer columns; each column is dictionary-encoded so
    /// codes are dense and ordered like the values. Tokens are the decimal
    /// renderings of the values.
    static DataMatrix from_columns(const std::vector<std::vector<std::int32_t>>& columns);

private:
    friend DataMatrix load_matrix(std::istream& source, TextFormat format, bool header);

    std::int32_t rows_ = 0;
    std::int32_t cols_ = 0;
    std::vector<std::int32_t> cells_;  // column-major
    std::vector<std::int32_t> col_arity_;
    std::vector<std::vector<std::string>> tokens_;  // per column, code order
    std::vector<std::uint8_t> numeric_;             // per column
};

/// Parse a rectangular CSV/TSV byte stream into a DataMatrix.
///
/// Records end with '\n' or '\r\n'; no quoting. An optional single header
/// record is skipped when `header` is set. Empty fields are rejected.
DataMatrix load_matrix(std::istream& source, TextFormat format, bool header);

/// Convenience wrapper opening `path`.
DataMatrix load_matrix_file(const std::string& path, TextFormat format, bool header);

/// Write the decoded matrix back out, one record per row.
void write_matrix(const DataMatrix& matrix, std::ostream& out, TextFormat format);

/// Keep the first `new_rows` rows, re-encoding so dictionaries stay dense.
DataMatrix truncate_rows(const DataMatrix& matrix, std::int32_t new_rows);

/// Per-column presort: column j of idx lists the row indices of the matrix
/// in nondecreasing order of that column's values, ties by ascending row
/// index. Computed once, shared by every later sort.
class ColumnPresort {
public:
    std::int32_t rows() const { return rows_; }
    std::int32_t cols() const { return cols_; }

    const std::int32_t* col_data(std::int32_t col) const {
        return idx_.data() + static_cast<std::size_t>(col) * rows_;
    }

    /// Bucket boundaries of a presorted column: entry v is the first position
    /// holding code v, entry arity(col) is rows(). The code at position p is
    /// therefore the v with offsets[v] <= p < offsets[v+1], which lets a
    /// sequential pass recover values without touching the matrix at all.
    std::span<const std::int32_t> bucket_offsets(std::int32_t col) const {
        return {offsets_.data() + obase_[col], offsets_.data() + obase_[col + 1]};
    }

    std::int32_t at(std::int32_t pos, std::int32_t col) const {
        return idx_[static_cast<std::size_t>(col) * rows_ + pos];
    }

    /// Test hook: wrap an externally built index matrix (column-major,
    /// rows*cols entries) over the given matrix's columns. Validates each
    /// column is a permutation listing rows in nondecreasing value order
    /// (tie order is free - that is the point of the hook).
    static ColumnPresort from_index(const DataMatrix& matrix, std::vector<std::int32_t> idx);

private:
    friend ColumnPresort presort_columns(const DataMatrix& matrix);

    std::int32_t rows_ = 0;
    std::int32_t cols_ = 0;
    std::vector<std::int32_t> idx_;      // column-major row indices
    std::vector<std::int32_t> offsets_;  // concatenated per-column boundaries
    std::vector<std::int32_t> obase_;    // start of each column in offsets_
};

/// Sort every column independently. Codes are dense, so each column is a
/// counting sort: O(m + arity) per column, stable by construction.
ColumnPresort presort_columns(const DataMatrix& matrix);

}  // namespace qlex
