#include "qlex/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace qlex {

namespace {

bool parse_number(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return false;
    return !std::isnan(out);
}

struct RawColumn {
    std::vector<std::int32_t> provisional;  // per row, index into uniq
    std::vector<std::string> uniq;          // insertion order
};

// Assign final codes: sort the column's unique tokens (numeric when every
// token parses, byte-wise otherwise; numeric ties broken byte-wise so the
// order stays total) and remap the provisional ids.
void encode_column(const RawColumn& raw, std::int32_t* cells_out,
                   std::vector<std::string>& tokens_out, bool& numeric_out) {
    const std::size_t u = raw.uniq.size();
    std::vector<double> values(u);
    bool numeric = true;
    for (std::size_t i = 0; i < u; ++i) {
        if (!parse_number(raw.uniq[i], values[i])) {
            numeric = false;
            break;
        }
    }

    std::vector<std::int32_t> order(u);
    for (std::size_t i = 0; i < u; ++i) order[i] = static_cast<std::int32_t>(i);
    if (numeric) {
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            return raw.uniq[a] < raw.uniq[b];
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            return raw.uniq[a] < raw.uniq[b];
        });
    }

    std::vector<std::int32_t> code_of(u);
    tokens_out.resize(u);
    for (std::size_t rank = 0; rank < u; ++rank) {
        code_of[order[rank]] = static_cast<std::int32_t>(rank);
        tokens_out[rank] = raw.uniq[order[rank]];
    }
    for (std::size_t r = 0; r < raw.provisional.size(); ++r) {
        cells_out[r] = code_of[raw.provisional[r]];
    }
    numeric_out = numeric;
}

}  // namespace

std::int32_t DataMatrix::token_code(std::int32_t col, const std::string& token) const {
    const auto& toks = tokens_[col];
    for (std::size_t c = 0; c < toks.size(); ++c) {
        if (toks[c] == token) return static_cast<std::int32_t>(c);
    }
    return -1;
}

DataMatrix load_matrix(std::istream& source, TextFormat format, bool header) {
    const char delim = format == TextFormat::Tsv ? '\t' : ',';

    std::vector<RawColumn> raw;
    std::vector<std::unordered_map<std::string, std::int32_t>> lookup;
    std::int32_t n = -1;
    std::int64_t record_index = 0;  // data records only
    bool header_pending = header;

    std::string line;
    std::vector<std::string> fields;
    while (std::getline(source, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && source.peek() == std::char_traits<char>::eof()) break;

        fields.clear();
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find(delim, start);
            if (pos == std::string::npos) {
                fields.emplace_back(line.substr(start));
                break;
            }
            fields.emplace_back(line.substr(start, pos - start));
            start = pos + 1;
        }

        if (header_pending) {
            header_pending = false;
            if (n < 0) n = static_cast<std::int32_t>(fields.size());
            continue;
        }

        if (n < 0) n = static_cast<std::int32_t>(fields.size());
        if (static_cast<std::int32_t>(fields.size()) != n) {
            fail(ErrorCode::RaggedInput,
                 "record " + std::to_string(record_index) + " has " +
                     std::to_string(fields.size()) + " fields, expected " + std::to_string(n));
        }
        if (raw.empty()) {
            raw.resize(n);
            lookup.resize(n);
        }
        for (std::int32_t c = 0; c < n; ++c) {
            if (fields[c].empty()) {
                fail(ErrorCode::EmptyField,
                     "empty field in record " + std::to_string(record_index) + ", column " +
                         std::to_string(c));
            }
            auto [it, inserted] = lookup[c].try_emplace(
                fields[c], static_cast<std::int32_t>(raw[c].uniq.size()));
            if (inserted) raw[c].uniq.push_back(fields[c]);
            raw[c].provisional.push_back(it->second);
        }
        ++record_index;
    }

    if (record_index == 0 || n <= 0) {
        fail(ErrorCode::EmptyInput, "input has no data records");
    }

    DataMatrix m;
    m.rows_ = static_cast<std::int32_t>(record_index);
    m.cols_ = n;
    m.cells_.resize(static_cast<std::size_t>(m.rows_) * n);
    m.col_arity_.resize(n);
    m.tokens_.resize(n);
    m.numeric_.resize(n);
    for (std::int32_t c = 0; c < n; ++c) {
        bool numeric = false;
        encode_column(raw[c], m.cells_.data() + static_cast<std::size_t>(c) * m.rows_,
                      m.tokens_[c], numeric);
        m.numeric_[c] = numeric ? 1 : 0;
        m.col_arity_[c] = static_cast<std::int32_t>(m.tokens_[c].size());
    }
    return m;
}

DataMatrix load_matrix_file(const std::string& path, TextFormat format, bool header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return load_matrix(in, format, header);
}

void write_matrix(const DataMatrix& matrix, std::ostream& out, TextFormat format) {
    const char delim = format == TextFormat::Tsv ? '\t' : ',';
    for (std::int32_t r = 0; r < matrix.rows(); ++r) {
        for (std::int32_t c = 0; c < matrix.cols(); ++c) {
            if (c > 0) out << delim;
            out << matrix.decode(r, c);
        }
        out << '\n';
    }
}

DataMatrix truncate_rows(const DataMatrix& matrix, std::int32_t new_rows) {
    if (new_rows < 1 || new_rows > matrix.rows()) {
        fail(ErrorCode::BadArgument, "truncation size out of range");
    }
    std::ostringstream buf;
    for (std::int32_t r = 0; r < new_rows; ++r) {
        for (std::int32_t c = 0; c < matrix.cols(); ++c) {
            if (c > 0) buf << '\t';
            buf << matrix.decode(r, c);
        }
        buf << '\n';
    }
    std::istringstream in(buf.str());
    return load_matrix(in, TextFormat::Tsv, false);
}

DataMatrix DataMatrix::from_columns(const std::vector<std::vector<std::int32_t>>& columns) {
    if (columns.empty() || columns[0].empty()) {
        fail(ErrorCode::EmptyInput, "from_columns: no data");
    }
    const std::int32_t n = static_cast<std::int32_t>(columns.size());
    const std::size_t m = columns[0].size();
    for (const auto& col : columns) {
        if (col.size() != m) fail(ErrorCode::RaggedInput, "from_columns: column lengths differ");
    }

    DataMatrix out;
    out.rows_ = static_cast<std::int32_t>(m);
    out.cols_ = n;
    out.cells_.resize(m * n);
    out.col_arity_.resize(n);
    out.tokens_.resize(n);
    out.numeric_.assign(n, 1);

    std::vector<std::int32_t> uniq;
    for (std::int32_t c = 0; c < n; ++c) {
        uniq.assign(columns[c].begin(), columns[c].end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

        out.col_arity_[c] = static_cast<std::int32_t>(uniq.size());
        out.tokens_[c].resize(uniq.size());
        for (std::size_t i = 0; i < uniq.size(); ++i) {
            out.tokens_[c][i] = std::to_string(uniq[i]);
        }
        std::int32_t* cells = out.cells_.data() + static_cast<std::size_t>(c) * m;
        for (std::size_t r = 0; r < m; ++r) {
            auto it = std::lower_bound(uniq.begin(), uniq.end(), columns[c][r]);
            cells[r] = static_cast<std::int32_t>(it - uniq.begin());
        }
    }
    return out;
}

ColumnPresort presort_columns(const DataMatrix& matrix) {
    const std::int32_t m = matrix.rows();
    const std::int32_t n = matrix.cols();

    ColumnPresort q;
    q.rows_ = m;
    q.cols_ = n;
    q.idx_.resize(static_cast<std::size_t>(m) * n);
    q.obase_.reserve(n + 1);
    q.obase_.push_back(0);

    std::vector<std::int32_t> offsets;
    for (std::int32_t c = 0; c < n; ++c) {
        const std::int32_t arity = matrix.arity(c);
        const std::int32_t* codes = matrix.col_data(c);
        std::int32_t* idx = q.idx_.data() + static_cast<std::size_t>(c) * m;

        offsets.assign(arity + 1, 0);
        for (std::int32_t r = 0; r < m; ++r) ++offsets[codes[r] + 1];
        for (std::int32_t v = 0; v < arity; ++v) offsets[v + 1] += offsets[v];
        q.offsets_.insert(q.offsets_.end(), offsets.begin(), offsets.end());
        q.obase_.push_back(static_cast<std::int32_t>(q.offsets_.size()));
        // ascending row scan keeps ties in row order
        for (std::int32_t r = 0; r < m; ++r) {
            idx[offsets[codes[r]]++] = r;
        }
    }
    return q;
}

ColumnPresort ColumnPresort::from_index(const DataMatrix& matrix,
                                        std::vector<std::int32_t> idx) {
    const std::int32_t rows = matrix.rows();
    const std::int32_t cols = matrix.cols();
    if (idx.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        fail(ErrorCode::BadArgument, "from_index: bad dimensions");
    }
    ColumnPresort q;
    q.rows_ = rows;
    q.cols_ = cols;
    q.obase_.reserve(cols + 1);
    q.obase_.push_back(0);
    std::vector<std::uint8_t> seen(rows);
    for (std::int32_t c = 0; c < cols; ++c) {
        const std::int32_t* codes = matrix.col_data(c);
        const std::size_t base = static_cast<std::size_t>(c) * rows;
        std::fill(seen.begin(), seen.end(), 0);
        std::int32_t prev = -1;
        for (std::int32_t p = 0; p < rows; ++p) {
            std::int32_t r = idx[base + p];
            if (r < 0 || r >= rows || seen[r]) {
                fail(ErrorCode::BadArgument, "from_index: column " + std::to_string(c) +
                                                 " is not a permutation");
            }
            seen[r] = 1;
            if (codes[r] < prev) {
                fail(ErrorCode::BadArgument, "from_index: column " + std::to_string(c) +
                                                 " is not sorted by value");
            }
            prev = codes[r];
        }
        const std::int32_t arity = matrix.arity(c);
        std::vector<std::int32_t> offsets(arity + 1, 0);
        for (std::int32_t r = 0; r < rows; ++r) ++offsets[codes[r] + 1];
        for (std::int32_t v = 0; v < arity; ++v) offsets[v + 1] += offsets[v];
        q.offsets_.insert(q.offsets_.end(), offsets.begin(), offsets.end());
        q.obase_.push_back(static_cast<std::int32_t>(q.offsets_.size()));
    }
    q.idx_ = std::move(idx);
    return q;
}

}  // namespace qlex
