#include "qlex/baseline.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

namespace qlex {
namespace {

void check_seq(const DataMatrix& matrix, std::span<const std::int32_t> seq) {
    for (std::int32_t c : seq) {
        if (c < 0 || c >= matrix.cols()) {
            fail(ErrorCode::ColumnOutOfRange,
                 "column " + std::to_string(c) + " out of range [0, " +
                     std::to_string(matrix.cols()) + ")");
        }
    }
}

// Sorts out[lo, hi) by key, scratch[lo, hi) holding the same contents on
// entry; ties take the left run first, which preserves the input order of
// equal keys. Top-down rather than bottom-up on purpose: this sort is the
// measuring stick in the scaling harness, and the ragged halving tree makes
// its cost track m*log2(m) smoothly, where bottom-up's ceil(log2 m) full
// passes would hold the cost flat between power-of-two row counts and put
// false plateaus in every timing curve.
void sort_runs(std::span<const std::int32_t> keys, std::int32_t* scratch, std::int32_t lo,
               std::int32_t hi, std::int32_t* out) {
    if (hi - lo < 2) return;
    const std::int32_t mid = lo + (hi - lo) / 2;
    sort_runs(keys, out, lo, mid, scratch);
    sort_runs(keys, out, mid, hi, scratch);
    std::int32_t a = lo, b = mid, t = lo;
    while (a < mid && b < hi) {
        if (keys[scratch[b]] < keys[scratch[a]]) {
            out[t++] = scratch[b++];
        } else {
            out[t++] = scratch[a++];
        }
    }
    while (a < mid) out[t++] = scratch[a++];
    while (b < hi) out[t++] = scratch[b++];
}

}  // namespace

std::vector<std::int32_t> stable_sort_permutation(std::span<const std::int32_t> keys) {
    const std::int32_t m = static_cast<std::int32_t>(keys.size());
    std::vector<std::int32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    if (m < 2) return perm;

    std::vector<std::int32_t> buf(perm);
    sort_runs(keys, buf.data(), 0, m, perm.data());
    return perm;
}

RankingVector stable_lex_sort(const DataMatrix& matrix, std::span<const std::int32_t> seq) {
    if (seq.empty()) fail(ErrorCode::EmptySequence, "column sequence is empty");
    check_seq(matrix, seq);

    const std::int32_t m = matrix.rows();
    std::vector<std::int32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<std::int32_t> keys(m);
    for (std::size_t j = seq.size(); j-- > 0;) {
        const std::int32_t* col = matrix.col_data(seq[j]);
        for (std::int32_t t = 0; t < m; ++t) keys[t] = col[perm[t]];
        const std::vector<std::int32_t> by = stable_sort_permutation(keys);
        std::vector<std::int32_t> next(m);
        for (std::int32_t t = 0; t < m; ++t) next[t] = perm[by[t]];
        perm.swap(next);
    }

    // Group the sorted permutation into dense ranks.
    RankingVector rv;
    rv.ranks.assign(m, 0);
    std::int32_t rank = 0;
    rv.ranks[perm[0]] = 0;
    for (std::int32_t t = 1; t < m; ++t) {
        for (std::int32_t c : seq) {
            if (matrix.code(perm[t], c) != matrix.code(perm[t - 1], c)) {
                ++rank;
                break;
            }
        }
        rv.ranks[perm[t]] = rank;
    }
    rv.num_blocks = rank + 1;
    return rv;
}

RankingVector brute_force_ranking(const DataMatrix& matrix, std::span<const std::int32_t> seq) {
    check_seq(matrix, seq);
    const std::int32_t m = matrix.rows();
    if (seq.empty()) return RankingVector::zeros(m);

    // Work on decoded tokens, not codes: the oracle brings its own
    // comparisons so an encoding bug cannot cancel out.
    std::vector<std::vector<std::string>> tuples(m);
    for (std::int32_t j = 0; j < m; ++j) {
        tuples[j].reserve(seq.size());
        for (std::int32_t c : seq) tuples[j].push_back(matrix.decode(j, c));
    }

    // -1 / 0 / +1 on one field. Numeric columns compare by value with a
    // byte-wise tie-break (so "1.0" and "1" stay distinct tokens).
    const auto cmp_field = [&](std::int32_t k, const std::string& x, const std::string& y) {
        if (matrix.column_is_numeric(seq[k])) {
            const double vx = std::strtod(x.c_str(), nullptr);
            const double vy = std::strtod(y.c_str(), nullptr);
            if (vx < vy) return -1;
            if (vy < vx) return 1;
        }
        return x.compare(y) < 0 ? -1 : (x == y ? 0 : 1);
    };
    const auto cmp_tuple = [&](std::int32_t a, std::int32_t b) {
        for (std::size_t k = 0; k < seq.size(); ++k) {
            const int c = cmp_field(static_cast<std::int32_t>(k), tuples[a][k], tuples[b][k]);
            if (c != 0) return c;
        }
        return 0;
    };

    std::vector<std::int32_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::int32_t a, std::int32_t b) { return cmp_tuple(a, b) < 0; });

    RankingVector rv;
    rv.ranks.assign(m, 0);
    std::int32_t rank = 0;
    rv.ranks[idx[0]] = 0;
    for (std::int32_t t = 1; t < m; ++t) {
        if (cmp_tuple(idx[t - 1], idx[t]) != 0) ++rank;
        rv.ranks[idx[t]] = rank;
    }
    rv.num_blocks = rank + 1;
    return rv;
}

}  // namespace qlex
