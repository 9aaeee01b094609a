#include "qlex/lexsort.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace qlex {

RankingVector RankingVector::zeros(std::int32_t m) {
    if (m < 1) fail(ErrorCode::BadArgument, "ranking needs at least one row");
    RankingVector rv;
    rv.ranks.assign(m, 0);
    rv.num_blocks = 1;
    return rv;
}

RankingVector RankingVector::from_ranks(std::vector<std::int32_t> ranks) {
    if (ranks.empty()) fail(ErrorCode::BadArgument, "ranking needs at least one row");
    const std::int32_t m = static_cast<std::int32_t>(ranks.size());
    std::vector<std::uint8_t> seen(m, 0);
    std::int32_t max_rank = 0;
    for (std::int32_t r : ranks) {
        if (r < 0 || r >= m) fail(ErrorCode::BadArgument, "rank out of range");
        seen[r] = 1;
        max_rank = std::max(max_rank, r);
    }
    for (std::int32_t v = 0; v <= max_rank; ++v) {
        if (!seen[v]) fail(ErrorCode::BadArgument, "ranks are not dense");
    }
    RankingVector rv;
    rv.ranks = std::move(ranks);
    rv.num_blocks = max_rank + 1;
    return rv;
}

OrderedPartition OrderedPartition::initial(std::int32_t m) {
    if (m < 1) fail(ErrorCode::BadArgument, "partition needs at least one row");
    OrderedPartition op;
    op.order.resize(m);
    for (std::int32_t i = 0; i < m; ++i) op.order[i] = i;
    op.partition.assign(1, 0);
    return op;
}

RefineScratch::RefineScratch(std::int32_t m) : m_(m) {
    if (m < 1) fail(ErrorCode::BadArgument, "scratch needs at least one row");
    last_val.resize(m);
    shift.resize(m);
    tags.resize(m);
}

namespace {

void check_refine_args(const DataMatrix& matrix, const ColumnPresort& presort, std::int32_t col,
                       const RankingVector& L, const RefineScratch& scratch) {
    if (col < 0 || col >= matrix.cols()) {
        fail(ErrorCode::ColumnOutOfRange, "column " + std::to_string(col) + " out of range");
    }
    if (L.size() != matrix.rows()) {
        fail(ErrorCode::RankVectorLengthMismatch,
             "ranking has " + std::to_string(L.size()) + " entries for " +
                 std::to_string(matrix.rows()) + " rows");
    }
    if (presort.rows() != matrix.rows() || presort.cols() != matrix.cols()) {
        fail(ErrorCode::BadArgument, "presort shape does not match matrix");
    }
    if (scratch.rows() != matrix.rows()) {
        fail(ErrorCode::BadArgument, "scratch sized for a different row count");
    }
    if (L.num_blocks < 1 || L.num_blocks > matrix.rows()) {
        fail(ErrorCode::BadArgument, "ranking block count out of range");
    }
}

// Single pass over Q's column `col`: rows of each current block are visited
// in nondecreasing order of the new column, so per-block sub-ranks fall out
// of counting value changes. Shared by the plain and augmented refines.
// The row indices are streamed sequentially from the presort (their values
// follow from the presort's bucket boundaries, no second stream needed),
// and the per-row findings go out sequentially as tags; the old ranks are
// the only row-indexed array the scan touches at random, which keeps the
// scattered working set within reach of the cache even for large m.
//
// Returns the number of blocks in the refined ranking. On exit,
// scratch.tags holds each emitted row's (rank, sub-rank) pair in emission
// order - Q order for the plain refine, new lexicographic order when an
// op_out is being filled - and scratch.shift[r] the number of extra blocks
// opened by ranks below r.
std::int32_t refine_scan(const ColumnPresort& presort, std::int32_t col,
                         const RankingVector& L, RefineScratch& scratch,
                         OrderedPartition* op_out) {
    const std::int32_t nb = L.num_blocks;
    const std::int32_t* q = presort.col_data(col);
    const std::span<const std::int32_t> buckets = presort.bucket_offsets(col);
    const std::int32_t* ranks = L.ranks.data();
    std::int32_t* last_val = scratch.last_val.data();
    std::int32_t* shift = scratch.shift.data();
    RefineScratch::RowTag* tags = scratch.tags.data();

    std::fill_n(last_val, nb, -1);
    std::fill_n(shift, nb, 0);

    std::int32_t* cursor = op_out ? op_out->partition.data() : nullptr;
    std::int32_t* order_out = op_out ? op_out->order.data() : nullptr;

    const std::int32_t arity = static_cast<std::int32_t>(buckets.size()) - 1;
    for (std::int32_t v = 0; v < arity; ++v) {
        const std::int32_t bucket_end = buckets[v + 1];
        for (std::int32_t j = buckets[v]; j < bucket_end; ++j) {
            const std::int32_t row = q[j];
            const std::int32_t r = ranks[row];
            if (last_val[r] != v) {
                if (last_val[r] >= 0) ++shift[r];
                last_val[r] = v;
            }
            if (op_out) {
                const std::int32_t pos = cursor[r]++;
                order_out[pos] = row;
                tags[pos] = {r, shift[r]};
            } else {
                tags[j] = {r, shift[r]};
            }
        }
    }

    // Rewrite per-rank counts into their exclusive prefix sums, so each
    // entry ends up holding the shift contributed by all lower ranks.
    std::int32_t carry = 0;
    for (std::int32_t r = 0; r < nb; ++r) {
        const std::int32_t opened = shift[r];
        shift[r] = carry;
        carry += opened;
    }

    scratch.bump();
    return nb + carry;
}

void check_partition_consistency(const RankingVector& L, const OrderedPartition& op,
                                 RefineScratch& scratch) {
    const std::int32_t m = L.size();
    if (op.rows() != m || op.num_blocks() != L.num_blocks || op.partition[0] != 0) {
        fail(ErrorCode::InconsistentPartition, "partition shape does not match ranking");
    }
    for (std::int32_t b = 1; b < op.num_blocks(); ++b) {
        if (op.partition[b] <= op.partition[b - 1] || op.partition[b] >= m) {
            fail(ErrorCode::InconsistentPartition, "partition offsets not strictly increasing");
        }
    }
    // the tag ranks double as a seen buffer here; the scan overwrites them
    std::fill_n(scratch.tags.begin(), m, RefineScratch::RowTag{0, 0});
    std::int32_t b = 0;
    for (std::int32_t t = 0; t < m; ++t) {
        while (b + 1 < op.num_blocks() && op.partition[b + 1] == t) ++b;
        const std::int32_t row = op.order[t];
        if (row < 0 || row >= m || scratch.tags[row].rank) {
            fail(ErrorCode::InconsistentPartition, "order is not a permutation");
        }
        scratch.tags[row].rank = 1;
        if (L.ranks[row] != b) {
            fail(ErrorCode::InconsistentPartition,
                 "order position " + std::to_string(t) + " disagrees with ranking");
        }
    }
}

}  // namespace

void refine_into(const DataMatrix& matrix, const ColumnPresort& presort, std::int32_t col,
                 const RankingVector& L, RankingVector& out, RefineScratch& scratch) {
    check_refine_args(matrix, presort, col, L, scratch);
    const std::int32_t m = matrix.rows();

    const std::int32_t new_blocks = refine_scan(presort, col, L, scratch, nullptr);

    out.ranks.resize(m);
    const std::int32_t* q = presort.col_data(col);
    const std::int32_t* shift = scratch.shift.data();
    const RefineScratch::RowTag* tags = scratch.tags.data();
    std::int32_t* result = out.ranks.data();
    for (std::int32_t j = 0; j < m; ++j) {
        const RefineScratch::RowTag t = tags[j];
        result[q[j]] = t.rank + shift[t.rank] + t.sub;
    }
    out.num_blocks = new_blocks;
}

RankingVector refine(const DataMatrix& matrix, const ColumnPresort& presort, std::int32_t col,
                     const RankingVector& L) {
    RefineScratch scratch(matrix.rows());
    RankingVector out;
    refine_into(matrix, presort, col, L, out, scratch);
    return out;
}

void refine_augmented_into(const DataMatrix& matrix, const ColumnPresort& presort,
                           std::int32_t col, const RankingVector& L, const OrderedPartition& op,
                           RankingVector& L_out, OrderedPartition& op_out,
                           RefineScratch& scratch) {
    check_refine_args(matrix, presort, col, L, scratch);
    check_partition_consistency(L, op, scratch);
    const std::int32_t m = matrix.rows();

    // Copies of the input partition serve as write cursors into the new
    // order: block b of the old ranking occupies the same span in the new
    // order, filled in new-column value order as the scan walks Q.
    if (&op_out != &op) {
        op_out.order.resize(m);
        op_out.partition = op.partition;
    }

    const std::int32_t new_blocks = refine_scan(presort, col, L, scratch, &op_out);

    // Ranks along the new order are nondecreasing and dense, so block starts
    // can be re-derived in the same pass that assigns the refined ranks.
    L_out.ranks.resize(m);
    const std::int32_t* order = op_out.order.data();
    const std::int32_t* shift = scratch.shift.data();
    const RefineScratch::RowTag* tags = scratch.tags.data();
    std::int32_t* ranks_out = L_out.ranks.data();
    std::int32_t prev_rank = -1;
    for (std::int32_t t = 0; t < m; ++t) {
        const std::int32_t row = order[t];
        const RefineScratch::RowTag tg = tags[t];
        const std::int32_t refined = tg.rank + shift[tg.rank] + tg.sub;
        ranks_out[row] = refined;
        if (refined != prev_rank) {
            prev_rank = refined;
            if (refined < static_cast<std::int32_t>(op_out.partition.size())) {
                op_out.partition[refined] = t;
            } else {
                op_out.partition.push_back(t);
            }
        }
    }
    L_out.num_blocks = new_blocks;
}

std::pair<RankingVector, OrderedPartition> refine_augmented(const DataMatrix& matrix,
                                                            const ColumnPresort& presort,
                                                            std::int32_t col,
                                                            const RankingVector& L,
                                                            const OrderedPartition& op) {
    RefineScratch scratch(matrix.rows());
    RankingVector L_out;
    OrderedPartition op_out;
    refine_augmented_into(matrix, presort, col, L, op, L_out, op_out, scratch);
    return {std::move(L_out), std::move(op_out)};
}

RankingVector lex_sort(const DataMatrix& matrix, const ColumnPresort& presort,
                       std::span<const std::int32_t> seq, RefineScratch* scratch) {
    std::optional<RefineScratch> local;
    if (!scratch) local.emplace(matrix.rows());
    RefineScratch& s = scratch ? *scratch : *local;

    RankingVector L = RankingVector::zeros(matrix.rows());
    for (std::int32_t col : seq) {
        refine_into(matrix, presort, col, L, L, s);
    }
    return L;
}

std::pair<RankingVector, OrderedPartition> lex_sort_augmented(
    const DataMatrix& matrix, const ColumnPresort& presort, std::span<const std::int32_t> seq,
    RefineScratch* scratch) {
    std::optional<RefineScratch> local;
    if (!scratch) local.emplace(matrix.rows());
    RefineScratch& s = scratch ? *scratch : *local;

    RankingVector L = RankingVector::zeros(matrix.rows());
    OrderedPartition op = OrderedPartition::initial(matrix.rows());
    for (std::int32_t col : seq) {
        refine_augmented_into(matrix, presort, col, L, op, L, op, s);
    }
    return {std::move(L), std::move(op)};
}

bool is_refinement(const RankingVector& coarser, const RankingVector& finer) {
    if (coarser.size() != finer.size()) {
        fail(ErrorCode::LengthMismatch, "ranking lengths differ");
    }
    const std::int32_t m = coarser.size();

    // Group rows by coarse rank and require the fine ranks of consecutive
    // groups to occupy disjoint, increasing ranges.
    std::vector<std::int32_t> lo(coarser.num_blocks, m);
    std::vector<std::int32_t> hi(coarser.num_blocks, -1);
    for (std::int32_t j = 0; j < m; ++j) {
        const std::int32_t r = coarser.ranks[j];
        lo[r] = std::min(lo[r], finer.ranks[j]);
        hi[r] = std::max(hi[r], finer.ranks[j]);
    }
    for (std::int32_t r = 1; r < coarser.num_blocks; ++r) {
        if (hi[r - 1] >= lo[r]) return false;
    }
    return true;
}

}  // namespace qlex
