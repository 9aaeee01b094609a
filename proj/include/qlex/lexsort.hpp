#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qlex/matrix.hpp"

namespace qlex {

/// Dense per-row block ranks for a lexicographic ordering of a submatrix.
///
/// Rows with equal rank are lexicographically equal on the associated column
/// sequence; a lower rank means a lexicographically smaller row. The ranks
/// used are exactly {0, ..., num_blocks-1}, which makes the vector unique for
/// a given ordering.
struct RankingVector {
    std::vector<std::int32_t> ranks;
    std::int32_t num_blocks = 0;

    std::int32_t size() const { return static_cast<std::int32_t>(ranks.size()); }

    /// Ranking of the empty column sequence: one block holding every row.
    static RankingVector zeros(std::int32_t m);

    /// Adopt an explicit rank vector; validates density.
    static RankingVector from_ranks(std::vector<std::int32_t> ranks);

    bool operator==(const RankingVector& other) const {
        return ranks == other.ranks;  // num_blocks is derived
    }
};

/// Companion encoding of the same ordering: `order` lists rows from smallest
/// to largest, `partition[b]` is the offset in `order` where block b starts
/// (one entry per block, implicit end sentinel m).
struct OrderedPartition {
    std::vector<std::int32_t> order;
    std::vector<std::int32_t> partition;

    std::int32_t rows() const { return static_cast<std::int32_t>(order.size()); }
    std::int32_t num_blocks() const { return static_cast<std::int32_t>(partition.size()); }

    std::int32_t block_begin(std::int32_t b) const { return partition[b]; }
    std::int32_t block_end(std::int32_t b) const {
        return b + 1 < num_blocks() ? partition[b + 1] : rows();
    }

    /// State for the empty column sequence: identity order, one block.
    static OrderedPartition initial(std::int32_t m);
};

/// Reusable work vectors for refine calls on matrices with m rows.
///
/// Refines gather through these buffers at random offsets, so the per-rank
/// state is split by touch frequency: `last_val` is hit on every row and
/// stays compact, while `shift` is only written when a sub-block opens.
/// Reusing the scratch across the many refines of an enumeration keeps each
/// call at O(m) with no allocation. Contents are unspecified between calls.
/// Also counts calls, which lets callers audit exactly how many refines a
/// traversal performed.
class RefineScratch {
public:
    explicit RefineScratch(std::int32_t m);

    std::int32_t rows() const { return m_; }
    std::uint64_t refine_calls() const { return calls_; }
    void reset_counter() { calls_ = 0; }

    // What the scan learned about the row it emitted at some position: the
    // row's old rank and its sub-rank within that rank's block. Written
    // sequentially in emission order so the scan scatters into only one
    // row-indexed array (the old ranks it reads); the pass that assigns the
    // refined ranks then streams these back in the same order.
    struct RowTag {
        std::int32_t rank;
        std::int32_t sub;
    };

    // internal buffers, exposed for the refine implementations
    //
    // last_val[r]: last column value seen in input rank r (-1 before the
    // first touch; stored codes are never negative). shift[r]: number of
    // sub-blocks the new column opens within rank r; after the scan it is
    // rewritten in place into the exclusive prefix sum of those counts,
    // i.e. the total rank shift contributed by lower ranks.
    std::vector<std::int32_t> last_val;  // per input rank
    std::vector<std::int32_t> shift;     // per input rank
    std::vector<RowTag> tags;            // per emitted position, see above

    void bump() { ++calls_; }

private:
    std::int32_t m_;
    std::uint64_t calls_ = 0;
};

/// Refine the ranking `L` of some column sequence by appending column `col`:
/// returns the unique ranking of the extended sequence. O(m) time and space
/// given the presort. Appending a column already in the sequence changes
/// nothing. `out` may alias `L`.
void refine_into(const DataMatrix& matrix, const ColumnPresort& presort, std::int32_t col,
                 const RankingVector& L, RankingVector& out, RefineScratch& scratch);

RankingVector refine(const DataMatrix& matrix, const ColumnPresort& presort, std::int32_t col,
                     const RankingVector& L);

/// As refine, but keeps the order/partition encoding in sync in the same
/// O(m) pass. `(L, op)` must describe the same ordering.
void refine_augmented_into(const DataMatrix& matrix, const ColumnPresort& presort,
                           std::int32_t col, const RankingVector& L, const OrderedPartition& op,
                           RankingVector& L_out, OrderedPartition& op_out,
                           RefineScratch& scratch);

std::pair<RankingVector, OrderedPartition> refine_augmented(const DataMatrix& matrix,
                                                            const ColumnPresort& presort,
                                                            std::int32_t col,
                                                            const RankingVector& L,
                                                            const OrderedPartition& op);

/// Rank the submatrix restricted to `seq`, in sequence order, by chaining
/// refines: O(m * |seq|) after the one-time presort. Empty sequence gives the
/// all-zero ranking; duplicate columns are no-ops.
RankingVector lex_sort(const DataMatrix& matrix, const ColumnPresort& presort,
                       std::span<const std::int32_t> seq, RefineScratch* scratch = nullptr);

/// lex_sort carrying the order/partition encoding along the chain.
std::pair<RankingVector, OrderedPartition> lex_sort_augmented(
    const DataMatrix& matrix, const ColumnPresort& presort, std::span<const std::int32_t> seq,
    RefineScratch* scratch = nullptr);

/// True iff `finer` preserves every strict inequality of `coarser`
/// (it may split blocks but never merge or reorder them).
bool is_refinement(const RankingVector& coarser, const RankingVector& finer);

}  // namespace qlex
