#include "qlex/enumerate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qlex {
namespace {

void check_card(std::int32_t max_card, std::int32_t limit) {
    if (max_card < 1 || max_card > limit) {
        fail(ErrorCode::CardinalityOutOfRange,
             "max cardinality " + std::to_string(max_card) + " outside [1, " +
                 std::to_string(limit) + "]");
    }
}

// Shared DFS state. levels[d] / parts[d] hold the node at depth d (0 is the
// unrefined root); siblings overwrite each other's slot, so live storage is
// O(m * max_card) regardless of how many nodes the walk visits.
struct Walk {
    const DataMatrix& matrix;
    const ColumnPresort& presort;
    std::int32_t max_card;
    const NodeVisitor& visit;
    RefineScratch& scratch;
    bool augmented;

    std::vector<RankingVector> levels;
    std::vector<OrderedPartition> parts;
    std::vector<std::int32_t> path;
    std::int64_t count = 0;

    Walk(const DataMatrix& d, const ColumnPresort& q, std::int32_t k, const NodeVisitor& v,
         RefineScratch& s, bool aug)
        : matrix(d), presort(q), max_card(k), visit(v), scratch(s), augmented(aug) {
        levels.resize(k + 1);
        levels[0] = RankingVector::zeros(d.rows());
        if (augmented) {
            parts.resize(k + 1);
            parts[0] = OrderedPartition::initial(d.rows());
        }
        path.reserve(k);
    }

    void step(std::int32_t col, std::int32_t depth) {
        if (augmented) {
            refine_augmented_into(matrix, presort, col, levels[depth], parts[depth],
                                  levels[depth + 1], parts[depth + 1], scratch);
        } else {
            refine_into(matrix, presort, col, levels[depth], levels[depth + 1], scratch);
        }
    }

    void emit(std::int32_t depth) {
        ++count;
        if (visit) {
            EnumNode node{std::span<const std::int32_t>(path.data(), depth), levels[depth],
                          augmented ? &parts[depth] : nullptr};
            visit(node);
        }
    }

    void walk_sequences(std::vector<std::uint8_t>& used, std::int32_t depth) {
        for (std::int32_t c = 0; c < matrix.cols(); ++c) {
            if (used[c]) continue;
            step(c, depth);
            path.push_back(c);
            used[c] = 1;
            emit(depth + 1);
            if (depth + 1 < max_card) walk_sequences(used, depth + 1);
            used[c] = 0;
            path.pop_back();
        }
    }

    void walk_subsets(std::span<const std::int32_t> pool, std::int32_t start, std::int32_t depth) {
        for (std::int32_t p = start; p < static_cast<std::int32_t>(pool.size()); ++p) {
            step(pool[p], depth);
            path.push_back(pool[p]);
            emit(depth + 1);
            if (depth + 1 < max_card) walk_subsets(pool, p + 1, depth + 1);
            path.pop_back();
        }
    }
};

std::int64_t run_subsets(const DataMatrix& matrix, const ColumnPresort& presort,
                         std::span<const std::int32_t> pool, std::int32_t max_card,
                         const NodeVisitor& visit, RefineScratch* scratch, bool augmented) {
    check_card(max_card, static_cast<std::int32_t>(pool.size()));
    std::vector<std::uint8_t> seen(matrix.cols(), 0);
    for (std::int32_t c : pool) {
        if (c < 0 || c >= matrix.cols()) {
            fail(ErrorCode::ColumnOutOfRange, "pool column " + std::to_string(c) + " out of range");
        }
        if (seen[c]) fail(ErrorCode::BadArgument, "duplicate pool column " + std::to_string(c));
        seen[c] = 1;
    }

    std::optional<RefineScratch> local;
    if (!scratch) local.emplace(matrix.rows());
    Walk w(matrix, presort, max_card, visit, scratch ? *scratch : *local, augmented);
    w.walk_subsets(pool, 0, 0);
    return w.count;
}

std::vector<std::int32_t> all_columns(const DataMatrix& matrix) {
    std::vector<std::int32_t> cols(matrix.cols());
    for (std::int32_t c = 0; c < matrix.cols(); ++c) cols[c] = c;
    return cols;
}

}  // namespace

std::int64_t enumerate_sequences(const DataMatrix& matrix, const ColumnPresort& presort,
                                 std::int32_t max_card, const NodeVisitor& visit,
                                 RefineScratch* scratch) {
    check_card(max_card, matrix.cols());
    std::optional<RefineScratch> local;
    if (!scratch) local.emplace(matrix.rows());
    Walk w(matrix, presort, max_card, visit, scratch ? *scratch : *local, false);
    std::vector<std::uint8_t> used(matrix.cols(), 0);
    w.walk_sequences(used, 0);
    return w.count;
}

std::int64_t enumerate_subsets(const DataMatrix& matrix, const ColumnPresort& presort,
                               std::int32_t max_card, const NodeVisitor& visit,
                               RefineScratch* scratch) {
    const std::vector<std::int32_t> cols = all_columns(matrix);
    return run_subsets(matrix, presort, cols, max_card, visit, scratch, false);
}

std::int64_t enumerate_subsets_augmented(const DataMatrix& matrix, const ColumnPresort& presort,
                                         std::int32_t max_card, const NodeVisitor& visit,
                                         RefineScratch* scratch) {
    const std::vector<std::int32_t> cols = all_columns(matrix);
    return run_subsets(matrix, presort, cols, max_card, visit, scratch, true);
}

std::int64_t enumerate_subsets_augmented(const DataMatrix& matrix, const ColumnPresort& presort,
                                         std::span<const std::int32_t> pool, std::int32_t max_card,
                                         const NodeVisitor& visit, RefineScratch* scratch) {
    return run_subsets(matrix, presort, pool, max_card, visit, scratch, true);
}

}  // namespace qlex
