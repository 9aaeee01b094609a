#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "qlex/lexsort.hpp"
#include "qlex/matrix.hpp"

namespace qlex {

// One visited node of the DFS over column sequences / subsets. The spans and
// references point into traversal-owned buffers and are only valid for the
// duration of the callback; copy what you need.
struct EnumNode {
    std::span<const std::int32_t> columns;
    const RankingVector& ranking;
    const OrderedPartition* ordered_partition = nullptr;  // augmented mode only

    std::int32_t depth() const { return static_cast<std::int32_t>(columns.size()); }
};

using NodeVisitor = std::function<void(const EnumNode&)>;

// Depth-first enumeration of all duplicate-free column sequences of length
// 1..max_card. Each node costs exactly one O(m) refine of its parent's
// ranking. Returns the number of nodes visited: sum over i of n!/(n-i)!.
// Pass a scratch to reuse buffers across calls and to observe the refine
// counter; otherwise one is allocated internally.
std::int64_t enumerate_sequences(const DataMatrix& matrix, const ColumnPresort& presort,
                                 std::int32_t max_card, const NodeVisitor& visit,
                                 RefineScratch* scratch = nullptr);

// Same traversal restricted to canonical ascending-index subsets of size
// 1..max_card; visits each subset exactly once, C(n,1)+...+C(n,max_card)
// nodes in total.
std::int64_t enumerate_subsets(const DataMatrix& matrix, const ColumnPresort& presort,
                               std::int32_t max_card, const NodeVisitor& visit,
                               RefineScratch* scratch = nullptr);

// Subset enumeration that additionally maintains each node's OrderedPartition
// (order + block starts), for clients that need contingency counts.
std::int64_t enumerate_subsets_augmented(const DataMatrix& matrix, const ColumnPresort& presort,
                                         std::int32_t max_card, const NodeVisitor& visit,
                                         RefineScratch* scratch = nullptr);

// Restriction of the augmented walk to subsets of `pool` (distinct column
// indices; subsets follow pool order). Lets a scan skip designated columns,
// e.g. a phenotype column that is appended separately.
std::int64_t enumerate_subsets_augmented(const DataMatrix& matrix, const ColumnPresort& presort,
                                         std::span<const std::int32_t> pool, std::int32_t max_card,
                                         const NodeVisitor& visit,
                                         RefineScratch* scratch = nullptr);

}  // namespace qlex
