#include "qlex/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qlex/enumerate.hpp"

namespace qlex {
namespace {

void check_partition(const OrderedPartition& op) {
    const std::int32_t m = op.rows();
    if (m < 1 || op.partition.empty() || op.partition[0] != 0) {
        fail(ErrorCode::InconsistentPartition, "partition must start at offset 0");
    }
    for (std::size_t b = 1; b < op.partition.size(); ++b) {
        if (op.partition[b] <= op.partition[b - 1] || op.partition[b] >= m) {
            fail(ErrorCode::InconsistentPartition, "partition offsets not strictly increasing");
        }
    }
    std::vector<std::uint8_t> seen(m, 0);
    for (std::int32_t row : op.order) {
        if (row < 0 || row >= m || seen[row]) {
            fail(ErrorCode::InconsistentPartition, "order is not a permutation");
        }
        seen[row] = 1;
    }
}

}  // namespace

ContingencyTable contingency_from_partition(const OrderedPartition& op) {
    check_partition(op);
    ContingencyTable table;
    table.entries.reserve(op.num_blocks());
    table.total = op.rows();
    for (std::int32_t b = 0; b < op.num_blocks(); ++b) {
        const std::int32_t start = op.block_begin(b);
        table.entries.push_back({op.order[start], op.block_end(b) - start});
    }
    return table;
}

double bde_local_score(const ContingencyTable& parent, const ContingencyTable& joint,
                       std::int32_t child_arity, double ess, double parent_configs) {
    if (ess <= 0.0) fail(ErrorCode::NonPositiveEss, "equivalent sample size must be positive");
    if (child_arity < 2) fail(ErrorCode::BadArgument, "child arity must be at least 2");
    if (parent_configs < 1.0) {
        fail(ErrorCode::BadArgument, "parent configuration count must be at least 1");
    }
    if (parent.total != joint.total) {
        fail(ErrorCode::TableInconsistency, "parent and joint tables cover different row counts");
    }

    const double alpha_j = ess / parent_configs;
    const double alpha_jk = alpha_j / static_cast<double>(child_arity);
    const double lg_alpha_j = std::lgamma(alpha_j);
    const double lg_alpha_jk = std::lgamma(alpha_jk);

    // The joint table must split each parent block into at most child_arity
    // consecutive cells whose counts sum back exactly; walking both tables
    // in lockstep both validates that and feeds the score.
    double score = 0.0;
    std::size_t cell = 0;
    for (const ContingencyEntry& pe : parent.entries) {
        if (pe.count <= 0) fail(ErrorCode::TableInconsistency, "non-positive parent count");
        std::int64_t acc = 0;
        std::int32_t states = 0;
        while (acc < pe.count) {
            if (cell == joint.entries.size()) {
                fail(ErrorCode::TableInconsistency, "joint table ran out of cells");
            }
            const std::int32_t n_jk = joint.entries[cell].count;
            if (n_jk <= 0) fail(ErrorCode::TableInconsistency, "non-positive joint count");
            acc += n_jk;
            ++cell;
            ++states;
            score += std::lgamma(alpha_jk + n_jk) - lg_alpha_jk;
        }
        if (acc != pe.count || states > child_arity) {
            fail(ErrorCode::TableInconsistency, "joint table does not refine parent table");
        }
        score += lg_alpha_j - std::lgamma(alpha_j + pe.count);
    }
    if (cell != joint.entries.size()) {
        fail(ErrorCode::TableInconsistency, "joint table has cells beyond the parent blocks");
    }
    return score;
}

std::vector<ScoredSet> epistasis_scan(const DataMatrix& matrix, const ColumnPresort& presort,
                                      std::int32_t pheno_col, std::int32_t k, double ess,
                                      std::int32_t top, RefineScratch* scratch) {
    if (pheno_col < 0 || pheno_col >= matrix.cols()) {
        fail(ErrorCode::ColumnOutOfRange, "phenotype column " + std::to_string(pheno_col) +
                                              " out of range [0, " +
                                              std::to_string(matrix.cols()) + ")");
    }
    if (ess <= 0.0) fail(ErrorCode::NonPositiveEss, "equivalent sample size must be positive");
    if (top < 1) fail(ErrorCode::BadArgument, "report size must be at least 1");

    std::vector<std::int32_t> pool;
    pool.reserve(matrix.cols() - 1);
    for (std::int32_t c = 0; c < matrix.cols(); ++c) {
        if (c != pheno_col) pool.push_back(c);
    }

    std::optional<RefineScratch> local;
    if (!scratch) local.emplace(matrix.rows());
    RefineScratch& scr = scratch ? *scratch : *local;

    const std::int32_t child_arity = matrix.arity(pheno_col);

    // `better` orders the report: higher score first, ties by ascending
    // column tuple. The heap keeps the current worst on top so it can be
    // evicted in O(log top).
    const auto better = [](const ScoredSet& a, const ScoredSet& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.columns < b.columns;
    };

    std::vector<ScoredSet> heap;
    heap.reserve(top + 1);

    RankingVector joint_ranking;
    OrderedPartition joint_op;
    const auto score_node = [&](const EnumNode& node) {
        const ContingencyTable parent = contingency_from_partition(*node.ordered_partition);
        refine_augmented_into(matrix, presort, pheno_col, node.ranking, *node.ordered_partition,
                              joint_ranking, joint_op, scr);
        const ContingencyTable joint = contingency_from_partition(joint_op);

        double q = 1.0;
        for (std::int32_t c : node.columns) q *= static_cast<double>(matrix.arity(c));

        ScoredSet cand;
        cand.columns.assign(node.columns.begin(), node.columns.end());
        cand.score = bde_local_score(parent, joint, child_arity, ess, q);

        if (static_cast<std::int32_t>(heap.size()) < top) {
            heap.push_back(std::move(cand));
            std::push_heap(heap.begin(), heap.end(), better);
        } else if (better(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), better);
            heap.back() = std::move(cand);
            std::push_heap(heap.begin(), heap.end(), better);
        }
    };

    enumerate_subsets_augmented(matrix, presort, pool, k, score_node, &scr);

    std::sort(heap.begin(), heap.end(), better);
    for (std::size_t i = 0; i < heap.size(); ++i) {
        heap[i].rank = static_cast<std::int32_t>(i) + 1;
    }
    return heap;
}

AdTreeBounds adtree_cost_bounds(std::int64_t m, std::int64_t n) {
    if (m < 1 || n < 1) fail(ErrorCode::BadArgument, "dimensions must be positive");

    // Terms run k = 0 .. floor(log2 m); the binomial factor is carried as a
    // running product so huge n never overflows an integer type.
    double time_bound = 0.0;
    double space_bound = 0.0;
    double binom = 1.0;  // C(n, k)
    double rows_at_level = static_cast<double>(m);
    for (std::int64_t k = 0;; ++k) {
        time_bound += rows_at_level * binom;
        space_bound += binom;
        if ((k + 1) >= 63 || (std::int64_t{1} << (k + 1)) > m) break;
        binom *= static_cast<double>(n - k) / static_cast<double>(k + 1);
        rows_at_level /= 2.0;
    }
    return {time_bound, space_bound};
}

}  // namespace qlex
