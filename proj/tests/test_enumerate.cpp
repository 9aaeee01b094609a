#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "qlex/baseline.hpp"
#include "qlex/bench.hpp"
#include "qlex/enumerate.hpp"
#include "support/fixtures.hpp"

using namespace qlex;
using test::error_code_of;

namespace {

std::int64_t sequence_count(std::int64_t n, std::int64_t k) {
    std::int64_t total = 0, layer = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        layer *= n - i + 1;  // n! / (n-i)!
        total += layer;
    }
    return total;
}

std::int64_t subset_count(std::int64_t n, std::int64_t k) {
    std::int64_t total = 0, binom = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        binom = binom * (n - i + 1) / i;
        total += binom;
    }
    return total;
}

}  // namespace

TEST_CASE("visit counts match the closed-form formulas") {
    std::mt19937 pick(5);
    for (std::int32_t n = 1; n <= 6; ++n) {
        const DataMatrix d = generate_matrix(4, n, 2, pick());
        const ColumnPresort q = presort_columns(d);
        for (std::int32_t k = 1; k <= n; ++k) {
            RefineScratch scratch(d.rows());
            CHECK(enumerate_sequences(d, q, k, {}, &scratch) == sequence_count(n, k));
            CHECK(scratch.refine_calls() == sequence_count(n, k));

            scratch.reset_counter();
            CHECK(enumerate_subsets(d, q, k, {}, &scratch) == subset_count(n, k));
            CHECK(scratch.refine_calls() == subset_count(n, k));
        }
    }

    // Spot values: 2^n - 1 subsets, layered sequence sums.
    const DataMatrix d7 = generate_matrix(3, 7, 2, 99);
    const ColumnPresort q7 = presort_columns(d7);
    CHECK(enumerate_subsets(d7, q7, 7, {}) == 127);

    const DataMatrix d3 = generate_matrix(3, 3, 2, 98);
    const ColumnPresort q3 = presort_columns(d3);
    CHECK(enumerate_sequences(d3, q3, 3, {}) == 15);
    CHECK(enumerate_subsets(d3, q3, 3, {}) == 7);
}

TEST_CASE("cardinality bounds are validated") {
    const DataMatrix d = test::tiny_matrix();
    const ColumnPresort q = presort_columns(d);
    CHECK(error_code_of([&] { enumerate_subsets(d, q, 0, {}); }) ==
          ErrorCode::CardinalityOutOfRange);
    CHECK(error_code_of([&] { enumerate_subsets(d, q, 4, {}); }) ==
          ErrorCode::CardinalityOutOfRange);
    CHECK(error_code_of([&] { enumerate_sequences(d, q, -2, {}); }) ==
          ErrorCode::CardinalityOutOfRange);
}

TEST_CASE("each subset appears exactly once, in ascending canonical form") {
    const DataMatrix d = generate_matrix(6, 5, 3, 17);
    const ColumnPresort q = presort_columns(d);

    std::set<std::vector<std::int32_t>> seen;
    const std::int64_t total = enumerate_subsets(d, q, 3, [&](const EnumNode& node) {
        const std::vector<std::int32_t> cols(node.columns.begin(), node.columns.end());
        CHECK(std::is_sorted(cols.begin(), cols.end()));
        CHECK(node.depth() == static_cast<std::int32_t>(cols.size()));
        CHECK(node.ordered_partition == nullptr);
        CHECK(seen.insert(cols).second);  // no repeats
    });
    CHECK(total == static_cast<std::int64_t>(seen.size()));
    CHECK(total == subset_count(5, 3));
}

TEST_CASE("node rankings equal a from-scratch sort of the node's columns") {
    const DataMatrix d = test::golden_matrix();
    const ColumnPresort q = presort_columns(d);

    bool saw_target = false;
    enumerate_sequences(d, q, 3, [&](const EnumNode& node) {
        CHECK(node.ranking.ranks == brute_force_ranking(d, node.columns).ranks);
        if (std::vector<std::int32_t>(node.columns.begin(), node.columns.end()) ==
            std::vector<std::int32_t>{0, 3, 4}) {
            saw_target = true;
            CHECK(node.ranking.ranks ==
                  std::vector<std::int32_t>{4, 3, 0, 3, 2, 2, 5, 4, 1, 2});
        }
    });
    CHECK(saw_target);
}

TEST_CASE("every DFS edge refines its parent") {
    const DataMatrix d = generate_matrix(18, 4, 3, 31);
    const ColumnPresort q = presort_columns(d);

    std::vector<RankingVector> stack;
    enumerate_sequences(d, q, 4, [&](const EnumNode& node) {
        stack.resize(node.depth());
        const RankingVector& parent =
            node.depth() == 1 ? RankingVector::zeros(d.rows()) : stack[node.depth() - 2];
        CHECK(is_refinement(parent, node.ranking));
        stack.back() = node.ranking;
    });
}

TEST_CASE("augmented nodes carry a consistent partition") {
    const DataMatrix d = test::golden_matrix();
    const ColumnPresort q = presort_columns(d);

    bool saw_target = false;
    enumerate_subsets_augmented(d, q, 3, [&](const EnumNode& node) {
        REQUIRE(node.ordered_partition != nullptr);
        const OrderedPartition& op = *node.ordered_partition;
        REQUIRE(op.num_blocks() == node.ranking.num_blocks);
        for (std::int32_t b = 0; b < op.num_blocks(); ++b) {
            for (std::int32_t t = op.block_begin(b); t < op.block_end(b); ++t) {
                CHECK(node.ranking.ranks[op.order[t]] == b);
            }
        }
        if (std::vector<std::int32_t>(node.columns.begin(), node.columns.end()) ==
            std::vector<std::int32_t>{0, 3, 4}) {
            saw_target = true;
            CHECK(op.partition == std::vector<std::int32_t>{0, 1, 2, 5, 7, 9});
        }
    });
    CHECK(saw_target);
}

TEST_CASE("constant column gives a single-block partition") {
    const DataMatrix d = DataMatrix::from_columns({{7, 7, 7}, {0, 1, 2}});
    const ColumnPresort q = presort_columns(d);
    enumerate_subsets_augmented(d, q, 1, [&](const EnumNode& node) {
        if (node.columns[0] == 0) {
            CHECK(node.ordered_partition->partition == std::vector<std::int32_t>{0});
        } else {
            CHECK(node.ordered_partition->num_blocks() == 3);
        }
    });
}

TEST_CASE("pool restriction skips excluded columns") {
    const DataMatrix d = generate_matrix(8, 4, 2, 41);
    const ColumnPresort q = presort_columns(d);

    const std::vector<std::int32_t> pool{1, 3};
    std::set<std::vector<std::int32_t>> seen;
    const std::int64_t total =
        enumerate_subsets_augmented(d, q, pool, 2, [&](const EnumNode& node) {
            seen.insert({node.columns.begin(), node.columns.end()});
        });
    CHECK(total == 3);
    CHECK(seen == std::set<std::vector<std::int32_t>>{{1}, {3}, {1, 3}});

    const std::vector<std::int32_t> dup{1, 1};
    CHECK(error_code_of([&] { enumerate_subsets_augmented(d, q, dup, 1, {}); }) ==
          ErrorCode::BadArgument);
    const std::vector<std::int32_t> oob{1, 9};
    CHECK(error_code_of([&] { enumerate_subsets_augmented(d, q, oob, 1, {}); }) ==
          ErrorCode::ColumnOutOfRange);
}

TEST_CASE("augmented block sizes match oracle group sizes") {
    std::mt19937 pick(61);
    for (int trial = 0; trial < 15; ++trial) {
        const std::int32_t m = 2 + static_cast<std::int32_t>(pick() % 20);
        const DataMatrix d = generate_matrix(m, 3, 3, pick());
        const ColumnPresort q = presort_columns(d);
        enumerate_subsets_augmented(d, q, 3, [&](const EnumNode& node) {
            const RankingVector oracle = brute_force_ranking(d, node.columns);
            std::vector<std::int32_t> oracle_sizes(oracle.num_blocks, 0);
            for (std::int32_t r : oracle.ranks) ++oracle_sizes[r];

            const OrderedPartition& op = *node.ordered_partition;
            REQUIRE(op.num_blocks() == oracle.num_blocks);
            for (std::int32_t b = 0; b < op.num_blocks(); ++b) {
                CHECK(op.block_end(b) - op.block_begin(b) == oracle_sizes[b]);
            }
        });
    }
}
