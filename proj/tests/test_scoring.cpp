#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "qlex/bench.hpp"
#include "qlex/enumerate.hpp"
#include "qlex/scoring.hpp"
#include "support/fixtures.hpp"
#include "support/naive_bde.hpp"

using namespace qlex;
using test::error_code_of;

namespace {

ContingencyTable table_for(const DataMatrix& d, const ColumnPresort& q,
                           const std::vector<std::int32_t>& cols) {
    const auto [rv, op] = lex_sort_augmented(d, q, cols);
    return contingency_from_partition(op);
}

}  // namespace

TEST_CASE("contingency counts come straight from the partition") {
    const DataMatrix d = test::golden_matrix();
    const ColumnPresort q = presort_columns(d);

    const ContingencyTable t = table_for(d, q, {0, 3, 4});
    CHECK(t.total == 10);
    REQUIRE(t.num_blocks() == 6);
    const std::vector<std::int32_t> counts = [&] {
        std::vector<std::int32_t> c;
        for (const ContingencyEntry& e : t.entries) c.push_back(e.count);
        return c;
    }();
    CHECK(counts == std::vector<std::int32_t>{1, 1, 3, 2, 2, 1});
    CHECK(t.entries[0].representative_row == 2);  // lexicographically least row

    const ContingencyTable whole = table_for(d, q, {});
    REQUIRE(whole.num_blocks() == 1);
    CHECK(whole.entries[0].count == 10);

    const DataMatrix distinct = DataMatrix::from_columns({{3, 1, 2}});
    const ColumnPresort qd = presort_columns(distinct);
    const ContingencyTable td = table_for(distinct, qd, {0});
    REQUIRE(td.num_blocks() == 3);
    for (const ContingencyEntry& e : td.entries) CHECK(e.count == 1);
}

TEST_CASE("contingency_from_partition rejects malformed partitions") {
    OrderedPartition op = OrderedPartition::initial(4);
    op.partition = {0, 2, 2};
    CHECK(error_code_of([&] { contingency_from_partition(op); }) ==
          ErrorCode::InconsistentPartition);
    op.partition = {1, 2};
    CHECK(error_code_of([&] { contingency_from_partition(op); }) ==
          ErrorCode::InconsistentPartition);
    op = OrderedPartition::initial(4);
    op.order[0] = op.order[1];
    CHECK(error_code_of([&] { contingency_from_partition(op); }) ==
          ErrorCode::InconsistentPartition);
}

TEST_CASE("score matches the direct log-gamma evaluation") {
    std::mt19937 pick(47);
    for (int trial = 0; trial < 60; ++trial) {
        const std::int32_t m = 10 + static_cast<std::int32_t>(pick() % 60);
        const std::int32_t n = 2 + static_cast<std::int32_t>(pick() % 4);
        const std::int32_t arity = 2 + static_cast<std::int32_t>(pick() % 3);
        const DataMatrix d = generate_matrix(m, n, arity, pick());
        const ColumnPresort q = presort_columns(d);

        const std::int32_t child = static_cast<std::int32_t>(pick() % n);
        std::vector<std::int32_t> parents;
        for (std::int32_t c = 0; c < n; ++c) {
            if (c != child && pick() % 2 == 0) parents.push_back(c);
        }
        const double ess = 0.5 + (pick() % 8) * 0.5;

        const ContingencyTable parent_t = table_for(d, q, parents);
        std::vector<std::int32_t> joint_cols = parents;
        joint_cols.push_back(child);
        const ContingencyTable joint_t = table_for(d, q, joint_cols);

        double configs = 1.0;
        for (std::int32_t c : parents) configs *= d.arity(c);

        const double got = bde_local_score(parent_t, joint_t, d.arity(child), ess, configs);
        const double want = test::naive_bde_score(d, parents, child, ess);
        CHECK(std::abs(got - want) < 1e-9);
    }
}

TEST_CASE("correlated parent outscores an independent one") {
    // Child equals parent A exactly; parent B is unrelated.
    std::vector<std::int32_t> a(100), b(100);
    for (int i = 0; i < 100; ++i) {
        a[i] = (i / 25) % 2;  // 50/50 blocks
        b[i] = (i / 2) % 2;
    }
    const DataMatrix d = DataMatrix::from_columns({a, b, a});
    const ColumnPresort q = presort_columns(d);

    const double with_a = bde_local_score(table_for(d, q, {0}), table_for(d, q, {0, 2}), 2,
                                          1.0, 2.0);
    const double with_b = bde_local_score(table_for(d, q, {1}), table_for(d, q, {1, 2}), 2,
                                          1.0, 2.0);
    CHECK(with_a > with_b);
}

TEST_CASE("score input validation") {
    const DataMatrix d = test::golden_matrix();
    const ColumnPresort q = presort_columns(d);
    const ContingencyTable parent = table_for(d, q, {0});
    const ContingencyTable joint = table_for(d, q, {0, 4});

    CHECK(error_code_of([&] { bde_local_score(parent, joint, 2, 0.0, 2.0); }) ==
          ErrorCode::NonPositiveEss);
    CHECK(error_code_of([&] { bde_local_score(parent, joint, 1, 1.0, 2.0); }) ==
          ErrorCode::BadArgument);
    CHECK(error_code_of([&] { bde_local_score(parent, joint, 2, 1.0, 0.0); }) ==
          ErrorCode::BadArgument);

    // Joint built over different columns no longer nests inside the parent.
    const ContingencyTable unrelated = table_for(d, q, {4});
    CHECK(error_code_of([&] { bde_local_score(parent, unrelated, 2, 1.0, 2.0); }) ==
          ErrorCode::TableInconsistency);

    ContingencyTable short_joint = joint;
    short_joint.entries.pop_back();
    CHECK(error_code_of([&] { bde_local_score(parent, short_joint, 2, 1.0, 2.0); }) ==
          ErrorCode::TableInconsistency);

    ContingencyTable wrong_total = joint;
    wrong_total.total = 9;
    CHECK(error_code_of([&] { bde_local_score(parent, wrong_total, 2, 1.0, 2.0); }) ==
          ErrorCode::TableInconsistency);
}

TEST_CASE("score ignores code relabeling") {
    // Same data twice, second copy with column tokens renamed so their sort
    // order reverses; the block structure (hence the score) is identical.
    const DataMatrix d = test::matrix_from_rows(
        {{0, 1}, {1, 0}, {0, 0}, {1, 1}, {0, 1}, {1, 0}, {0, 0}, {1, 0}});
    std::ostringstream relabeled;
    for (std::int32_t r = 0; r < d.rows(); ++r) {
        relabeled << (d.code(r, 0) == 0 ? "z" : "a") << ',' << d.decode(r, 1) << '\n';
    }
    std::istringstream in(relabeled.str());
    const DataMatrix d2 = load_matrix(in, TextFormat::Csv, false);

    const ColumnPresort q = presort_columns(d);
    const ColumnPresort q2 = presort_columns(d2);
    const double s1 =
        bde_local_score(table_for(d, q, {0}), table_for(d, q, {0, 1}), d.arity(1), 1.0, 2.0);
    const double s2 = bde_local_score(table_for(d2, q2, {0}), table_for(d2, q2, {0, 1}),
                                      d2.arity(1), 1.0, 2.0);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
}

TEST_CASE("scan ranks the planted pair first and counts its refines") {
    const DataMatrix d = plant_epistasis(200, 8, {1, 4}, 0.03, 1234);
    const ColumnPresort q = presort_columns(d);
    RefineScratch scratch(d.rows());

    const std::vector<ScoredSet> report = epistasis_scan(d, q, 8, 2, 1.0, 5, &scratch);
    REQUIRE(!report.empty());
    CHECK(report[0].columns == std::vector<std::int32_t>{1, 4});
    CHECK(report[0].rank == 1);
    for (std::size_t i = 1; i < report.size(); ++i) {
        CHECK(report[i].rank == static_cast<std::int32_t>(i) + 1);
        CHECK(report[i - 1].score >= report[i].score);
    }
    // Two tables per subset: C(8,2) + 8 = 36 subsets.
    CHECK(scratch.refine_calls() == 72);
}

TEST_CASE("scan order matches exhaustive naive rescoring") {
    const DataMatrix d = plant_epistasis(60, 5, {0, 2}, 0.05, 77);
    const ColumnPresort q = presort_columns(d);

    const std::vector<ScoredSet> report = epistasis_scan(d, q, 5, 2, 1.0, 15);
    REQUIRE(report.size() == 15);  // C(5,2) + 5

    for (const ScoredSet& s : report) {
        const double naive = test::naive_bde_score(d, s.columns, 5, 1.0);
        CHECK(std::abs(s.score - naive) < 1e-9);
    }
    // The naive scores must agree with the report's ordering.
    for (std::size_t i = 1; i < report.size(); ++i) {
        CHECK(report[i - 1].score >= report[i].score);
    }
}

TEST_CASE("singletons of a planted XOR carry no signal") {
    const DataMatrix d = plant_epistasis(300, 6, {2, 5}, 0.02, 4096);
    const ColumnPresort q = presort_columns(d);

    const std::vector<ScoredSet> pairs = epistasis_scan(d, q, 6, 2, 1.0, 1);
    const std::vector<ScoredSet> singles = epistasis_scan(d, q, 6, 1, 1.0, 1);
    REQUIRE(pairs.size() == 1);
    REQUIRE(singles.size() == 1);
    CHECK(pairs[0].columns == std::vector<std::int32_t>{2, 5});
    CHECK(singles[0].score < pairs[0].score);
}

TEST_CASE("scan argument validation") {
    const DataMatrix d = plant_epistasis(40, 4, {0, 1}, 0.0, 5);
    const ColumnPresort q = presort_columns(d);
    CHECK(error_code_of([&] { epistasis_scan(d, q, 9, 2, 1.0, 3); }) ==
          ErrorCode::ColumnOutOfRange);
    CHECK(error_code_of([&] { epistasis_scan(d, q, 4, 2, -1.0, 3); }) ==
          ErrorCode::NonPositiveEss);
    CHECK(error_code_of([&] { epistasis_scan(d, q, 4, 0, 1.0, 3); }) ==
          ErrorCode::CardinalityOutOfRange);
    CHECK(error_code_of([&] { epistasis_scan(d, q, 4, 5, 1.0, 3); }) ==
          ErrorCode::CardinalityOutOfRange);
    CHECK(error_code_of([&] { epistasis_scan(d, q, 4, 2, 1.0, 0); }) == ErrorCode::BadArgument);
}

TEST_CASE("count-cache cost bounds") {
    const AdTreeBounds small = adtree_cost_bounds(8, 4);
    CHECK(small.time_bound == doctest::Approx(40.0));
    CHECK(small.space_bound == doctest::Approx(15.0));

    const AdTreeBounds one = adtree_cost_bounds(1, 9);
    CHECK(one.time_bound == doctest::Approx(1.0));
    CHECK(one.space_bound == doctest::Approx(1.0));

    // m = 7 keeps levels 0..2: time 7*1 + 3.5*3 + 1.75*3, space 1 + 3 + 3.
    const AdTreeBounds mid = adtree_cost_bounds(7, 3);
    CHECK(mid.time_bound == doctest::Approx(7.0 + 10.5 + 5.25));
    CHECK(mid.space_bound == doctest::Approx(7.0));

    const AdTreeBounds huge = adtree_cost_bounds(1000, 50000);
    CHECK(huge.space_bound > 1e30);
    CHECK(std::isfinite(huge.space_bound));
    CHECK(huge.time_bound > huge.space_bound);

    CHECK(error_code_of([] { adtree_cost_bounds(0, 5); }) == ErrorCode::BadArgument);
    CHECK(error_code_of([] { adtree_cost_bounds(5, 0); }) == ErrorCode::BadArgument);
}
