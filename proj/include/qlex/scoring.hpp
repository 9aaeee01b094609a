#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qlex/lexsort.hpp"
#include "qlex/matrix.hpp"

namespace qlex {

// Block counts of an ordered partition: one entry per group of identical
// (column-restricted) rows, in lexicographic block order.
struct ContingencyEntry {
    std::int32_t representative_row;  // first row of the block in sort order
    std::int32_t count;
};

struct ContingencyTable {
    std::vector<ContingencyEntry> entries;
    std::int32_t total = 0;

    std::int32_t num_blocks() const { return static_cast<std::int32_t>(entries.size()); }
};

ContingencyTable contingency_from_partition(const OrderedPartition& op);

// BDeu local log-score of a child variable against a parent column set,
// from the parent-set contingency table and the joint (parent ∪ child)
// table. The joint table must subdivide the parent table block-for-block
// (both built over the same sort order, the joint by appending the child
// column). parent_configs is the number of parent value configurations in
// principle, i.e. the product of the parent columns' full-data arities —
// it sizes the Dirichlet pseudo-counts ess/q and ess/(q*r). Parent
// configurations with no observed rows contribute nothing and are absent
// from the tables by construction.
double bde_local_score(const ContingencyTable& parent, const ContingencyTable& joint,
                       std::int32_t child_arity, double ess, double parent_configs);

// One entry of the epistasis report: a SNP column set and the BDeu score of
// the phenotype given that set. rank is the 1-based report position.
struct ScoredSet {
    std::vector<std::int32_t> columns;
    double score = 0.0;
    std::int32_t rank = 0;
};

// Exhaustive interaction scan: scores every subset (size 1..k) of the
// non-phenotype columns as a parent set for the phenotype column, keeping
// the best `top` sets. Two O(m) refines per subset: one for the subset
// itself, one appending the phenotype. Results sorted by score descending,
// ties by ascending column tuple. Pass a scratch to observe the refine
// counter.
std::vector<ScoredSet> epistasis_scan(const DataMatrix& matrix, const ColumnPresort& presort,
                                      std::int32_t pheno_col, std::int32_t k, double ess,
                                      std::int32_t top, RefineScratch* scratch = nullptr);

// Upper bounds on AD-tree construction cost for an m x n dataset:
// time = sum over k in [0, log2 m] of (m / 2^k) * C(n, k), space = the same
// sum without the m / 2^k factor. Floating evaluation; exact for small
// arguments, finite well past the sizes where the structure stops being
// practical.
struct AdTreeBounds {
    double time_bound;
    double space_bound;
};

AdTreeBounds adtree_cost_bounds(std::int64_t m, std::int64_t n);

}  // namespace qlex
