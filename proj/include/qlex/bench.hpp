#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qlex/matrix.hpp"

namespace qlex {

// Seeded synthetic categorical matrix: i.i.d. uniform cells, one arity per
// column. The stream is pinned for reproducibility: a single mt19937_64
// seeded as given, cells drawn column-major (column 0 rows 0..m-1, then
// column 1, ...), each draw reduced to [0, arity) by the multiplicative
// high-bits method.
DataMatrix generate_matrix(std::int32_t m, std::int32_t n,
                           std::span<const std::int32_t> arities, std::uint64_t seed);
DataMatrix generate_matrix(std::int32_t m, std::int32_t n, std::int32_t arity,
                           std::uint64_t seed);

// Interaction-scan fixture: n_snps uniform binary columns plus a final
// phenotype column equal to the XOR of columns a and b, each phenotype bit
// flipped independently with probability noise_rate (< 0.5 so the planted
// signal stays dominant).
DataMatrix plant_epistasis(std::int32_t m, std::int32_t n_snps,
                           std::pair<std::int32_t, std::int32_t> pair, double noise_rate,
                           std::uint64_t seed);

struct BenchRow {
    double fraction;
    std::int32_t m;
    std::int32_t n;
    std::int32_t k;
    std::int64_t nodes;
    double qls_seconds;  // refine enumeration; the shared presort is not timed
    double sls_seconds;  // same node set, iterated stable sort from scratch
    double ratio;        // sls_seconds / qls_seconds
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

// Header: fraction,m,n,k,nodes,qls_seconds,sls_seconds,ratio
void write_csv(const BenchReport& report, std::ostream& out);

struct BenchOptions {
    int trials = 5;                   // measured repetitions; median reported
    double min_batch_seconds = 0.05;  // batch fast workloads up to this long
    bool verify = true;               // cross-check rankings before timing
};

// Row-scaling experiment: for each fraction f, truncate to the first
// ceil(f * m) rows and time the all-subsets (size <= k) workload under both
// engines. Workloads shorter than min_batch_seconds are repeated within a
// trial and averaged so the clock granularity cannot dominate; each
// reported timing is the median of `trials` such batches after a discarded
// warm-up. Trials are interleaved across fractions and engines rather than
// run back to back, so a slow patch of machine time spreads thinly over
// every series instead of landing on one number.
BenchReport run_scaling_experiment(const DataMatrix& matrix, std::int32_t k,
                                   std::span<const double> fractions,
                                   const BenchOptions& options = {});

}  // namespace qlex
