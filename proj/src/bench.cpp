#include "qlex/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "qlex/baseline.hpp"
#include "qlex/enumerate.hpp"

namespace qlex {
namespace {

// Multiplicative range reduction: maps a full 64-bit draw onto [0, bound)
// with bias far below anything a statistical test at these sizes can see,
// and (unlike modulo) without a divide.
std::int32_t reduce(std::uint64_t x, std::int32_t bound) {
    return static_cast<std::int32_t>(
        (static_cast<unsigned __int128>(x) * static_cast<std::uint64_t>(bound)) >> 64);
}

double unit_draw(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::int64_t volatile timing_sink = 0;

double time_once(const std::function<std::int64_t()>& workload) {
    const auto start = std::chrono::steady_clock::now();
    timing_sink = workload();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

// Batch size that stretches one measurement to at least min_batch_seconds,
// so sub-millisecond workloads are not measured at clock granularity.
int batch_for(double warm_seconds, const BenchOptions& options) {
    if (warm_seconds >= options.min_batch_seconds) return 1;
    return static_cast<int>(std::min(
        10000.0, std::ceil(options.min_batch_seconds / std::max(warm_seconds, 1e-7))));
}

// Seconds per repetition over one batch.
double time_batch(const std::function<std::int64_t()>& workload, int batch) {
    const auto start = std::chrono::steady_clock::now();
    std::int64_t acc = 0;
    for (int b = 0; b < batch; ++b) acc += workload();
    const auto stop = std::chrono::steady_clock::now();
    timing_sink = acc;
    return std::chrono::duration<double>(stop - start).count() / batch;
}

double median_of(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    if (samples.size() % 2 == 1) return samples[mid];
    return 0.5 * (samples[mid - 1] + samples[mid]);
}

std::int64_t sls_all_subsets(const DataMatrix& matrix, std::int32_t k,
                             std::vector<std::int32_t>& path, std::int32_t start,
                             std::int64_t& sink) {
    std::int64_t visited = 0;
    for (std::int32_t c = start; c < matrix.cols(); ++c) {
        path.push_back(c);
        const RankingVector rv = stable_lex_sort(matrix, path);
        sink += rv.num_blocks;
        ++visited;
        if (static_cast<std::int32_t>(path.size()) < k) {
            visited += sls_all_subsets(matrix, k, path, c + 1, sink);
        }
        path.pop_back();
    }
    return visited;
}

std::int64_t qls_pass(const DataMatrix& sub, const ColumnPresort& presort, std::int32_t k,
                      RefineScratch& scratch, std::int64_t& nodes) {
    std::int64_t sink = 0;
    nodes = enumerate_subsets(sub, presort, k, [&](const EnumNode& node) {
        sink += node.ranking.num_blocks;
    }, &scratch);
    return sink;
}

std::int64_t sls_pass(const DataMatrix& sub, std::int32_t k) {
    std::int64_t sink = 0;
    std::vector<std::int32_t> path;
    path.reserve(k);
    sls_all_subsets(sub, k, path, 0, sink);
    return sink;
}

}  // namespace

DataMatrix generate_matrix(std::int32_t m, std::int32_t n,
                           std::span<const std::int32_t> arities, std::uint64_t seed) {
    if (m < 1 || n < 1) fail(ErrorCode::BadArgument, "matrix dimensions must be positive");
    if (static_cast<std::int32_t>(arities.size()) != n) {
        fail(ErrorCode::BadArgument, "need one arity per column");
    }
    for (std::int32_t a : arities) {
        if (a < 1) fail(ErrorCode::BadArgument, "column arity must be at least 1");
    }

    std::mt19937_64 gen(seed);
    std::vector<std::vector<std::int32_t>> columns(n);
    for (std::int32_t c = 0; c < n; ++c) {
        columns[c].resize(m);
        for (std::int32_t j = 0; j < m; ++j) columns[c][j] = reduce(gen(), arities[c]);
    }
    return DataMatrix::from_columns(columns);
}

DataMatrix generate_matrix(std::int32_t m, std::int32_t n, std::int32_t arity,
                           std::uint64_t seed) {
    const std::vector<std::int32_t> arities(std::max(n, 0), arity);
    return generate_matrix(m, n, arities, seed);
}

DataMatrix plant_epistasis(std::int32_t m, std::int32_t n_snps,
                           std::pair<std::int32_t, std::int32_t> pair, double noise_rate,
                           std::uint64_t seed) {
    if (m < 1) fail(ErrorCode::BadArgument, "row count must be positive");
    const auto [a, b] = pair;
    if (n_snps < 2 || a == b || a < 0 || b < 0 || a >= n_snps || b >= n_snps) {
        fail(ErrorCode::BadPair, "planted pair must name two distinct SNP columns");
    }
    if (noise_rate < 0.0 || noise_rate >= 0.5) {
        fail(ErrorCode::BadNoise, "noise rate must lie in [0, 0.5)");
    }

    std::mt19937_64 gen(seed);
    std::vector<std::vector<std::int32_t>> columns(n_snps + 1);
    for (std::int32_t c = 0; c < n_snps; ++c) {
        columns[c].resize(m);
        for (std::int32_t j = 0; j < m; ++j) columns[c][j] = reduce(gen(), 2);
    }
    std::vector<std::int32_t>& pheno = columns[n_snps];
    pheno.resize(m);
    for (std::int32_t j = 0; j < m; ++j) {
        std::int32_t bit = columns[a][j] ^ columns[b][j];
        if (unit_draw(gen) < noise_rate) bit ^= 1;
        pheno[j] = bit;
    }
    return DataMatrix::from_columns(columns);
}

void write_csv(const BenchReport& report, std::ostream& out) {
    out << "fraction,m,n,k,nodes,qls_seconds,sls_seconds,ratio\n";
    char line[256];
    for (const BenchRow& row : report.rows) {
        std::snprintf(line, sizeof(line), "%g,%d,%d,%d,%lld,%.9g,%.9g,%.6g\n", row.fraction,
                      row.m, row.n, row.k, static_cast<long long>(row.nodes), row.qls_seconds,
                      row.sls_seconds, row.ratio);
        out << line;
    }
}

BenchReport run_scaling_experiment(const DataMatrix& matrix, std::int32_t k,
                                   std::span<const double> fractions,
                                   const BenchOptions& options) {
    if (k < 1 || k > matrix.cols()) {
        fail(ErrorCode::CardinalityOutOfRange,
             "max cardinality " + std::to_string(k) + " outside [1, " +
                 std::to_string(matrix.cols()) + "]");
    }
    for (double f : fractions) {
        if (!(f > 0.0) || f > 1.0) {
            fail(ErrorCode::BadFraction, "fractions must lie in (0, 1]");
        }
    }
    if (options.trials < 1) fail(ErrorCode::BadArgument, "need at least one trial");

    // One prepared dataset per fraction, alive for the whole run so trials
    // can interleave across fractions. The presort is per-dataset
    // preprocessing, shared by every node of every run, so it stays outside
    // the timed region; what gets timed is the refine sweep itself.
    struct Prepared {
        double fraction;
        DataMatrix sub;
        ColumnPresort presort;
        RefineScratch scratch;
        std::int64_t nodes = 0;
        int qls_batch = 1;
        int sls_batch = 1;
        std::vector<double> qls_samples{};
        std::vector<double> sls_samples{};
    };

    std::vector<Prepared> runs;
    runs.reserve(fractions.size());
    for (double f : fractions) {
        // Epsilon-adjusted ceiling so f = 0.1 on m = 25010 lands on 2501
        // rather than picking up one row of binary-representation noise.
        const std::int32_t full = matrix.rows();
        const std::int32_t m_f = std::max<std::int32_t>(
            1, static_cast<std::int32_t>(std::ceil(f * full - 1e-9)));
        DataMatrix sub = truncate_rows(matrix, m_f);
        ColumnPresort presort = presort_columns(sub);

        if (options.verify) {
            enumerate_subsets(sub, presort, k, [&](const EnumNode& node) {
                if (!(stable_lex_sort(sub, node.columns) == node.ranking)) {
                    throw std::logic_error("engines disagree on subset ranking");
                }
            });
        }
        runs.push_back(Prepared{f, std::move(sub), std::move(presort), RefineScratch(m_f)});
    }

    for (Prepared& run : runs) {
        const auto qls = [&] { return qls_pass(run.sub, run.presort, k, run.scratch, run.nodes); };
        const auto sls = [&] { return sls_pass(run.sub, k); };
        run.qls_batch = batch_for(time_once(qls), options);
        run.sls_batch = batch_for(time_once(sls), options);
        run.qls_samples.reserve(options.trials);
        run.sls_samples.reserve(options.trials);
    }

    // Trials interleave across fractions and engines, so a slow patch of
    // host time lands on every series roughly equally instead of swallowing
    // one fraction's whole sample set; comparisons between fractions then
    // face correlated rather than independent noise.
    for (int t = 0; t < options.trials; ++t) {
        for (Prepared& run : runs) {
            run.qls_samples.push_back(time_batch(
                [&] { return qls_pass(run.sub, run.presort, k, run.scratch, run.nodes); },
                run.qls_batch));
            run.sls_samples.push_back(time_batch([&] { return sls_pass(run.sub, k); },
                                                 run.sls_batch));
        }
    }

    BenchReport report;
    for (Prepared& run : runs) {
        BenchRow row;
        row.fraction = run.fraction;
        row.m = run.sub.rows();
        row.n = run.sub.cols();
        row.k = k;
        row.nodes = run.nodes;
        row.qls_seconds = median_of(std::move(run.qls_samples));
        row.sls_seconds = median_of(std::move(run.sls_samples));
        row.ratio = row.sls_seconds / row.qls_seconds;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace qlex
