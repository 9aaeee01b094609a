// qlexsort: lexicographic ranking of categorical data tables.
//
// Subcommands: sort (rank rows by a column sequence), enumerate (rank every
// column subset/sequence up to a cardinality bound), epistasis (score SNP
// subsets against a phenotype column), bench (refine engine vs iterated
// stable sort), adtree-bound (count-caching cost bounds).

#include <malloc.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlex/baseline.hpp"
#include "qlex/bench.hpp"
#include "qlex/enumerate.hpp"
#include "qlex/error.hpp"
#include "qlex/lexsort.hpp"
#include "qlex/matrix.hpp"
#include "qlex/scoring.hpp"

namespace {

qlex::TextFormat parse_format(const std::string& name) {
    return name == "tsv" ? qlex::TextFormat::Tsv : qlex::TextFormat::Csv;
}

std::string join(std::span<const std::int32_t> values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(sep);
        out += std::to_string(values[i]);
    }
    return out;
}

// Rank histogram = block sizes in rank order, without needing the order
// vector.
std::vector<std::int32_t> block_counts(const qlex::RankingVector& rv) {
    std::vector<std::int32_t> counts(rv.num_blocks, 0);
    for (std::int32_t r : rv.ranks) ++counts[r];
    return counts;
}

struct SortArgs {
    std::string path;
    std::vector<std::int32_t> cols;
    std::string format = "csv";
    bool header = false;
    std::string emit = "ranks";
};

int run_sort(const SortArgs& args) {
    const qlex::DataMatrix matrix =
        qlex::load_matrix_file(args.path, parse_format(args.format), args.header);
    const qlex::ColumnPresort presort = qlex::presort_columns(matrix);

    if (args.emit == "ranks") {
        const qlex::RankingVector rv = qlex::lex_sort(matrix, presort, args.cols);
        std::cout << join(rv.ranks, ' ') << '\n';
    } else if (args.emit == "counts") {
        const qlex::RankingVector rv = qlex::lex_sort(matrix, presort, args.cols);
        std::cout << join(block_counts(rv), ' ') << '\n';
    } else {  // order: one line per block, rows in lexicographic order
        const auto [rv, op] = qlex::lex_sort_augmented(matrix, presort, args.cols);
        for (std::int32_t b = 0; b < op.num_blocks(); ++b) {
            const std::span<const std::int32_t> block(op.order.data() + op.block_begin(b),
                                                      op.order.data() + op.block_end(b));
            std::cout << join(block, ' ') << '\n';
        }
    }
    return 0;
}

struct EnumArgs {
    std::string path;
    std::string format = "csv";
    bool header = false;
    std::string mode = "subsets";
    std::int32_t max_card = 0;
    bool max_card_set = false;
    std::string emit = "ranks";
};

int run_enumerate(const EnumArgs& args) {
    const qlex::DataMatrix matrix =
        qlex::load_matrix_file(args.path, parse_format(args.format), args.header);
    const qlex::ColumnPresort presort = qlex::presort_columns(matrix);
    const std::int32_t k = args.max_card_set ? args.max_card : matrix.cols();

    const bool count_only = args.emit == "count-only";
    const bool counts = args.emit == "counts";
    qlex::NodeVisitor visit;
    if (!count_only) {
        visit = [&](const qlex::EnumNode& node) {
            std::cout << join(node.columns, ',') << '\t';
            if (counts) {
                std::cout << join(block_counts(node.ranking), ' ') << '\n';
            } else {
                std::cout << join(node.ranking.ranks, ' ') << '\n';
            }
        };
    }

    const std::int64_t total = args.mode == "sequences"
                                   ? qlex::enumerate_sequences(matrix, presort, k, visit)
                                   : qlex::enumerate_subsets(matrix, presort, k, visit);
    if (count_only) std::cout << total << '\n';
    return 0;
}

struct EpistasisArgs {
    std::string path;
    std::string format = "csv";
    bool header = false;
    std::int32_t pheno_col = -1;  // default: last column
    std::int32_t k = 2;
    double ess = 1.0;
    std::int32_t top = 10;
    std::string out;
};

int run_epistasis(const EpistasisArgs& args) {
    const qlex::DataMatrix matrix =
        qlex::load_matrix_file(args.path, parse_format(args.format), args.header);
    const qlex::ColumnPresort presort = qlex::presort_columns(matrix);
    const std::int32_t pheno = args.pheno_col < 0 ? matrix.cols() - 1 : args.pheno_col;

    const std::vector<qlex::ScoredSet> report =
        qlex::epistasis_scan(matrix, presort, pheno, args.k, args.ess, args.top);

    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) qlex::fail(qlex::ErrorCode::IoError, "cannot write " + args.out);
    }
    std::ostream& out = args.out.empty() ? std::cout : file;

    out << "rank\tcolumns\tlog_score\n";
    char buf[64];
    for (const qlex::ScoredSet& s : report) {
        std::snprintf(buf, sizeof(buf), "%.9g", s.score);
        out << s.rank << '\t' << join(s.columns, ',') << '\t' << buf << '\n';
    }
    return 0;
}

struct BenchArgs {
    std::string path;
    std::string format = "csv";
    bool header = false;
    std::string synthetic;
    std::int32_t max_card = 0;
    bool max_card_set = false;
    std::string fractions = "0.1..1.0";
    std::string out;
    int trials = 5;
};

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> result;
    const auto parse_one = [](const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            qlex::fail(qlex::ErrorCode::BadArgument, "bad fraction '" + tok + "'");
        }
    };

    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        // lo..hi shorthand walks in steps of 0.1, inclusive.
        const double lo = parse_one(text.substr(0, dots));
        const double hi = parse_one(text.substr(dots + 2));
        for (double f = lo; f <= hi + 1e-9; f += 0.1) result.push_back(f);
        return result;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) result.push_back(parse_one(tok));
    return result;
}

int run_bench(const BenchArgs& args) {
    // Keep freed buffers in the arena for the duration of the timing runs so
    // page reclaim does not show up as engine time.
    mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
    mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);

    qlex::DataMatrix matrix = [&] {
        if (!args.synthetic.empty()) {
            std::vector<long long> parts;
            std::stringstream ss(args.synthetic);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    parts.push_back(std::stoll(tok));
                } catch (const std::exception&) {
                    qlex::fail(qlex::ErrorCode::BadArgument, "bad --synthetic field '" + tok + "'");
                }
            }
            if (parts.size() != 4) {
                qlex::fail(qlex::ErrorCode::BadArgument, "--synthetic wants m,n,arity,seed");
            }
            return qlex::generate_matrix(static_cast<std::int32_t>(parts[0]),
                                         static_cast<std::int32_t>(parts[1]),
                                         static_cast<std::int32_t>(parts[2]),
                                         static_cast<std::uint64_t>(parts[3]));
        }
        return qlex::load_matrix_file(args.path, parse_format(args.format), args.header);
    }();

    const std::int32_t k = args.max_card_set ? args.max_card : matrix.cols();
    const std::vector<double> fractions = parse_fractions(args.fractions);

    qlex::BenchOptions options;
    options.trials = args.trials;
    const qlex::BenchReport report = qlex::run_scaling_experiment(matrix, k, fractions, options);

    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) qlex::fail(qlex::ErrorCode::IoError, "cannot write " + args.out);
    }
    qlex::write_csv(report, args.out.empty() ? std::cout : file);
    return 0;
}

int run_adtree(std::int64_t rows, std::int64_t cols) {
    const qlex::AdTreeBounds bounds = qlex::adtree_cost_bounds(rows, cols);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "time_bound=%.15g space_bound=%.15g\n", bounds.time_bound,
                  bounds.space_bound);
    std::cout << buf;
    return 0;
}

void add_input_options(CLI::App* sub, std::string& path, std::string& format, bool& header,
                       bool path_required = true) {
    CLI::Option* p = sub->add_option("data", path, "input table (text, one record per row)");
    if (path_required) p->required();
    sub->add_option("--format", format, "input format")
        ->check(CLI::IsMember({"csv", "tsv"}))
        ->capture_default_str();
    sub->add_flag("--header", header, "skip the first record");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexicographic ranking engine for categorical data"};
    app.require_subcommand(1);

    SortArgs sort_args;
    CLI::App* sort_cmd = app.add_subcommand("sort", "rank rows by a column sequence");
    add_input_options(sort_cmd, sort_args.path, sort_args.format, sort_args.header);
    sort_cmd->add_option("--cols", sort_args.cols, "column indices, most significant first")
        ->delimiter(',');
    sort_cmd->add_option("--emit", sort_args.emit, "output form")
        ->check(CLI::IsMember({"ranks", "order", "counts"}))
        ->capture_default_str();

    EnumArgs enum_args;
    CLI::App* enum_cmd = app.add_subcommand("enumerate", "rank every column subset or sequence");
    add_input_options(enum_cmd, enum_args.path, enum_args.format, enum_args.header);
    enum_cmd->add_option("--mode", enum_args.mode, "what to enumerate")
        ->check(CLI::IsMember({"subsets", "sequences"}))
        ->capture_default_str();
    CLI::Option* card_opt = enum_cmd->add_option("--max-card", enum_args.max_card,
                                                 "cardinality bound (default: all columns)");
    enum_cmd->add_option("--emit", enum_args.emit, "per-node payload")
        ->check(CLI::IsMember({"ranks", "counts", "count-only"}))
        ->capture_default_str();

    EpistasisArgs epi_args;
    CLI::App* epi_cmd =
        app.add_subcommand("epistasis", "score column subsets against a phenotype column");
    add_input_options(epi_cmd, epi_args.path, epi_args.format, epi_args.header);
    epi_cmd->add_option("--pheno-col", epi_args.pheno_col, "phenotype column (default: last)");
    epi_cmd->add_option("--k", epi_args.k, "max interaction order")->capture_default_str();
    epi_cmd->add_option("--ess", epi_args.ess, "equivalent sample size")->capture_default_str();
    epi_cmd->add_option("--top", epi_args.top, "report size")->capture_default_str();
    epi_cmd->add_option("--out", epi_args.out, "write TSV here instead of stdout");

    BenchArgs bench_args;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "time the refine engine against iterated stable sort");
    add_input_options(bench_cmd, bench_args.path, bench_args.format, bench_args.header,
                      /*path_required=*/false);
    bench_cmd->add_option("--synthetic", bench_args.synthetic,
                          "generate input instead: m,n,arity,seed");
    CLI::Option* bench_card = bench_cmd->add_option("--max-card", bench_args.max_card,
                                                    "cardinality bound (default: all columns)");
    bench_cmd->add_option("--fractions", bench_args.fractions,
                          "row fractions: comma list or lo..hi in 0.1 steps")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench_args.out, "write CSV here instead of stdout");
    bench_cmd->add_option("--trials", bench_args.trials, "timing repetitions (median reported)")
        ->capture_default_str();

    std::int64_t ad_rows = 0;
    std::int64_t ad_cols = 0;
    CLI::App* ad_cmd = app.add_subcommand("adtree-bound", "count-cache cost bounds for m x n");
    ad_cmd->add_option("--rows", ad_rows, "row count")->required();
    ad_cmd->add_option("--cols", ad_cols, "column count")->required();

    try {
        app.parse(argc, argv);

        if (sort_cmd->parsed()) return run_sort(sort_args);
        if (enum_cmd->parsed()) {
            enum_args.max_card_set = card_opt->count() > 0;
            return run_enumerate(enum_args);
        }
        if (epi_cmd->parsed()) return run_epistasis(epi_args);
        if (bench_cmd->parsed()) {
            bench_args.max_card_set = bench_card->count() > 0;
            if (bench_args.synthetic.empty() && bench_args.path.empty()) {
                qlex::fail(qlex::ErrorCode::BadArgument, "need a data file or --synthetic");
            }
            if (!bench_args.synthetic.empty() && !bench_args.path.empty()) {
                qlex::fail(qlex::ErrorCode::BadArgument, "data file and --synthetic conflict");
            }
            return run_bench(bench_args);
        }
        if (ad_cmd->parsed()) return run_adtree(ad_rows, ad_cols);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const qlex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qlex::is_data_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
