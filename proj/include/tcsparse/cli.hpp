#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "tcsparse/analysis.hpp"
#include "tcsparse/container_io.hpp"
#include "tcsparse/footprint.hpp"
#include "tcsparse/generate.hpp"
#include "tcsparse/matrix_market.hpp"
#include "tcsparse/sddmm.hpp"
#include "tcsparse/spmm.hpp"

namespace tcsparse::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;      // empty input set or some inputs skipped
inline constexpr int kExitInputError = 2;   // unreadable or malformed input
inline constexpr int kExitVerifyFailed = 3; // oracle mismatch under --verify

// Verification tolerances for --real mode; small-integer mode demands
// bit-exact equality.
inline constexpr double kRealTolFp16 = 1e-2;
inline constexpr double kRealTolTf32 = 1e-3;

namespace detail {

inline CsrMatrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_matrix_market(in);
}

/// Reference product in double precision, independent of the MMA path.
inline std::vector<double> dense_matmul_reference(const DenseMatrix& a, const DenseMatrix& b) {
    std::vector<double> out(a.rows * b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t l = 0; l < a.cols; ++l) {
            const double av = a.at(i, l);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                out[i * b.cols + j] += av * static_cast<double>(b.at(l, j));
        }
    return out;
}

struct VerifyOutcome {
    bool exact = true;
    bool within_tol = true;
    double max_abs_diff = 0.0;
};

inline VerifyOutcome compare(const DenseMatrix& got, const std::vector<double>& want,
                             double tol) {
    VerifyOutcome v;
    for (std::size_t i = 0; i < got.data.size(); ++i) {
        const double diff = std::abs(static_cast<double>(got.data[i]) - want[i]);
        v.max_abs_diff = std::max(v.max_abs_diff, diff);
        if (diff != 0.0) v.exact = false;
        if (diff > tol * std::max(1.0, std::abs(want[i]))) v.within_tol = false;
    }
    return v;
}

inline std::vector<std::string> collect_inputs(const std::string& input, const std::string& dir,
                                               std::ostream& err) {
    std::vector<std::string> files;
    if (!input.empty()) {
        files.push_back(input);
    } else {
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
            if (entry.is_regular_file() && entry.path().extension() == ".mtx")
                files.push_back(entry.path().string());
        if (ec) err << "error: cannot read directory '" << dir << "'\n";
        std::sort(files.begin(), files.end());
    }
    return files;
}

inline std::string matrix_id(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
}

}  // namespace detail

struct ConvertOptions {
    std::string input;
    std::string output;
    Precision precision = Precision::fp16;
};

/// Parses MatrixMarket input, writes the binary container and prints an
/// ME vs SR footprint summary.
inline int run_convert(const ConvertOptions& opt, std::ostream& out, std::ostream& err) {
    CsrMatrix csr;
    try {
        csr = detail::load_matrix_market(opt.input);
    } catch (const ParseError& e) {
        err << "error: " << opt.input << ": " << e.what() << "\n";
        return kExitInputError;
    }

    const MeBcrsMatrix me = encode_mebcrs(csr, opt.precision);
    const SrBcrsMatrix sr = encode_srbcrs(csr, opt.precision);

    if (!opt.output.empty()) {
        std::ofstream f(opt.output, std::ios::binary);
        if (!f) {
            err << "error: cannot open output '" << opt.output << "'\n";
            return kExitInputError;
        }
        write_mebcrs(f, me);
    }

    const std::size_t vw = value_width(opt.precision);
    const std::size_t me_ptr = (me.num_windows() + 1) * kDefaultIndexWidth;
    const std::size_t sr_ptr = 2 * sr.num_windows() * kDefaultIndexWidth;
    const std::size_t me_total = footprint_bytes(me);
    const std::size_t sr_total = footprint_bytes(sr);
    out << "matrix: " << csr.rows << "x" << csr.cols << " nnz=" << csr.nnz() << "\n";
    out << "stored vectors: " << me.column_indices.size() << " (padded: " << sr.column_indices.size()
        << ")\n";
    out << "pointer bytes: me=" << me_ptr << " sr=" << sr_ptr << "\n";
    out << "footprint bytes (" << to_string(opt.precision) << ", " << vw
        << "-byte values): me=" << me_total << " sr=" << sr_total << " reduction="
        << (sr_total == 0 ? 0.0 : 1.0 - static_cast<double>(me_total) / static_cast<double>(sr_total))
        << "\n";
    return kExitOk;
}

struct SpmmOptions {
    std::string input;
    std::size_t n = 128;
    Precision precision = Precision::fp16;
    std::size_t vector_height = 8;
    ThreadMapping mapping = ThreadMapping::coalesced;
    std::uint64_t seed = 1;
    bool verify = false;
    bool real_values = false;  // uniform-real dense operand with tolerance check
};

/// Executes SpMM (swapped 8x1 path or the 16x1 baseline) against a seeded
/// dense operand and reports counters; --verify compares with the reference
/// product and fails hard on mismatch.
inline int run_spmm(const SpmmOptions& opt, std::ostream& out, std::ostream& err) {
    CsrMatrix csr;
    try {
        csr = detail::load_matrix_market(opt.input);
    } catch (const ParseError& e) {
        err << "error: " << opt.input << ": " << e.what() << "\n";
        return kExitInputError;
    }

    const DenseMatrix dense = opt.real_values
                                  ? generate_random_dense_real(csr.cols, opt.n, opt.seed)
                                  : generate_random_dense(csr.cols, opt.n, opt.seed);

    KernelConfig cfg{opt.precision, opt.vector_height, opt.mapping};
    SpmmResult res;
    if (opt.vector_height == 8) {
        res = spmm(encode_mebcrs(csr, opt.precision), dense, cfg);
    } else {
        res = spmm_baseline16(csr, dense, cfg);
    }

    out << "spmm vector=" << opt.vector_height << " precision=" << to_string(opt.precision)
        << " mapping=" << to_string(opt.mapping) << " n=" << opt.n << "\n";
    out << "mma=" << res.counters.mma_invocations << " transactions=" << res.counters.transactions
        << " transaction_bytes=" << res.counters.transaction_bytes
        << " useful_bytes=" << res.counters.useful_bytes << "\n";

    if (opt.verify) {
        const auto want = detail::dense_matmul_reference(to_dense(csr), dense);
        const double tol = opt.precision == Precision::fp16 ? kRealTolFp16 : kRealTolTf32;
        const auto v = detail::compare(res.output, want, tol);
        if (opt.real_values ? !v.within_tol : !v.exact) {
            err << "verification FAILED: max_abs_diff=" << v.max_abs_diff << "\n";
            return kExitVerifyFailed;
        }
        out << (v.exact ? "verify: exact match\n"
                        : "verify: within tolerance, max_abs_diff=" + std::to_string(v.max_abs_diff) +
                              "\n");
    }
    return kExitOk;
}

struct SddmmOptions {
    std::string input;   // mask pattern
    std::size_t n = 32;  // inner (feature) dimension K
    Precision precision = Precision::fp16;
    std::uint64_t seed = 1;
    bool verify = false;
    bool real_values = false;
    std::string output;  // optional container dump of the sampled result
};

inline int run_sddmm(const SddmmOptions& opt, std::ostream& out, std::ostream& err) {
    CsrMatrix csr;
    try {
        csr = detail::load_matrix_market(opt.input);
    } catch (const ParseError& e) {
        err << "error: " << opt.input << ": " << e.what() << "\n";
        return kExitInputError;
    }

    SddmmOperands ops;
    ops.mask = encode_mebcrs(csr, opt.precision);
    ops.a = opt.real_values ? generate_random_dense_real(csr.rows, opt.n, opt.seed)
                            : generate_random_dense(csr.rows, opt.n, opt.seed);
    ops.b_t = opt.real_values ? generate_random_dense_real(csr.cols, opt.n, opt.seed + 1)
                              : generate_random_dense(csr.cols, opt.n, opt.seed + 1);

    const KernelConfig cfg{opt.precision, 8, ThreadMapping::coalesced};
    const SddmmResult res = sddmm(ops, cfg);

    out << "sddmm precision=" << to_string(opt.precision) << " k=" << opt.n
        << " sampled=" << csr.nnz() << "\n";
    out << "mma=" << res.counters.mma_invocations << "\n";

    if (opt.verify) {
        const CsrMatrix got = decode_mebcrs(res.output);
        const double tol = opt.precision == Precision::fp16 ? kRealTolFp16 : kRealTolTf32;
        double max_diff = 0.0;
        bool pattern_ok = got.rows == csr.rows && got.cols == csr.cols;
        // per-position dot products, double accumulation
        const DenseMatrix sampled = to_dense(got);
        for (std::size_t r = 0; pattern_ok && r < csr.rows; ++r)
            for (std::size_t p = csr.row_ptr[r]; p < csr.row_ptr[r + 1]; ++p) {
                double dot = 0.0;
                for (std::size_t l = 0; l < opt.n; ++l)
                    dot += static_cast<double>(ops.a.at(r, l)) *
                           static_cast<double>(ops.b_t.at(csr.col_idx[p], l));
                const double diff = std::abs(sampled.at(r, csr.col_idx[p]) - dot);
                max_diff = std::max(max_diff, diff);
                if (opt.real_values ? diff > tol * std::max(1.0, std::abs(dot)) : diff != 0.0)
                    pattern_ok = false;
            }
        if (!pattern_ok) {
            err << "verification FAILED: max_abs_diff=" << max_diff << "\n";
            return kExitVerifyFailed;
        }
        out << "verify: ok, max_abs_diff=" << max_diff << "\n";
    }

    if (!opt.output.empty()) {
        std::ofstream f(opt.output, std::ios::binary);
        if (!f) {
            err << "error: cannot open output '" << opt.output << "'\n";
            return kExitInputError;
        }
        write_mebcrs(f, res.output);
    }
    return kExitOk;
}

struct StatsOptions {
    std::string input;  // single file; or
    std::string dir;    // every *.mtx inside, sorted by name
    std::vector<std::size_t> n_list{128};
    ThreadMapping mapping = ThreadMapping::coalesced;
    ReportFormat format = ReportFormat::csv;
    std::string output;
};

/// Batch structural analysis. Unreadable files are skipped with a log line;
/// output is byte-stable for identical inputs and flags.
inline int run_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err) {
    const auto files = detail::collect_inputs(opt.input, opt.dir, err);
    std::vector<CostReport> reports;
    std::size_t failed = 0;
    for (const auto& path : files) {
        try {
            const CsrMatrix csr = detail::load_matrix_market(path);
            reports.push_back(analyze_matrix(detail::matrix_id(path), csr, opt.n_list, opt.mapping));
        } catch (const ParseError& e) {
            err << "skipping " << path << ": " << e.what() << "\n";
            ++failed;
        }
    }
    detail::write_text(opt.output, emit_report(reports, opt.format), out);
    if (reports.empty() || failed > 0) return kExitPartial;
    return kExitOk;
}

struct BenchOptions {
    std::string input;
    std::string dir;
    std::size_t n = 128;
    std::uint64_t seed = 1;
    ThreadMapping mapping = ThreadMapping::coalesced;
    std::string output;
};

inline constexpr const char* kBenchCsvHeader =
    "matrix_id,precision,n_cols,mma_swap8,mma_baseline16,mma_swap8_analytic,"
    "mma_baseline16_analytic,transactions_swap8,transaction_bytes_swap8,verified";

/// Executes both kernel paths per matrix and precision, cross-checks the
/// instrumented MMA counters against the analytic formulas and the outputs
/// against the reference product.
inline int run_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
    const auto files = detail::collect_inputs(opt.input, opt.dir, err);
    std::ostringstream csv;
    csv << kBenchCsvHeader << "\n";
    std::size_t processed = 0;
    bool verify_failed = false;

    for (const auto& path : files) {
        CsrMatrix csr;
        try {
            csr = detail::load_matrix_market(path);
        } catch (const ParseError& e) {
            err << "skipping " << path << ": " << e.what() << "\n";
            continue;
        }
        ++processed;
        const DenseMatrix dense = generate_random_dense(csr.cols, opt.n, opt.seed);
        const auto want = detail::dense_matmul_reference(to_dense(csr), dense);

        for (const Precision p : {Precision::fp16, Precision::tf32}) {
            const auto swapped = spmm(encode_mebcrs(csr, p), dense, {p, 8, opt.mapping});
            const auto baseline = spmm_baseline16(csr, dense, {p, 16, opt.mapping});
            const std::size_t k = shape_for(p).k;
            const std::size_t a8 = count_mma(partition_windows(csr, 8, k), opt.n, Strategy::swap8);
            const std::size_t a16 =
                count_mma(partition_windows(csr, 16, k), opt.n, Strategy::baseline16);
            const bool ok = detail::compare(swapped.output, want, 0).exact &&
                            detail::compare(baseline.output, want, 0).exact;
            verify_failed = verify_failed || !ok;
            csv << detail::matrix_id(path) << "," << to_string(p) << "," << opt.n << ","
                << swapped.counters.mma_invocations << "," << baseline.counters.mma_invocations
                << "," << a8 << "," << a16 << "," << swapped.counters.transactions << ","
                << swapped.counters.transaction_bytes << "," << (ok ? "yes" : "no") << "\n";
        }
    }

    detail::write_text(opt.output, csv.str(), out);
    if (verify_failed) return kExitVerifyFailed;
    if (processed == 0) return kExitPartial;
    return kExitOk;
}

}  // namespace tcsparse::cli
