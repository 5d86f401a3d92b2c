#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcsparse/access_pattern.hpp"
#include "tcsparse/footprint.hpp"
#include "tcsparse/matrix.hpp"
#include "tcsparse/partition.hpp"

namespace tcsparse {

enum class Strategy { swap8, baseline16 };

namespace detail {

inline void require_strategy(const WindowPartition& part, Strategy s) {
    const std::size_t expected = s == Strategy::swap8 ? 8 : 16;
    if (part.vector_height != expected)
        throw ArgumentError("partition vector height does not match strategy");
}

inline std::size_t output_tile_width(Strategy s) { return s == Strategy::swap8 ? 16 : 8; }

}  // namespace detail

/// MMA invocations needed for one SpMM: blocks per window times output tiles.
/// The swapped path covers 16 dense columns per MMA, the baseline 8.
inline std::size_t count_mma(const WindowPartition& part, std::size_t n_cols, Strategy s) {
    detail::require_strategy(part, s);
    const std::size_t tw = detail::output_tile_width(s);
    return part.num_blocks() * ((n_cols + tw - 1) / tw);
}

/// Zeros stored inside nonzero vectors: vectorHeight * storedVectors - nnz.
inline std::size_t count_zero_fill(const WindowPartition& part, const CsrMatrix& m) {
    return part.vector_height * part.total_vectors() - m.nnz();
}

struct AccessCost {
    std::size_t a_bytes = 0;  // sparse blocks
    std::size_t b_bytes = 0;  // gathered dense rows
    std::size_t c_bytes = 0;  // output tiles, once per tile per window

    std::size_t total() const { return a_bytes + b_bytes + c_bytes; }
};

/// Logical bytes touched by one SpMM, summed over all MMAs with no cache
/// modeling. Per MMA the sparse block is vectorHeight x k and the dense
/// block k x tileWidth; each nonempty window writes one output tile of 128
/// elements per column tile.
inline AccessCost data_access_cost(const WindowPartition& part, std::size_t n_cols, Strategy s,
                                   Precision p) {
    detail::require_strategy(part, s);
    const std::size_t k = shape_for(p).k;
    if (part.k != k) throw ArgumentError("partition k does not match precision");
    const std::size_t vw = value_width(p);
    const std::size_t tw = detail::output_tile_width(s);
    const std::size_t tiles = (n_cols + tw - 1) / tw;

    AccessCost cost;
    for (const auto& win : part.windows) {
        if (win.empty()) continue;
        const std::size_t blocks = (win.size() + k - 1) / k;
        cost.a_bytes += blocks * tiles * part.vector_height * k * vw;
        cost.b_bytes += blocks * tiles * k * tw * vw;
        cost.c_bytes += tiles * part.vector_height * tw * vw;
    }
    return cost;
}

/// Memory transactions to gather the dense operand across all MMAs of one
/// SpMM, using the padded-buffer address model (base 0, row stride
/// paddedN * valueWidth). The swapped path uses the FP16 direct/coalesced
/// mapping from map_threads_rows; the baseline loads each gathered row as
/// contiguous 16-byte chunks.
inline std::size_t count_spmm_transactions(const WindowPartition& part, std::size_t n_cols,
                                           Strategy s, Precision p, ThreadMapping mapping) {
    detail::require_strategy(part, s);
    const std::size_t k = shape_for(p).k;
    if (part.k != k) throw ArgumentError("partition k does not match precision");
    const std::size_t vw = value_width(p);
    const std::size_t tw = detail::output_tile_width(s);
    const std::size_t tiles = (n_cols + tw - 1) / tw;
    if (tiles == 0) return 0;
    const std::uint64_t row_stride = tiles * tw * vw;

    // Tile t's pattern is tile 0's shifted by t*tw*vw bytes. That shift is
    // 16, 32 or 64 bytes, so segment structure repeats with period two
    // tiles at most; counting tiles 0 and 1 is enough.
    std::size_t tile0 = 0, tile1 = 0;
    std::vector<std::int64_t> rows(k, -1);
    for (const auto& win : part.windows) {
        const std::size_t blocks = (win.size() + k - 1) / k;
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t t = 0; t < std::min<std::size_t>(2, tiles); ++t) {
                AccessPattern ap;
                if (s == Strategy::swap8) {
                    for (std::size_t j = 0; j < k; ++j) {
                        const std::size_t v = b * k + j;
                        rows[j] = v < win.size() ? static_cast<std::int64_t>(
                                                       win[v] * row_stride + t * tw * vw)
                                                 : -1;
                    }
                    ap = map_threads_rows(rows, mapping, vw);
                } else {
                    auto& step = ap.steps.emplace_back();
                    for (std::size_t j = 0; j < k; ++j) {
                        const std::size_t v = b * k + j;
                        if (v >= win.size()) continue;
                        const std::uint64_t addr = win[v] * row_stride + t * tw * vw;
                        for (std::size_t off = 0; off < tw * vw; off += 16)
                            step.push_back({static_cast<std::uint32_t>(j), addr + off,
                                            static_cast<std::uint32_t>(
                                                std::min<std::size_t>(16, tw * vw - off))});
                    }
                }
                (t == 0 ? tile0 : tile1) += count_transactions(ap).transactions;
            }
        }
    }
    if (tiles == 1) return tile0;
    return (tiles + 1) / 2 * tile0 + tiles / 2 * tile1;
}

struct ConfigRecord {
    std::size_t vector_height = 8;
    Precision precision = Precision::fp16;
    std::size_t n_cols = 0;
    std::size_t mma_count = 0;
    std::size_t zero_fill = 0;
    std::size_t nonzero_count = 0;
    std::size_t data_access_bytes = 0;
    std::size_t transactions = 0;
    std::size_t footprint_me = 0;
    std::size_t footprint_sr = 0;

    bool operator==(const ConfigRecord&) const = default;
};

struct CostReport {
    std::string matrix_id;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nnz = 0;
    std::vector<ConfigRecord> records;

    bool operator==(const CostReport&) const = default;
};

/// Structural metrics for one matrix across both vector heights and both
/// precisions, for each requested dense-column count. Record order is fixed
/// (N outer; then v8/fp16, v8/tf32, v16/fp16, v16/tf32) so reports are
/// deterministic.
inline CostReport analyze_matrix(const std::string& matrix_id, const CsrMatrix& m,
                                 std::span<const std::size_t> n_list,
                                 ThreadMapping mapping = ThreadMapping::coalesced) {
    CostReport report;
    report.matrix_id = matrix_id;
    report.rows = m.rows;
    report.cols = m.cols;
    report.nnz = m.nnz();

    for (const std::size_t n : n_list) {
        for (const std::size_t v : {std::size_t{8}, std::size_t{16}}) {
            for (const Precision p : {Precision::fp16, Precision::tf32}) {
                const Strategy s = v == 8 ? Strategy::swap8 : Strategy::baseline16;
                const WindowPartition part = partition_windows(m, v, shape_for(p).k);
                ConfigRecord rec;
                rec.vector_height = v;
                rec.precision = p;
                rec.n_cols = n;
                rec.mma_count = count_mma(part, n, s);
                rec.zero_fill = count_zero_fill(part, m);
                rec.nonzero_count = m.nnz();
                rec.data_access_bytes = data_access_cost(part, n, s, p).total();
                rec.transactions = count_spmm_transactions(part, n, s, p, mapping);
                rec.footprint_me =
                    footprint_me_bytes(part.num_windows(), part.total_vectors(), v,
                                       kDefaultIndexWidth, value_width(p));
                rec.footprint_sr =
                    footprint_sr_bytes(part.num_windows(), part.padded_vectors(), v,
                                       kDefaultIndexWidth, value_width(p));
                report.records.push_back(rec);
            }
        }
    }
    return report;
}

enum class ReportFormat { csv, json };

inline constexpr const char* kReportCsvHeader =
    "matrix_id,rows,cols,nnz,vector_height,precision,n_cols,mma_count,zero_fill,"
    "access_bytes,transactions,footprint_me,footprint_sr";

inline std::string emit_report(std::span<const CostReport> reports, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::ostringstream out;
        out << kReportCsvHeader << "\n";
        for (const auto& rep : reports)
            for (const auto& r : rep.records)
                out << rep.matrix_id << "," << rep.rows << "," << rep.cols << "," << rep.nnz << ","
                    << r.vector_height << "," << to_string(r.precision) << "," << r.n_cols << ","
                    << r.mma_count << "," << r.zero_fill << "," << r.data_access_bytes << ","
                    << r.transactions << "," << r.footprint_me << "," << r.footprint_sr << "\n";
        return out.str();
    }

    nlohmann::ordered_json root = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        nlohmann::ordered_json recs = nlohmann::ordered_json::array();
        for (const auto& r : rep.records)
            recs.push_back({{"vector_height", r.vector_height},
                            {"precision", to_string(r.precision)},
                            {"n_cols", r.n_cols},
                            {"mma_count", r.mma_count},
                            {"zero_fill", r.zero_fill},
                            {"nonzero_count", r.nonzero_count},
                            {"access_bytes", r.data_access_bytes},
                            {"transactions", r.transactions},
                            {"footprint_me", r.footprint_me},
                            {"footprint_sr", r.footprint_sr}});
        root.push_back({{"matrix_id", rep.matrix_id},
                        {"rows", rep.rows},
                        {"cols", rep.cols},
                        {"nnz", rep.nnz},
                        {"records", std::move(recs)}});
    }
    return root.dump(2) + "\n";
}

inline std::vector<CostReport> reports_from_json(const std::string& text) {
    const auto root = nlohmann::json::parse(text);
    std::vector<CostReport> reports;
    for (const auto& rep : root) {
        CostReport r;
        r.matrix_id = rep.at("matrix_id").get<std::string>();
        r.rows = rep.at("rows").get<std::size_t>();
        r.cols = rep.at("cols").get<std::size_t>();
        r.nnz = rep.at("nnz").get<std::size_t>();
        for (const auto& rec : rep.at("records")) {
            ConfigRecord c;
            c.vector_height = rec.at("vector_height").get<std::size_t>();
            c.precision = precision_from_string(rec.at("precision").get<std::string>());
            c.n_cols = rec.at("n_cols").get<std::size_t>();
            c.mma_count = rec.at("mma_count").get<std::size_t>();
            c.zero_fill = rec.at("zero_fill").get<std::size_t>();
            c.nonzero_count = rec.at("nonzero_count").get<std::size_t>();
            c.data_access_bytes = rec.at("access_bytes").get<std::size_t>();
            c.transactions = rec.at("transactions").get<std::size_t>();
            c.footprint_me = rec.at("footprint_me").get<std::size_t>();
            c.footprint_sr = rec.at("footprint_sr").get<std::size_t>();
            r.records.push_back(c);
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace tcsparse
