#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tcsparse/access_pattern.hpp"
#include "tcsparse/fragment.hpp"
#include "tcsparse/mebcrs.hpp"
#include "tcsparse/mma.hpp"
#include "tcsparse/partition.hpp"
#include "tcsparse/srbcrs.hpp"

namespace tcsparse {

struct KernelConfig {
    Precision precision = Precision::fp16;
    std::size_t vector_height = 8;
    ThreadMapping mapping = ThreadMapping::coalesced;
};

struct KernelCounters {
    std::size_t mma_invocations = 0;
    std::size_t transactions = 0;
    std::size_t transaction_bytes = 0;
    std::size_t useful_bytes = 0;
};

struct SpmmResult {
    DenseMatrix output;
    KernelCounters counters;
};

enum class ResidueClass { in_window, out_of_window };

/// Residue rule for the last TC block of a window: residue = ((count-1) mod
/// k) + 1 vectors are real, offsets at or past it index into the next window
/// and must contribute zeros.
inline ResidueClass handle_residue(std::size_t window_vector_count, std::size_t k,
                                   std::size_t column_offset) {
    if (window_vector_count == 0) return ResidueClass::out_of_window;
    const std::size_t residue = ((window_vector_count - 1) % k) + 1;
    return column_offset < residue ? ResidueClass::in_window : ResidueClass::out_of_window;
}

namespace detail {

inline constexpr std::int64_t kAbsentRow = -1;

// Block access shared by the ME and SR executors: fills the 8 x k sparse
// operand (zero-padded past the residue) and the dense-row gather list.
struct MeBlockSource {
    const MeBcrsMatrix& m;

    std::size_t num_windows() const { return m.num_windows(); }
    std::size_t window_num_blocks(std::size_t w) const { return m.window_num_blocks(w); }

    void fill_block(std::size_t w, std::size_t b, Tile& a,
                    std::span<std::int64_t> gather) const {
        const std::size_t width = m.block_width(w, b);
        const std::size_t base = m.value_offset(w, b);
        const bool last = b + 1 == m.window_num_blocks(w);
        for (std::size_t j = 0; j < m.k; ++j) {
            const bool present =
                j < width &&
                (!last || handle_residue(m.window_vector_count(w), m.k, j) == ResidueClass::in_window);
            gather[j] = present
                            ? static_cast<std::int64_t>(m.column_indices[m.row_pointers[w] + b * m.k + j])
                            : kAbsentRow;
            for (std::size_t r = 0; r < m.vector_height; ++r)
                a.at(r, j) = present ? m.values[base + r * width + j] : 0.0f;
        }
    }
};

struct SrBlockSource {
    const SrBcrsMatrix& m;

    std::size_t num_windows() const { return m.num_windows(); }
    std::size_t window_num_blocks(std::size_t w) const { return m.window_num_blocks(w); }

    void fill_block(std::size_t w, std::size_t b, Tile& a,
                    std::span<std::int64_t> gather) const {
        const std::size_t base = m.value_offset(w, b);
        for (std::size_t j = 0; j < m.k; ++j) {
            const std::uint32_t col = m.column_indices[m.row_pointer_pairs[2 * w] + b * m.k + j];
            gather[j] = col == kPaddingSentinel ? kAbsentRow : static_cast<std::int64_t>(col);
            for (std::size_t r = 0; r < m.vector_height; ++r)
                a.at(r, j) = m.values[base + r * m.k + j];
        }
    }
};

inline DenseMatrix pad_cols(const DenseMatrix& d, std::size_t padded_cols) {
    if (padded_cols == d.cols) return d;
    DenseMatrix out(d.rows, padded_cols);
    for (std::size_t i = 0; i < d.rows; ++i)
        for (std::size_t j = 0; j < d.cols; ++j) out.at(i, j) = d.at(i, j);
    return out;
}

template <typename Source>
SpmmResult spmm_swapped(const Source& src, std::size_t rows, std::size_t cols, std::size_t k,
                        Precision precision, const DenseMatrix& dense, const KernelConfig& cfg) {
    if (cfg.vector_height != 8) throw ArgumentError("swap-and-transpose path requires vector height 8");
    if (cfg.precision != precision)
        throw ArgumentError("config precision must match the encoded matrix");
    if (cols != dense.rows) throw ShapeError("sparse cols must equal dense rows");

    const MmaShape shape = shape_for(precision);
    const std::size_t n_tiles = (dense.cols + shape.m - 1) / shape.m;
    const std::size_t padded_n = n_tiles * shape.m;
    const DenseMatrix b = pad_cols(dense, padded_n);
    const std::size_t vw = value_width(precision);
    const std::uint64_t row_stride = padded_n * vw;

    const WarpTileLayout acc_layout = fragment_layout(shape, Operand::accum_c, precision);

    SpmmResult res;
    res.output = DenseMatrix(rows, dense.cols);
    Tile block_a(8, k);
    std::vector<std::int64_t> gather(k);
    std::vector<std::int64_t> row_addrs(k);

    for (std::size_t w = 0; w < src.num_windows(); ++w) {
        const std::size_t nblocks = src.window_num_blocks(w);
        if (nblocks == 0) continue;
        for (std::size_t t = 0; t < n_tiles; ++t) {
            Tile acc(8, shape.m);
            for (std::size_t blk = 0; blk < nblocks; ++blk) {
                src.fill_block(w, blk, block_a, gather);

                Tile block_b(k, shape.m);
                for (std::size_t l = 0; l < k; ++l) {
                    row_addrs[l] = gather[l] == kAbsentRow
                                       ? kAbsentRow
                                       : static_cast<std::int64_t>(gather[l] * row_stride +
                                                                   t * shape.m * vw);
                    if (gather[l] == kAbsentRow) continue;
                    for (std::size_t c = 0; c < shape.m; ++c)
                        block_b.at(l, c) = b.at(static_cast<std::size_t>(gather[l]), t * shape.m + c);
                }

                acc = swap_transpose_mma(block_a, block_b, acc, shape, precision);
                res.counters.mma_invocations++;

                const AccessPattern ap = map_threads_rows(row_addrs, cfg.mapping, vw);
                const TransactionSummary ts = count_transactions(ap);
                res.counters.transactions += ts.transactions;
                res.counters.transaction_bytes += ts.bytes;
                res.counters.useful_bytes += ap.useful_bytes();
            }

            // Write back through the accumulator fragment layout: lane
            // registers hold acc^T, transposed positions land in the output.
            for (std::size_t lane = 0; lane < kWarpSize; ++lane)
                for (const auto& [rt, ct] : acc_layout.coords[lane]) {
                    const std::size_t row = w * 8 + ct;
                    const std::size_t col = t * shape.m + rt;
                    if (row < rows && col < dense.cols) res.output.at(row, col) = acc.at(ct, rt);
                }
        }
    }
    return res;
}

}  // namespace detail

/// SpMM over the compact format with the 8x1 swap-and-transpose strategy.
/// The dense operand is zero-padded to a multiple of 16 columns internally
/// and the padding trimmed from the returned matrix.
inline SpmmResult spmm(const MeBcrsMatrix& sparse, const DenseMatrix& dense,
                       const KernelConfig& cfg) {
    return detail::spmm_swapped(detail::MeBlockSource{sparse}, sparse.rows, sparse.cols, sparse.k,
                                sparse.precision, dense, cfg);
}

/// Same kernel over the zero-padded baseline format; padded vectors are
/// numerically inert, so this matches the compact-format result bit for bit.
inline SpmmResult spmm(const SrBcrsMatrix& sparse, const DenseMatrix& dense,
                       const KernelConfig& cfg) {
    return detail::spmm_swapped(detail::SrBlockSource{sparse}, sparse.rows, sparse.cols, sparse.k,
                                sparse.precision, dense, cfg);
}

/// Baseline 16x1 path: sparse TC blocks are the 16 x k *left* operand of a
/// plain (non-swapped) MMA, dense tiles are k x 8. Same numerical contract
/// as spmm, different invocation count.
inline SpmmResult spmm_baseline16(const CsrMatrix& sparse, const DenseMatrix& dense,
                                  const KernelConfig& cfg) {
    if (cfg.vector_height != 16) throw ArgumentError("baseline path requires vector height 16");
    if (sparse.cols != dense.rows) throw ShapeError("sparse cols must equal dense rows");

    const Precision precision = cfg.precision;
    const MmaShape shape = shape_for(precision);
    const std::size_t k = shape.k;
    const WindowPartition part = partition_windows(sparse, 16, k);
    const DenseMatrix sparse_dense = to_dense(sparse);

    const std::size_t n_tiles = (dense.cols + shape.n - 1) / shape.n;
    const std::size_t padded_n = n_tiles * shape.n;
    const DenseMatrix b = detail::pad_cols(dense, padded_n);
    const std::size_t vw = value_width(precision);
    const std::uint64_t row_stride = padded_n * vw;

    const WarpTileLayout acc_layout = fragment_layout(shape, Operand::accum_c, precision);

    SpmmResult res;
    res.output = DenseMatrix(sparse.rows, dense.cols);

    for (std::size_t w = 0; w < part.num_windows(); ++w) {
        const auto& win = part.windows[w];
        if (win.empty()) continue;
        const std::size_t nblocks = (win.size() + k - 1) / k;
        for (std::size_t t = 0; t < n_tiles; ++t) {
            Tile acc(shape.m, shape.n);
            for (std::size_t blk = 0; blk < nblocks; ++blk) {
                Tile block_a(shape.m, k);
                Tile block_b(k, shape.n);
                AccessPattern ap;
                auto& accesses = ap.steps.emplace_back();
                for (std::size_t j = 0; j < k; ++j) {
                    const std::size_t v = blk * k + j;
                    if (v >= win.size()) continue;
                    const std::uint32_t col = win[v];
                    for (std::size_t r = 0; r < shape.m; ++r) {
                        const std::size_t row = w * 16 + r;
                        if (row < sparse.rows) block_a.at(r, j) = sparse_dense.at(row, col);
                    }
                    const std::uint64_t addr = col * row_stride + t * shape.n * vw;
                    for (std::size_t c = 0; c < shape.n; ++c)
                        block_b.at(j, c) = b.at(col, t * shape.n + c);
                    // natural (unshuffled) gather: each row as 16-byte chunks
                    for (std::size_t off = 0; off < shape.n * vw; off += 16)
                        accesses.push_back({static_cast<std::uint32_t>(j), addr + off,
                                            static_cast<std::uint32_t>(std::min<std::size_t>(
                                                16, shape.n * vw - off))});
                }
                acc = mma(block_a, block_b, acc, shape, precision);
                res.counters.mma_invocations++;
                const TransactionSummary ts = count_transactions(ap);
                res.counters.transactions += ts.transactions;
                res.counters.transaction_bytes += ts.bytes;
                res.counters.useful_bytes += ap.useful_bytes();
            }

            for (std::size_t lane = 0; lane < kWarpSize; ++lane)
                for (const auto& [r, c] : acc_layout.coords[lane]) {
                    const std::size_t row = w * 16 + r;
                    const std::size_t col = t * shape.n + c;
                    if (row < sparse.rows && col < dense.cols) res.output.at(row, col) = acc.at(r, c);
                }
        }
    }
    return res;
}

}  // namespace tcsparse
