#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tcsparse/fragment.hpp"
#include "tcsparse/mebcrs.hpp"
#include "tcsparse/spmm.hpp"

namespace tcsparse {

/// SDDMM inputs. `a` is M x K row-major. The dense B operand is K x N in
/// column-major layout, held here as its row-major transpose `b_t` (N x K);
/// b_t row j is exactly column j of B, contiguous as the kernel expects.
struct SddmmOperands {
    MeBcrsMatrix mask;  // values define the sampled positions; magnitudes ignored
    DenseMatrix a;
    DenseMatrix b_t;
};

/// Sub-block shapes the 8x16 output block is split into: two 8x8 for FP16,
/// four 8x4 for TF32 (matching the SpMM sparse-block shapes).
enum class SubBlockKind { b8x8, b8x4 };

/// Element offset into the sparse block storage where a lane's first
/// accumulator register (c0) lands.
inline std::size_t sddmm_output_offsets(std::size_t lane, SubBlockKind kind) {
    if (lane >= kWarpSize) throw ArgumentError("lane id out of range");
    if (kind == SubBlockKind::b8x8) return (lane % 4) * 2 * 8 + lane / 4;
    const std::size_t g = lane > 15 ? 1 : 0;
    return (lane % 4) * 2 * 4 + lane / 4 + g * 32 - g * 4;
}

struct SubBlockWrite {
    std::uint32_t lane;
    std::uint32_t slot;   // accumulator register c0..c3
    std::size_t offset;   // element offset into the 128-entry block storage
    float value;
};

/// Splits a 16x8 accumulator (the transposed 8x16 output block, given in
/// fragment layout across 32 lanes) into storage-order sub-block writes:
/// c1 follows c0 one storage row down, c2/c3 repeat the pair 64 elements
/// later in the second half of the block.
inline std::vector<SubBlockWrite> split_output(const Tile& ct, Precision p) {
    detail::require_dims(ct, 16, 8, "accumulator c^T");
    const SubBlockKind kind = p == Precision::fp16 ? SubBlockKind::b8x8 : SubBlockKind::b8x4;
    const std::size_t row_step = p == Precision::fp16 ? 8 : 4;
    const WarpTileLayout layout = fragment_layout(shape_for(p), Operand::accum_c, p);

    std::vector<SubBlockWrite> writes;
    writes.reserve(kWarpSize * 4);
    for (std::uint32_t lane = 0; lane < kWarpSize; ++lane) {
        const std::size_t base = sddmm_output_offsets(lane, kind);
        const std::size_t offsets[4] = {base, base + row_step, base + 64, base + 64 + row_step};
        for (std::uint32_t slot = 0; slot < 4; ++slot) {
            const auto [r, c] = layout.coords[lane][slot];
            writes.push_back({lane, slot, offsets[slot], ct.at(r, c)});
        }
    }
    return writes;
}

/// Storage offset -> (row, vector) position within the logical 8x16 block.
inline std::pair<std::size_t, std::size_t> sddmm_block_position(std::size_t offset, Precision p) {
    const std::size_t width = p == Precision::fp16 ? 8 : 4;
    const std::size_t sub = offset / (8 * width);
    const std::size_t rem = offset % (8 * width);
    return {rem / width, sub * width + rem % width};
}

struct SddmmResult {
    MeBcrsMatrix output;
    KernelCounters counters;
};

/// Sampled dense-dense product: out[i][j] = sum_l A[i,l]*B[l,j] at every
/// nonzero mask position. Each group of up to 16 consecutive nonzero vectors
/// of an 8-row mask window forms one 8x16 output block, accumulated over K
/// in steps of k with the sampled B columns as the left MMA operand and the
/// sampled A rows as the right one. The transposed accumulator is scattered
/// through split_output; positions outside the mask are discarded.
inline SddmmResult sddmm(const SddmmOperands& ops, const KernelConfig& cfg) {
    const MeBcrsMatrix& mask = ops.mask;
    if (cfg.precision != mask.precision)
        throw ArgumentError("config precision must match the encoded mask");
    if (ops.a.rows != mask.rows) throw ShapeError("A rows must equal mask rows");
    if (ops.b_t.rows != mask.cols) throw ShapeError("B cols must equal mask cols");
    if (ops.b_t.cols != ops.a.cols) throw ShapeError("inner dimensions of A and B must agree");

    const Precision p = cfg.precision;
    const MmaShape shape = shape_for(p);
    const std::size_t k = shape.k;
    const std::size_t inner = ops.a.cols;
    const std::size_t k_tiles = (inner + k - 1) / k;

    SddmmResult res;
    res.output = mask;
    std::fill(res.output.values.begin(), res.output.values.end(), 0.0f);

    for (std::size_t w = 0; w < mask.num_windows(); ++w) {
        const std::size_t count = mask.window_vector_count(w);
        for (std::size_t g = 0; g * 16 < count; ++g) {
            const std::size_t group = std::min<std::size_t>(16, count - g * 16);

            Tile acc_t(16, 8);
            for (std::size_t kk = 0; kk < k_tiles; ++kk) {
                Tile left(16, k);   // sampled B columns, transposed
                Tile right(k, 8);   // sampled A rows, transposed
                for (std::size_t v = 0; v < group; ++v) {
                    const std::uint32_t col =
                        mask.column_indices[mask.row_pointers[w] + g * 16 + v];
                    for (std::size_t l = 0; l < k && kk * k + l < inner; ++l)
                        left.at(v, l) = ops.b_t.at(col, kk * k + l);
                }
                for (std::size_t r = 0; r < 8 && w * 8 + r < mask.rows; ++r)
                    for (std::size_t l = 0; l < k && kk * k + l < inner; ++l)
                        right.at(l, r) = ops.a.at(w * 8 + r, kk * k + l);
                acc_t = mma(left, right, acc_t, shape, p);
                res.counters.mma_invocations++;
            }

            for (const SubBlockWrite& wr : split_output(acc_t, p)) {
                const auto [r, v_local] = sddmm_block_position(wr.offset, p);
                if (v_local >= group) continue;
                const std::size_t v_idx = g * 16 + v_local;
                const std::size_t b = v_idx / k;
                const std::size_t width = mask.block_width(w, b);
                const std::size_t pos = mask.value_offset(w, b) + r * width + v_idx % k;
                if (mask.values[pos] != 0.0f) res.output.values[pos] = wr.value;
            }
        }
    }
    return res;
}

}  // namespace tcsparse
