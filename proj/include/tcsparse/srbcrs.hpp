#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tcsparse/mebcrs.hpp"

namespace tcsparse {

/// Column index marking a padded zero vector.
inline constexpr std::uint32_t kPaddingSentinel = std::numeric_limits<std::uint32_t>::max();

/// Zero-vector padded baseline: every window is widened to a multiple of k
/// vectors so all blocks have width exactly k. The pointer array stores a
/// (begin, end) pair per window instead of shared CSR-style boundaries.
struct SrBcrsMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t vector_height = 8;
    std::size_t k = 8;
    Precision precision = Precision::fp16;
    std::vector<std::uint32_t> row_pointer_pairs;  // 2 per window
    std::vector<std::uint32_t> column_indices;     // sentinel for padded vectors
    std::vector<float> values;                     // every block is 8 x k

    std::size_t num_windows() const { return row_pointer_pairs.size() / 2; }

    std::size_t window_vector_count(std::size_t w) const {
        return row_pointer_pairs[2 * w + 1] - row_pointer_pairs[2 * w];
    }

    std::size_t window_num_blocks(std::size_t w) const { return window_vector_count(w) / k; }

    std::size_t value_offset(std::size_t w, std::size_t b) const {
        return vector_height * (row_pointer_pairs[2 * w] + b * k);
    }
};

inline SrBcrsMatrix encode_srbcrs(const CsrMatrix& m, Precision p) {
    const MeBcrsMatrix me = encode_mebcrs(m, p);
    SrBcrsMatrix out;
    out.rows = me.rows;
    out.cols = me.cols;
    out.vector_height = me.vector_height;
    out.k = me.k;
    out.precision = p;

    for (std::size_t w = 0; w < me.num_windows(); ++w) {
        const std::size_t count = me.window_vector_count(w);
        const std::size_t padded = me.window_num_blocks(w) * me.k;
        out.row_pointer_pairs.push_back(static_cast<std::uint32_t>(out.column_indices.size()));
        for (std::size_t j = 0; j < padded; ++j)
            out.column_indices.push_back(j < count ? me.column_indices[me.row_pointers[w] + j]
                                                   : kPaddingSentinel);
        out.row_pointer_pairs.push_back(static_cast<std::uint32_t>(out.column_indices.size()));

        for (std::size_t b = 0; b * me.k < padded; ++b) {
            const std::size_t width = me.block_width(w, b);
            const std::size_t me_base = me.value_offset(w, b);
            const std::size_t out_base = out.values.size();
            out.values.resize(out_base + out.vector_height * out.k, 0.0f);
            for (std::size_t r = 0; r < out.vector_height; ++r)
                for (std::size_t j = 0; j < width; ++j)
                    out.values[out_base + r * out.k + j] = me.values[me_base + r * width + j];
        }
    }
    return out;
}

/// Round-trip helper for tests; sentinel columns decode to nothing.
inline CsrMatrix decode_srbcrs(const SrBcrsMatrix& m) {
    std::vector<Coord> coords;
    for (std::size_t w = 0; w < m.num_windows(); ++w) {
        for (std::size_t b = 0; b < m.window_num_blocks(w); ++b) {
            const std::size_t base = m.value_offset(w, b);
            for (std::size_t r = 0; r < m.vector_height; ++r) {
                const std::size_t row = w * m.vector_height + r;
                if (row >= m.rows) break;
                for (std::size_t j = 0; j < m.k; ++j) {
                    const std::uint32_t col = m.column_indices[m.row_pointer_pairs[2 * w] + b * m.k + j];
                    const float v = m.values[base + r * m.k + j];
                    if (col != kPaddingSentinel && v != 0.0f)
                        coords.push_back({static_cast<std::uint32_t>(row), col, v});
                }
            }
        }
    }
    return csr_from_coords(m.rows, m.cols, std::move(coords));
}

}  // namespace tcsparse
