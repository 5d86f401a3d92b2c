#pragma once

#include <cstdint>
#include <vector>

#include "tcsparse/matrix.hpp"
#include "tcsparse/mma.hpp"
#include "tcsparse/partition.hpp"

namespace tcsparse {

/// Windowed block format storing only nonzero vectors, no zero-vector
/// padding. Three arrays describe the sparse TC blocks of each 8-row window:
///
///   row_pointers   per-window start into column_indices (CSR-style, with a
///                  final sentinel entry)
///   column_indices one entry per stored nonzero vector
///   values         block-by-block, each block row-major with height 8 and
///                  width = number of vectors actually present (<= k)
///
/// Only the last block of a window can be narrower than k; its width is the
/// residue ((count-1) mod k) + 1.
struct MeBcrsMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t vector_height = 8;
    std::size_t k = 8;
    Precision precision = Precision::fp16;
    std::vector<std::uint32_t> row_pointers;
    std::vector<std::uint32_t> column_indices;
    std::vector<float> values;

    std::size_t num_windows() const {
        return row_pointers.empty() ? 0 : row_pointers.size() - 1;
    }

    std::size_t window_vector_count(std::size_t w) const {
        return row_pointers[w + 1] - row_pointers[w];
    }

    std::size_t window_num_blocks(std::size_t w) const {
        return (window_vector_count(w) + k - 1) / k;
    }

    /// Width of block b within window w; equals k except possibly the last.
    std::size_t block_width(std::size_t w, std::size_t b) const {
        const std::size_t count = window_vector_count(w);
        const std::size_t remaining = count - b * k;
        return remaining < k ? remaining : k;
    }

    /// Offset of block b of window w into `values`. Blocks are packed in
    /// window order, so the window base is just 8 * row_pointers[w].
    std::size_t value_offset(std::size_t w, std::size_t b) const {
        return vector_height * (row_pointers[w] + b * k);
    }

    void validate() const {
        const std::size_t expected_windows = (rows + vector_height - 1) / vector_height;
        if (row_pointers.size() != expected_windows + 1)
            throw FormatError("row_pointers length must be numWindows+1");
        if (!row_pointers.empty() && row_pointers.front() != 0)
            throw FormatError("row_pointers must start at 0");
        for (std::size_t w = 0; w + 1 < row_pointers.size(); ++w)
            if (row_pointers[w] > row_pointers[w + 1])
                throw FormatError("row_pointers must be nondecreasing");
        if (!row_pointers.empty() && row_pointers.back() != column_indices.size())
            throw FormatError("row_pointers end must equal stored vector count");
        if (values.size() != vector_height * column_indices.size())
            throw FormatError("values length must be vectorHeight * stored vectors");
        for (std::size_t w = 0; w < num_windows(); ++w)
            for (std::size_t p = row_pointers[w]; p < row_pointers[w + 1]; ++p) {
                if (column_indices[p] >= cols) throw FormatError("column index out of range");
                if (p > row_pointers[w] && column_indices[p - 1] >= column_indices[p])
                    throw FormatError("column indices must ascend within a window");
            }
    }
};

inline MeBcrsMatrix encode_mebcrs(const CsrMatrix& m, Precision p) {
    const MmaShape shape = shape_for(p);
    MeBcrsMatrix out;
    out.rows = m.rows;
    out.cols = m.cols;
    out.vector_height = shape.n;
    out.k = shape.k;
    out.precision = p;

    const WindowPartition part = partition_windows(m, out.vector_height, out.k);
    out.row_pointers.assign(1, 0);
    for (const auto& win : part.windows) {
        out.column_indices.insert(out.column_indices.end(), win.begin(), win.end());
        out.row_pointers.push_back(static_cast<std::uint32_t>(out.column_indices.size()));
    }

    out.values.assign(out.vector_height * out.column_indices.size(), 0.0f);
    const DenseMatrix dense = to_dense(m);
    for (std::size_t w = 0; w < out.num_windows(); ++w) {
        for (std::size_t b = 0; b < out.window_num_blocks(w); ++b) {
            const std::size_t width = out.block_width(w, b);
            const std::size_t base = out.value_offset(w, b);
            for (std::size_t r = 0; r < out.vector_height; ++r) {
                const std::size_t row = w * out.vector_height + r;
                if (row >= m.rows) break;
                for (std::size_t j = 0; j < width; ++j) {
                    const std::uint32_t col =
                        out.column_indices[out.row_pointers[w] + b * out.k + j];
                    out.values[base + r * width + j] = dense.at(row, col);
                }
            }
        }
    }
    return out;
}

/// Exact inverse of encode_mebcrs on positions and values. Zeros inside
/// stored blocks are representational fill and are dropped.
inline CsrMatrix decode_mebcrs(const MeBcrsMatrix& m) {
    m.validate();
    std::vector<Coord> coords;
    for (std::size_t w = 0; w < m.num_windows(); ++w) {
        for (std::size_t b = 0; b < m.window_num_blocks(w); ++b) {
            const std::size_t width = m.block_width(w, b);
            const std::size_t base = m.value_offset(w, b);
            for (std::size_t r = 0; r < m.vector_height; ++r) {
                const std::size_t row = w * m.vector_height + r;
                if (row >= m.rows) break;
                for (std::size_t j = 0; j < width; ++j) {
                    const float v = m.values[base + r * width + j];
                    if (v != 0.0f)
                        coords.push_back({static_cast<std::uint32_t>(row),
                                          m.column_indices[m.row_pointers[w] + b * m.k + j], v});
                }
            }
        }
    }
    return csr_from_coords(m.rows, m.cols, std::move(coords));
}

}  // namespace tcsparse
