#pragma once

#include <cstdint>
#include <vector>

#include "tcsparse/matrix.hpp"

namespace tcsparse {

/// Vector-window decomposition of a sparse matrix: window w covers rows
/// [w*v, (w+1)*v) and lists the columns holding at least one stored entry
/// in those rows, in ascending order. Groups of up to k such columns form
/// one TC block.
struct WindowPartition {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t vector_height = 0;
    std::size_t k = 0;
    std::vector<std::vector<std::uint32_t>> windows;

    std::size_t num_windows() const { return windows.size(); }

    std::size_t total_vectors() const {
        std::size_t n = 0;
        for (const auto& w : windows) n += w.size();
        return n;
    }

    /// Σ_w ceil(count_w / k): TC blocks over all windows.
    std::size_t num_blocks() const {
        std::size_t n = 0;
        for (const auto& w : windows) n += (w.size() + k - 1) / k;
        return n;
    }

    /// Σ_w ceil(count_w / k) * k: vector count after zero-vector padding.
    std::size_t padded_vectors() const { return num_blocks() * k; }
};

inline WindowPartition partition_windows(const CsrMatrix& m, std::size_t vector_height,
                                         std::size_t k) {
    if (vector_height != 8 && vector_height != 16)
        throw ArgumentError("vector height must be 8 or 16");
    if (k != 4 && k != 8) throw ArgumentError("k must be 4 or 8");

    WindowPartition part;
    part.rows = m.rows;
    part.cols = m.cols;
    part.vector_height = vector_height;
    part.k = k;
    const std::size_t num_windows = (m.rows + vector_height - 1) / vector_height;
    part.windows.resize(num_windows);

    std::vector<std::uint32_t> merged;
    for (std::size_t w = 0; w < num_windows; ++w) {
        merged.clear();
        const std::size_t row_end = std::min(m.rows, (w + 1) * vector_height);
        for (std::size_t r = w * vector_height; r < row_end; ++r)
            merged.insert(merged.end(), m.col_idx.begin() + m.row_ptr[r],
                          m.col_idx.begin() + m.row_ptr[r + 1]);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        part.windows[w] = merged;
    }
    return part;
}

}  // namespace tcsparse
