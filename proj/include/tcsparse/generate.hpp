#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tcsparse/matrix.hpp"

namespace tcsparse {

namespace detail {

// Values are drawn from {-4..4}\{0} so that products and short sums stay
// exactly representable after FP16/TF32 rounding and binary32 accumulation.
inline float small_int_value(std::mt19937& gen) {
    const std::uint32_t m = gen() % 8u;
    return static_cast<float>(m < 4 ? static_cast<int>(m) - 4 : static_cast<int>(m) - 3);
}

inline float uniform_real_value(std::mt19937& gen) {
    return static_cast<float>(gen()) * 0x1p-31f - 1.0f;  // [-1, 1)
}

}  // namespace detail

/// Deterministic Bernoulli-per-position sparse generator. Expected nnz is
/// rows*cols*density; density 1 yields a fully dense pattern. Output depends
/// only on the arguments (raw mt19937 draws, no distribution objects).
inline CsrMatrix generate_random_sparse(std::size_t rows, std::size_t cols, double density,
                                        std::uint64_t seed) {
    if (rows == 0 || cols == 0) throw ArgumentError("rows and cols must be >= 1");
    if (!(density > 0.0) || density > 1.0) throw ArgumentError("density must be in (0, 1]");

    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    const auto threshold = static_cast<std::uint64_t>(std::llround(density * 4294967296.0));

    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(1, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (static_cast<std::uint64_t>(gen()) < threshold) {
                m.col_idx.push_back(static_cast<std::uint32_t>(c));
                m.values.push_back(detail::small_int_value(gen));
            }
        }
        m.row_ptr.push_back(static_cast<std::uint32_t>(m.col_idx.size()));
    }
    return m;
}

/// Same pattern scheme with values uniform in [-1, 1); used by the CLI's
/// tolerance-checked real mode.
inline CsrMatrix generate_random_sparse_real(std::size_t rows, std::size_t cols, double density,
                                             std::uint64_t seed) {
    CsrMatrix m = generate_random_sparse(rows, cols, density, seed);
    std::mt19937 gen(static_cast<std::uint32_t>(seed ^ 0x9e3779b9u));
    for (auto& v : m.values) v = detail::uniform_real_value(gen);
    return m;
}

inline DenseMatrix generate_random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    DenseMatrix d(rows, cols);
    for (auto& v : d.data) v = detail::small_int_value(gen);
    return d;
}

inline DenseMatrix generate_random_dense_real(std::size_t rows, std::size_t cols,
                                              std::uint64_t seed) {
    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    DenseMatrix d(rows, cols);
    for (auto& v : d.data) v = detail::uniform_real_value(gen);
    return d;
}

}  // namespace tcsparse
