#pragma once

#include <cstddef>
#include <string>

#include "tcsparse/matrix.hpp"
#include "tcsparse/precision.hpp"

namespace tcsparse {

/// MMA operand tiles are just small dense matrices in working precision.
using Tile = DenseMatrix;

struct MmaShape {
    std::size_t m = 16;
    std::size_t n = 8;
    std::size_t k = 8;

    bool operator==(const MmaShape&) const = default;
};

/// FP16 pairs with m16n8k8, TF32 with m16n8k4.
constexpr MmaShape shape_for(Precision p) {
    return p == Precision::fp16 ? MmaShape{16, 8, 8} : MmaShape{16, 8, 4};
}

inline Tile transpose(const Tile& t) {
    Tile out(t.cols, t.rows);
    for (std::size_t i = 0; i < t.rows; ++i)
        for (std::size_t j = 0; j < t.cols; ++j) out.at(j, i) = t.at(i, j);
    return out;
}

namespace detail {

inline void require_dims(const Tile& t, std::size_t rows, std::size_t cols, const char* name) {
    if (t.rows != rows || t.cols != cols)
        throw ShapeError(std::string(name) + " must be " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(t.rows) + "x" +
                         std::to_string(t.cols));
}

}  // namespace detail

/// Emulated MMA: d = c + a*b with the a/b entries rounded to the operand
/// precision and all products accumulated in binary32.
inline Tile mma(const Tile& a, const Tile& b, const Tile& c, MmaShape shape, Precision p) {
    detail::require_dims(a, shape.m, shape.k, "operand a");
    detail::require_dims(b, shape.k, shape.n, "operand b");
    detail::require_dims(c, shape.m, shape.n, "accumulator c");
    Tile d(shape.m, shape.n);
    for (std::size_t i = 0; i < shape.m; ++i) {
        for (std::size_t j = 0; j < shape.n; ++j) {
            float acc = c.at(i, j);
            for (std::size_t l = 0; l < shape.k; ++l)
                acc += round_to_precision(a.at(i, l), p) * round_to_precision(b.at(l, j), p);
            d.at(i, j) = acc;
        }
    }
    return d;
}

/// Computes acc + blockA*blockB with blockA (n x k) as the *right* operand:
/// the product is evaluated as mma(blockB^T, blockA^T, acc^T) and the result
/// transposed back. This is what lets the sparse operand occupy the 8-wide
/// n dimension instead of the 16-wide m dimension.
inline Tile swap_transpose_mma(const Tile& block_a, const Tile& block_b, const Tile& acc,
                               MmaShape shape, Precision p) {
    detail::require_dims(block_a, shape.n, shape.k, "sparse block A");
    detail::require_dims(block_b, shape.k, shape.m, "dense block B");
    detail::require_dims(acc, shape.n, shape.m, "accumulator");
    return transpose(mma(transpose(block_b), transpose(block_a), transpose(acc), shape, p));
}

}  // namespace tcsparse
