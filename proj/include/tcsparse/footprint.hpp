#pragma once

#include <cstddef>

#include "tcsparse/mebcrs.hpp"
#include "tcsparse/srbcrs.hpp"

namespace tcsparse {

inline constexpr std::size_t kDefaultIndexWidth = 4;

/// Byte accounting from structural counts alone. The compact format is
/// charged numWindows+1 pointer entries (the final sentinel included), the
/// padded baseline 2 per window.
inline std::size_t footprint_me_bytes(std::size_t num_windows, std::size_t stored_vectors,
                                      std::size_t vector_height, std::size_t index_width,
                                      std::size_t value_width) {
    return (num_windows + 1) * index_width + stored_vectors * index_width +
           stored_vectors * vector_height * value_width;
}

inline std::size_t footprint_sr_bytes(std::size_t num_windows, std::size_t padded_vectors,
                                      std::size_t vector_height, std::size_t index_width,
                                      std::size_t value_width) {
    return 2 * num_windows * index_width + padded_vectors * index_width +
           padded_vectors * vector_height * value_width;
}

inline std::size_t footprint_bytes(const MeBcrsMatrix& m,
                                   std::size_t index_width = kDefaultIndexWidth,
                                   std::size_t value_width = 0) {
    if (value_width == 0) value_width = tcsparse::value_width(m.precision);
    return footprint_me_bytes(m.num_windows(), m.column_indices.size(), m.vector_height,
                              index_width, value_width);
}

inline std::size_t footprint_bytes(const SrBcrsMatrix& m,
                                   std::size_t index_width = kDefaultIndexWidth,
                                   std::size_t value_width = 0) {
    if (value_width == 0) value_width = tcsparse::value_width(m.precision);
    return footprint_sr_bytes(m.num_windows(), m.column_indices.size(), m.vector_height,
                              index_width, value_width);
}

}  // namespace tcsparse
