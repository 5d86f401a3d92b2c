#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "tcsparse/errors.hpp"

namespace tcsparse {

/// Storage precision of MMA input operands. Accumulation is always binary32.
enum class Precision : std::uint8_t { fp16 = 0, tf32 = 1 };

constexpr std::size_t value_width(Precision p) {
    return p == Precision::fp16 ? 2 : 4;
}

inline const char* to_string(Precision p) {
    return p == Precision::fp16 ? "fp16" : "tf32";
}

inline Precision precision_from_string(const std::string& s) {
    if (s == "fp16") return Precision::fp16;
    if (s == "tf32") return Precision::tf32;
    throw ArgumentError("unknown precision '" + s + "'");
}

namespace detail {

// Round-to-nearest-even truncation of the low 13 mantissa bits, i.e. from a
// 24-bit to an 11-bit significand. Carry into the exponent field produces the
// correctly rounded power of two (or infinity at the top of the range).
inline std::uint32_t round_mantissa_13(std::uint32_t bits) {
    bits += 0xFFFu + ((bits >> 13) & 1u);
    return bits & ~0x1FFFu;
}

}  // namespace detail

/// Rounds to an 11-bit significand keeping the binary32 exponent range.
inline float round_to_tf32(float x) {
    const auto bits = std::bit_cast<std::uint32_t>(x);
    if ((bits & 0x7F800000u) == 0x7F800000u) return x;  // inf and NaN pass through
    return std::bit_cast<float>(detail::round_mantissa_13(bits));
}

/// Rounds to the nearest IEEE binary16 value and returns it widened back to
/// binary32. Overflow saturates to infinity, subnormals round to multiples
/// of 2^-24, NaN passes through.
inline float round_to_fp16(float x) {
    const auto bits = std::bit_cast<std::uint32_t>(x);
    const std::uint32_t sign = bits & 0x80000000u;
    const std::uint32_t mag = bits & 0x7FFFFFFFu;
    if (mag >= 0x7F800000u) return x;  // inf / NaN
    // 65520 is the midpoint between the largest finite half (65504) and 2^16;
    // ties round up, so everything from it on becomes infinity.
    if (mag >= 0x477FF000u) return std::bit_cast<float>(sign | 0x7F800000u);
    if (mag >= 0x38800000u)  // normal range, |x| >= 2^-14
        return std::bit_cast<float>(sign | detail::round_mantissa_13(mag));
    // Subnormal range: quantize to the half ulp 2^-24. The scaling is an
    // exact exponent shift, so nearbyint performs the only rounding step.
    return std::nearbyintf(x * 0x1p24f) * 0x1p-24f;
}

inline float round_to_precision(float x, Precision p) {
    return p == Precision::fp16 ? round_to_fp16(x) : round_to_tf32(x);
}

}  // namespace tcsparse
