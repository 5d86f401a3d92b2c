#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "tcsparse/mebcrs.hpp"

namespace tcsparse {

inline constexpr char kContainerMagic[4] = {'M', 'E', 'B', 'C'};
inline constexpr std::uint32_t kContainerVersion = 1;

namespace detail {

// The container is little-endian by definition; this writer/reader only
// targets little-endian hosts.
static_assert(std::endian::native == std::endian::little);

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw FormatError("container truncated");
    return v;
}

template <typename T>
void put_array(std::ostream& out, const std::vector<T>& v) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
std::vector<T> get_array(std::istream& in) {
    const auto n = get<std::uint32_t>(in);
    std::vector<T> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!in) throw FormatError("container array truncated");
    return v;
}

}  // namespace detail

inline void write_mebcrs(std::ostream& out, const MeBcrsMatrix& m) {
    out.write(kContainerMagic, 4);
    detail::put<std::uint32_t>(out, kContainerVersion);
    detail::put<std::uint64_t>(out, m.rows);
    detail::put<std::uint64_t>(out, m.cols);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.vector_height));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.k));
    detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(m.precision));
    detail::put_array(out, m.row_pointers);
    detail::put_array(out, m.column_indices);
    detail::put_array(out, m.values);
}

inline MeBcrsMatrix read_mebcrs(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kContainerMagic, 4) != 0)
        throw FormatError("bad container magic");
    const auto version = detail::get<std::uint32_t>(in);
    if (version != kContainerVersion)
        throw FormatError("unsupported container version " + std::to_string(version));

    MeBcrsMatrix m;
    m.rows = detail::get<std::uint64_t>(in);
    m.cols = detail::get<std::uint64_t>(in);
    m.vector_height = detail::get<std::uint32_t>(in);
    m.k = detail::get<std::uint32_t>(in);
    const auto p = detail::get<std::uint8_t>(in);
    if (p > 1) throw FormatError("bad precision tag");
    m.precision = static_cast<Precision>(p);
    m.row_pointers = detail::get_array<std::uint32_t>(in);
    m.column_indices = detail::get_array<std::uint32_t>(in);
    m.values = detail::get_array<float>(in);
    m.validate();
    return m;
}

inline nlohmann::json mebcrs_debug_json(const MeBcrsMatrix& m) {
    return {{"rows", m.rows},
            {"cols", m.cols},
            {"vector_height", m.vector_height},
            {"k", m.k},
            {"precision", to_string(m.precision)},
            {"row_pointers", m.row_pointers},
            {"column_indices", m.column_indices},
            {"values", m.values}};
}

}  // namespace tcsparse
