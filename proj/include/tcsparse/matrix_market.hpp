#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tcsparse/matrix.hpp"

namespace tcsparse {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace detail

/// Parses MatrixMarket `coordinate` input (real/integer/pattern; general or
/// symmetric). Symmetric inputs are expanded to full storage, pattern entries
/// get value 1.0 and duplicate coordinates are summed.
inline CsrMatrix parse_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input, MatrixMarket banner missing");
    ++lineno;
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") throw ParseError("MatrixMarket banner missing", lineno);
    object = detail::lower(object);
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (object != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
    if (format != "coordinate") throw ParseError("only coordinate format is supported", lineno);
    if (field != "real" && field != "integer" && field != "pattern")
        throw ParseError("unsupported field '" + field + "'", lineno);
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    // Size line: first non-comment, non-blank line after the banner.
    long long rows = 0, cols = 0, declared = 0;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError("size line missing");
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> declared) || rows < 0 || cols < 0 || declared < 0)
            throw ParseError("malformed size line", lineno);
        break;
    }

    std::vector<Coord> coords;
    coords.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
    long long seen = 0;
    while (seen < declared) {
        if (!std::getline(in, line))
            throw ParseError("unexpected end of file: expected " + std::to_string(declared) +
                             " entries, got " + std::to_string(seen));
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream entry(line);
        long long i = 0, j = 0;
        if (!(entry >> i >> j)) throw ParseError("malformed entry", lineno);
        double v = 1.0;
        if (!pattern && !(entry >> v)) throw ParseError("entry value missing", lineno);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError("coordinate (" + std::to_string(i) + "," + std::to_string(j) +
                             ") out of range", lineno);
        const auto r = static_cast<std::uint32_t>(i - 1);
        const auto c = static_cast<std::uint32_t>(j - 1);
        const auto val = static_cast<float>(v);
        coords.push_back({r, c, val});
        if (symmetric && r != c) coords.push_back({c, r, val});
        ++seen;
    }

    return csr_from_coords(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                           std::move(coords));
}

/// Writes coordinate/real/general output that parse_matrix_market maps back
/// to the identical CsrMatrix.
inline void write_matrix_market(std::ostream& out, const CsrMatrix& m) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
    out.precision(std::numeric_limits<float>::max_digits10);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p)
            out << r + 1 << " " << m.col_idx[p] + 1 << " " << m.values[p] << "\n";
}

}  // namespace tcsparse
