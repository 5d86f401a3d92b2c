#pragma once

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "tcsparse/errors.hpp"

namespace tcsparse {

/// Compressed sparse row matrix, the canonical in-memory form.
///
/// Column indices are strictly ascending within each row. Explicit zeros are
/// tolerated and occupy a position like any other stored entry.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> row_ptr{0};  // length rows+1
    std::vector<std::uint32_t> col_idx;     // length nnz
    std::vector<float> values;              // length nnz

    std::size_t nnz() const { return col_idx.size(); }

    bool operator==(const CsrMatrix& other) const = default;

    void validate() const {
        if (row_ptr.size() != rows + 1)
            throw FormatError("row_ptr length must be rows+1");
        if (row_ptr.front() != 0 || row_ptr.back() != col_idx.size())
            throw FormatError("row_ptr endpoints inconsistent with nnz");
        if (col_idx.size() != values.size())
            throw FormatError("col_idx and values lengths differ");
        for (std::size_t r = 0; r < rows; ++r) {
            if (row_ptr[r] > row_ptr[r + 1])
                throw FormatError("row_ptr must be nondecreasing");
            for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
                if (col_idx[p] >= cols)
                    throw FormatError("column index out of range");
                if (p > row_ptr[r] && col_idx[p - 1] >= col_idx[p])
                    throw FormatError("column indices must be strictly ascending within a row");
            }
        }
    }
};

/// Row-major dense matrix in working precision.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;  // length rows*cols

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, float fill = 0.0f)
        : rows(r), cols(c), data(r * c, fill) {}

    float& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    float at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool operator==(const DenseMatrix& other) const = default;
};

inline DenseMatrix to_dense(const CsrMatrix& m) {
    DenseMatrix d(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p)
            d.at(r, m.col_idx[p]) = m.values[p];
    return d;
}

inline CsrMatrix csr_from_dense(const DenseMatrix& d) {
    CsrMatrix m;
    m.rows = d.rows;
    m.cols = d.cols;
    m.row_ptr.assign(1, 0);
    for (std::size_t r = 0; r < d.rows; ++r) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            if (d.at(r, c) != 0.0f) {
                m.col_idx.push_back(static_cast<std::uint32_t>(c));
                m.values.push_back(d.at(r, c));
            }
        }
        m.row_ptr.push_back(static_cast<std::uint32_t>(m.col_idx.size()));
    }
    return m;
}

/// One triplet of a coordinate-form matrix (0-based indices).
struct Coord {
    std::uint32_t row;
    std::uint32_t col;
    float value;
};

/// Builds CSR from unsorted coordinates; duplicate positions are summed.
inline CsrMatrix csr_from_coords(std::size_t rows, std::size_t cols, std::vector<Coord> coords) {
    for (const auto& c : coords) {
        if (c.row >= rows || c.col >= cols)
            throw ArgumentError("coordinate out of range");
    }
    std::sort(coords.begin(), coords.end(), [](const Coord& a, const Coord& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });

    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(rows + 1, 0);
    std::size_t i = 0;
    while (i < coords.size()) {
        std::size_t j = i;
        float sum = 0.0f;
        while (j < coords.size() && coords[j].row == coords[i].row && coords[j].col == coords[i].col) {
            sum += coords[j].value;
            ++j;
        }
        m.col_idx.push_back(coords[i].col);
        m.values.push_back(sum);
        m.row_ptr[coords[i].row + 1]++;
        i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

/// Canonical textual form used by golden tests: one CSV line each for
/// row_ptr, col_idx and values.
inline std::string csr_to_csv(const CsrMatrix& m) {
    std::ostringstream out;
    out << "dims," << m.rows << "," << m.cols << "\n";
    auto join = [&out](const char* name, const auto& v) {
        out << name;
        for (const auto& x : v) out << "," << x;
        out << "\n";
    };
    join("rowptr", m.row_ptr);
    join("colidx", m.col_idx);
    out.precision(std::numeric_limits<float>::max_digits10);
    join("values", m.values);
    return out.str();
}

}  // namespace tcsparse
