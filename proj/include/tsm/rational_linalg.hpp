#pragma once

// Exact Gaussian elimination over the rationals: row-reduced echelon form and
// nullspace bases.  Matrices here are small and structured (bigraded Laplacian
// blocks), so a dense representation with exact arithmetic is both simple and
// fast.

#include "tsm/rational.hpp"

#include <vector>

namespace tsm {

struct RationalMatrix {
    size_t rows = 0, cols = 0;
    std::vector<std::vector<Rational>> a;  // rows x cols

    RationalMatrix(size_t r, size_t c) : rows(r), cols(c), a(r, std::vector<Rational>(c, Rational(0))) {}
};

// In-place reduction to RREF; returns the pivot column of each nonzero row,
// in order.  Pivot choice is the first nonzero entry scanning down a column,
// which keeps the reduction fully deterministic.
inline std::vector<size_t> rref(RationalMatrix& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t sel = row;
        while (sel < m.rows && m.a[sel][col] == 0) ++sel;
        if (sel == m.rows) continue;
        std::swap(m.a[sel], m.a[row]);
        const Rational piv = m.a[row][col];
        for (size_t j = col; j < m.cols; ++j) m.a[row][j] /= piv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.a[i][col] == 0) continue;
            const Rational f = m.a[i][col];
            for (size_t j = col; j < m.cols; ++j) m.a[i][j] -= f * m.a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Basis of the right nullspace { v : M v = 0 }.  One vector per free column,
// ordered by ascending free-column index; the vector for free column f has
// v[f] = 1 and support only on f and the pivot columns.
inline std::vector<std::vector<Rational>> nullspace(RationalMatrix m) {
    const auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols, Rational(0));
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace tsm
