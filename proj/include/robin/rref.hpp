#pragma once
// Gaussian elimination over an exact field F (Q, Q(i), Q(i)(K), ...).

#include <cstddef>
#include <vector>

#include "robin/exact.hpp"

namespace robin {

template <class F>
using ExactMatrix = std::vector<std::vector<F>>;

// Reduced row echelon form in place; drops zero rows; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(ExactMatrix<F>& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && is_zero(rows[piv][col])) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const F inv = F(1) / rows[r][col];
        for (std::size_t c = col; c < ncols; ++c) rows[r][c] = rows[r][c] * inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || is_zero(rows[i][col])) continue;
            const F f = rows[i][col];
            for (std::size_t c = col; c < ncols; ++c) {
                if (!is_zero(rows[r][c])) rows[i][c] = rows[i][c] - f * rows[r][c];
            }
        }
        pivots.push_back(col);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

template <class F>
std::size_t exact_rank(ExactMatrix<F> rows, std::size_t ncols) {
    return rref(rows, ncols).size();
}

// Basis of {x : rows * x = 0}.
template <class F>
ExactMatrix<F> nullspace(ExactMatrix<F> rows, std::size_t ncols) {
    auto piv = rref(rows, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (auto p : piv) is_piv[p] = true;
    ExactMatrix<F> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<F> v(ncols, F(0));
        v[free] = F(1);
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F(0) - rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace robin
