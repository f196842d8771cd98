#pragma once

// Thomas solve for tridiagonal systems plus the one extra trick the PDE
// solvers need: boundary rows carrying a third entry (second-order one-sided
// stencils) are pre-eliminated against their neighbour row.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

#include "tsq/errors.hpp"

namespace tsq {

// In-place Thomas algorithm. lower[0] and upper[n-1] are ignored.
template <typename Scalar>
void solve_tridiagonal(Eigen::Array<Scalar, Eigen::Dynamic, 1>& lower,
                       Eigen::Array<Scalar, Eigen::Dynamic, 1>& diag,
                       Eigen::Array<Scalar, Eigen::Dynamic, 1>& upper,
                       Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs) {
    const Eigen::Index n = diag.size();
    assert(lower.size() == n && upper.size() == n && rhs.size() == n);
    for (Eigen::Index i = 1; i < n; ++i) {
        const Scalar m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// Tridiagonal system whose first row may reach column 2 and whose last row
// may reach column n-3 (entries `first_extra` / `last_extra`). Eliminates the
// extras using the adjacent interior rows, then runs Thomas.
template <typename Scalar>
void solve_tridiagonal_with_corners(Eigen::Array<Scalar, Eigen::Dynamic, 1>& lower,
                                    Eigen::Array<Scalar, Eigen::Dynamic, 1>& diag,
                                    Eigen::Array<Scalar, Eigen::Dynamic, 1>& upper,
                                    Scalar first_extra, Scalar last_extra,
                                    Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs) {
    const Eigen::Index n = diag.size();
    if (first_extra != Scalar(0)) {
        assert(n >= 3);
        const Scalar m = first_extra / upper[1];
        diag[0] -= m * lower[1];
        upper[0] -= m * diag[1];
        rhs[0] -= m * rhs[1];
    }
    if (last_extra != Scalar(0)) {
        assert(n >= 3);
        const Scalar m = last_extra / lower[n - 2];
        lower[n - 1] -= m * diag[n - 2];
        diag[n - 1] -= m * upper[n - 2];
        rhs[n - 1] -= m * rhs[n - 2];
    }
    solve_tridiagonal(lower, diag, upper, rhs);
}

}  // namespace tsq
