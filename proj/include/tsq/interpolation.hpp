#pragma once

// Piecewise interpolation on sorted grids: linear, and 4-point Lagrange cubic
// with precomputable stencils for repeated evaluation at fixed abscissae.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cassert>

#include "tsq/errors.hpp"

namespace tsq {

// index of the left node of the interval containing x (clamped to range)
inline Eigen::Index locate(const Eigen::ArrayXd& grid, double x) {
    const auto* begin = grid.data();
    const auto* end = grid.data() + grid.size();
    auto it = std::upper_bound(begin, end, x);
    Eigen::Index i = std::max<Eigen::Index>(1, it - begin) - 1;
    return std::min(i, grid.size() - 2);
}

inline double interp_linear(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& values, double x) {
    assert(grid.size() == values.size() && grid.size() >= 2);
    const Eigen::Index i = locate(grid, x);
    const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return (1.0 - t) * values[i] + t * values[i + 1];
}

// 4-point Lagrange stencil around x; degrades to the available points near
// the ends of the grid.
struct CubicStencil {
    Eigen::Index i0 = 0;
    std::array<double, 4> w{};
};

inline CubicStencil cubic_stencil(const Eigen::ArrayXd& grid, double x) {
    assert(grid.size() >= 2);
    CubicStencil s;
    if (grid.size() < 4) {
        const Eigen::Index i = locate(grid, x);
        const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
        s.i0 = i;
        s.w = {1.0 - t, t, 0.0, 0.0};
        return s;
    }
    Eigen::Index i = locate(grid, x);
    s.i0 = std::clamp<Eigen::Index>(i - 1, 0, grid.size() - 4);
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (x - grid[s.i0 + b]) / (grid[s.i0 + a] - grid[s.i0 + b]);
        }
        s.w[static_cast<std::size_t>(a)] = w;
    }
    return s;
}

inline double apply_stencil(const CubicStencil& s, const Eigen::ArrayXd& values) {
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) acc += s.w[static_cast<std::size_t>(a)] * values[s.i0 + a];
    return acc;
}

inline double interp_cubic(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& values, double x) {
    return apply_stencil(cubic_stencil(grid, x), values);
}

}  // namespace tsq
