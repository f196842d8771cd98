#pragma once

// Grid builders. The dispersion grids cluster nodes where the solvers need
// them: near the degenerate boundary y=0 and near the stationary mean.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace tsq {

inline Eigen::ArrayXd uniform_grid(double lo, double hi, int n_cells) {
    if (n_cells < 1 || !(hi > lo)) throw std::invalid_argument("uniform_grid: bad arguments");
    return Eigen::ArrayXd::LinSpaced(n_cells + 1, lo, hi);
}

// Node-density construction: spacing ~ 1/w(y) where the weight w boosts
// resolution near 0 (exponential bump) and near `focus` (Gaussian bump).
// The mapping is smooth, so non-uniform central differences stay 2nd order.
inline Eigen::ArrayXd graded_grid(double y_max, int n_cells, double focus, double focus_width,
                                  double near_zero_boost = 8.0, double focus_boost = 3.0) {
    if (n_cells < 8 || !(y_max > 0.0)) throw std::invalid_argument("graded_grid: bad arguments");
    const int fine = 40 * n_cells;
    const double zero_scale = std::max(1e-3 * y_max, 0.25 * focus);
    Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(fine + 1, 0.0, y_max);
    Eigen::ArrayXd w = 1.0 + near_zero_boost * (-y / zero_scale).exp();
    if (focus_boost > 0.0 && focus_width > 0.0)
        w += focus_boost * (-0.5 * ((y - focus) / focus_width).square()).exp();
    // cumulative weight, then invert at equally spaced levels
    Eigen::ArrayXd cum(fine + 1);
    cum[0] = 0.0;
    const double h = y_max / fine;
    for (int i = 1; i <= fine; ++i) cum[i] = cum[i - 1] + 0.5 * (w[i - 1] + w[i]) * h;
    Eigen::ArrayXd grid(n_cells + 1);
    grid[0] = 0.0;
    grid[n_cells] = y_max;
    int j = 0;
    for (int k = 1; k < n_cells; ++k) {
        const double level = cum[fine] * k / n_cells;
        while (j < fine && cum[j + 1] < level) ++j;
        const double frac = (level - cum[j]) / (cum[j + 1] - cum[j]);
        grid[k] = y[j] + frac * h;
    }
    return grid;
}

}  // namespace tsq
