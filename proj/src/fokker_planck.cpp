#include "tsq/fokker_planck.hpp"

#include <cmath>

#include "tsq/errors.hpp"
#include "tsq/grids.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/quadrature.hpp"
#include "tsq/tridiagonal.hpp"

namespace tsq {

namespace {

// Chang-Cooper weight: delta(p) = 1/p - 1/(e^p - 1), smooth through p = 0.
double cc_delta(double p) {
    if (std::fabs(p) < 1e-4) return 0.5 - p / 12.0 + p * p * p / 720.0;
    return 1.0 / p - 1.0 / std::expm1(p);
}

Eigen::Index cell_of(const EvolutionGrid& grid, double y) {
    const Eigen::Index i = locate(grid.edges, y);
    return std::min(i, grid.centers.size() - 1);
}

}  // namespace

EvolutionGrid make_evolution_grid(double y_max, int n_cells, double focus, double focus_width) {
    if (focus <= 0.0) focus = 0.25 * y_max;
    if (focus_width <= 0.0) focus_width = 0.15 * y_max;
    EvolutionGrid g;
    g.edges = graded_grid(y_max, n_cells, focus, focus_width);
    g.centers = 0.5 * (g.edges.head(n_cells) + g.edges.tail(n_cells));
    g.widths = g.edges.tail(n_cells) - g.edges.head(n_cells);
    return g;
}

Eigen::ArrayXd project_onto_grid(const std::function<double(double)>& f, const EvolutionGrid& grid) {
    const Eigen::Index n = grid.centers.size();
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = gauss_kronrod_15(f, grid.edges[i], grid.edges[i + 1]).value / grid.widths[i];
    return out;
}

Eigen::ArrayXd dirac_approximation(double y0, const EvolutionGrid& grid) {
    if (!(y0 > 0.0)) throw InvalidInput("dirac_approximation: y0 must be positive");
    const Eigen::Index i = cell_of(grid, y0);
    const double w = grid.widths[i];
    const double shape = y0 * y0 / (w * w);
    const double rate = y0 / (w * w);
    auto pdf = [&](double y) {
        if (y <= 0.0) return 0.0;
        const double lg = shape * std::log(rate) + (shape - 1.0) * std::log(y) - rate * y -
                          std::lgamma(shape);
        return lg < -745.0 ? 0.0 : std::exp(lg);
    };
    Eigen::ArrayXd out = project_onto_grid(pdf, grid);
    return out / grid_mass(grid, out);
}

double grid_mass(const EvolutionGrid& grid, const Eigen::ArrayXd& f) {
    return (f * grid.widths).sum();
}

double l1_distance(const EvolutionGrid& grid, const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) {
    return ((f - g).abs() * grid.widths).sum();
}

DensityEvolution evolve_density(const DriftFunction& drift, double omega,
                                const Eigen::ArrayXd& f0, const EvolutionGrid& grid,
                                double horizon, const EvolveOptions& opts) {
    if (!(omega > 0.0)) throw InvalidInput("evolve_density: omega must be positive");
    if (!(horizon > 0.0)) throw InvalidInput("evolve_density: horizon must be positive");
    const Eigen::Index n = grid.centers.size();
    if (f0.size() != n) throw DomainMismatch("evolve_density: f0 does not match the grid");
    if ((f0 < 0.0).any()) throw InvalidInput("evolve_density: f0 must be non-negative");
    const double mass0 = grid_mass(grid, f0);
    if (std::fabs(mass0 - 1.0) > 1e-6)
        throw InvalidInput("evolve_density: f0 must carry unit mass");

    const double w2 = omega * omega;

    // Edge quantities between cells k-1 and k (k = 1..n-1). The fitted
    // advection w_eff = p D/dy uses the exact integral of (alpha - w2/2)/D
    // between the centers, so the discrete stationary profile follows
    // exp(int w/D) exactly at the centers.
    Eigen::ArrayXd coef_left(n), coef_right(n);  // J_k = coef_left f_{k-1} + coef_right f_k
    coef_left[0] = coef_right[0] = 0.0;          // zero-flux boundary (unused slot 0)
    for (Eigen::Index k = 1; k < n; ++k) {
        const double e = grid.edges[k];
        const double dyc = grid.centers[k] - grid.centers[k - 1];
        const double D = 0.5 * w2 * e;
        const double lo = grid.centers[k - 1], hi = grid.centers[k];
        double int_alpha_over_y;
        if (drift.is_polynomial()) {
            int_alpha_over_y =
                drift.alpha0() * std::log(hi / lo) + drift.alpha_hat_antiderivative(lo, hi);
        } else {
            int_alpha_over_y =
                gauss_kronrod_15([&](double y) { return drift(y) / y; }, lo, hi).value;
        }
        const double p = (2.0 / w2) * int_alpha_over_y - std::log(hi / lo);
        const double delta = cc_delta(p);
        const double w_eff = p * D / dyc;
        coef_left[k] = w_eff * (1.0 - delta) + D / dyc;
        coef_right[k] = w_eff * delta - D / dyc;
    }

    double dt = opts.dt > 0.0 ? opts.dt
                              : horizon / std::max(400.0, std::ceil(200.0 * horizon));
    DensityEvolution evo;
    evo.grid = grid;

    const int want_snapshots = std::max(1, opts.snapshots);
    double next_snapshot = horizon / want_snapshots;

    std::vector<double> step_times;
    std::vector<double> masses;
    Eigen::ArrayXd f = f0;
    evo.times.push_back(0.0);
    evo.states.push_back(f);

    double t = 0.0;
    Eigen::ArrayXd lower(n), diag(n), upper(n), rhs(n);
    while (t < horizon - 1e-12 * horizon) {
        const double step = std::min(dt, horizon - t);
        // backward Euler: (V/dt) f^{n+1} - div J^{n+1} = (V/dt) f^n
        for (Eigen::Index i = 0; i < n; ++i) {
            const double vdt = grid.widths[i] / step;
            const double jl_f = i > 0 ? coef_right[i] : 0.0;       // J_i on f_i
            const double jl_l = i > 0 ? coef_left[i] : 0.0;        // J_i on f_{i-1}
            const double jr_f = i + 1 < n ? coef_left[i + 1] : 0.0;   // J_{i+1} on f_i
            const double jr_r = i + 1 < n ? coef_right[i + 1] : 0.0;  // J_{i+1} on f_{i+1}
            lower[i] = -jl_l;
            diag[i] = vdt - jl_f + jr_f;
            upper[i] = jr_r;
            rhs[i] = vdt * f[i];
        }
        solve_tridiagonal(lower, diag, upper, rhs);
        if ((rhs < -1e-12 * rhs.abs().maxCoeff()).any()) {
            dt *= 0.5;
            if (dt < 1e-12)
                throw StepSizeUnderflow("evolve_density: time step fell below 1e-12");
            continue;
        }
        f = rhs.max(0.0);
        t += step;
        step_times.push_back(t);
        masses.push_back(grid_mass(grid, f));
        if (t >= next_snapshot - 1e-12 || t >= horizon - 1e-12 * horizon) {
            evo.times.push_back(t);
            evo.states.push_back(f);
            while (next_snapshot <= t + 1e-12) next_snapshot += horizon / want_snapshots;
        }
    }
    evo.step_times = Eigen::Map<Eigen::ArrayXd>(step_times.data(),
                                                static_cast<Eigen::Index>(step_times.size()));
    evo.mass_history =
        Eigen::Map<Eigen::ArrayXd>(masses.data(), static_cast<Eigen::Index>(masses.size()));
    return evo;
}

}  // namespace tsq
