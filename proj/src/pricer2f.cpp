#include "tsq/pricer2f.hpp"

#include <algorithm>
#include <cmath>

#include "tsq/errors.hpp"
#include "tsq/grids.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/pricer1f.hpp"
#include "tsq/tridiagonal.hpp"

namespace tsq {

double BondSurface2F::B(double tau) const { return vasicek_B(model_.rate.kappa, tau); }

double BondSurface2F::A_at(double t, double y) const {
    if (t < -1e-12 || t > maturity() + 1e-12)
        throw OutOfGrid("BondSurface2F: t outside [0, T]");
    if (y < y_grid_[0] - 1e-12 || y > y_max() + 1e-12)
        throw OutOfGrid("BondSurface2F: y outside the solved grid");
    const Eigen::Index j = locate(t_grid_, t);
    const double w = (t - t_grid_[j]) / (t_grid_[j + 1] - t_grid_[j]);
    const CubicStencil s = cubic_stencil(y_grid_, y);
    double lo = 0.0, hi = 0.0;
    for (int a = 0; a < 4; ++a) {
        lo += s.w[static_cast<std::size_t>(a)] * A_(s.i0 + a, j);
        hi += s.w[static_cast<std::size_t>(a)] * A_(s.i0 + a, j + 1);
    }
    return (1.0 - w) * lo + w * hi;
}

double BondSurface2F::price(double t, double r, double y) const {
    return A_at(t, y) * std::exp(-B(maturity() - t) * r);
}

BondSurface2F solve_A_pde(const TwoFactorModel& model, const StationaryDensity& density,
                          const Grid2F& grid) {
    model.validate();
    if (!density.hypothesis_report().pass)
        throw HypothesisAViolated("solve_A_pde: density violates hypothesis (A)");
    const double T = model.rate.T;
    const double kappa = model.rate.kappa;
    const double theta = model.rate.theta;
    const double lambda = model.rate.lambda;
    const double lambda_tilde = model.vol.lambda_tilde;
    const double w2 = model.vol.omega * model.vol.omega;
    const DriftFunction& alpha = model.vol.drift;

    const int n_t = grid.n_t > 0 ? grid.n_t : std::max(2000, static_cast<int>(std::ceil(200.0 * T)));
    const int n_y = grid.n_y;
    if (n_y < 16 || n_t < 8) throw InvalidInput("solve_A_pde: grid too small");

    // mass-based truncation with safety factor; never narrower than the
    // density's own support so averaging can always integrate against it
    const double y_max =
        std::max(grid.y_max_safety * density.quantile(1.0 - grid.y_max_mass), density.y_max());
    const double mean = density.moment(1);
    const double sd = std::sqrt(std::max(density.moment(2) - mean * mean, 1e-300));

    BondSurface2F s;
    s.model_ = model;
    s.y_grid_ = graded_grid(y_max, n_y, mean, sd);
    s.t_grid_ = Eigen::ArrayXd::LinSpaced(n_t + 1, 0.0, T);
    s.B_.resize(n_t + 1);
    for (int j = 0; j <= n_t; ++j) s.B_[j] = vasicek_B(kappa, T - s.t_grid_[j]);
    s.A_.resize(n_y + 1, n_t + 1);
    s.A_.col(n_t).setOnes();

    const Eigen::Index n = n_y + 1;
    const Eigen::ArrayXd& y = s.y_grid_;

    // t-independent convection/diffusion stencil rows; reaction -c(s,y) added
    // per step. Row i covers (lower, diag, upper) plus the one-sided extras.
    Eigen::ArrayXd conv(n), diff(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        conv[i] = alpha(y[i]) - lambda_tilde * y[i];
        diff[i] = 0.5 * w2 * y[i];
    }
    Eigen::ArrayXd op_lo(n), op_di(n), op_up(n);
    double op_first_extra = 0.0, op_last_extra = 0.0;
    {
        // y = 0: degenerate diffusion vanishes; 2nd-order one-sided convection
        const double h1 = y[1] - y[0], h2 = y[2] - y[1];
        op_lo[0] = 0.0;
        op_di[0] = conv[0] * (-(2.0 * h1 + h2) / (h1 * (h1 + h2)));
        op_up[0] = conv[0] * ((h1 + h2) / (h1 * h2));
        op_first_extra = conv[0] * (-h1 / (h2 * (h1 + h2)));
        // interior: non-uniform central differences
        for (Eigen::Index i = 1; i + 1 < n; ++i) {
            const double hm = y[i] - y[i - 1], hp = y[i + 1] - y[i];
            const double d1m = -hp / (hm * (hm + hp));
            const double d1c = (hp - hm) / (hm * hp);
            const double d1p = hm / (hp * (hm + hp));
            const double d2m = 2.0 / (hm * (hm + hp));
            const double d2c = -2.0 / (hm * hp);
            const double d2p = 2.0 / (hp * (hm + hp));
            op_lo[i] = conv[i] * d1m + diff[i] * d2m;
            op_di[i] = conv[i] * d1c + diff[i] * d2c;
            op_up[i] = conv[i] * d1p + diff[i] * d2p;
        }
        // y = y_max: zero curvature, 2nd-order one-sided convection
        const double g1 = y[n - 1] - y[n - 2], g2 = y[n - 2] - y[n - 3];
        op_up[n - 1] = 0.0;
        op_di[n - 1] = conv[n - 1] * ((2.0 * g1 + g2) / (g1 * (g1 + g2)));
        op_lo[n - 1] = conv[n - 1] * (-(g1 + g2) / (g1 * g2));
        op_last_extra = conv[n - 1] * (g1 / (g2 * (g1 + g2)));
    }

    auto reaction = [&](double s_time) {
        // c(s,y) = B(s) (kappa theta - lambda y - y B(s)/2)
        const double B = vasicek_B(kappa, s_time);
        return Eigen::ArrayXd(B * (kappa * theta - lambda * y - 0.5 * B * y));
    };

    const double ds = T / n_t;
    Eigen::ArrayXd a = Eigen::ArrayXd::Ones(n);
    Eigen::ArrayXd lhs_lo(n), lhs_di(n), lhs_up(n), rhs(n);
    for (int k = 0; k < n_t; ++k) {
        const double s_old = k * ds;
        const double s_new = (k + 1) * ds;
        const double th = k < grid.startup_implicit_steps ? 1.0 : grid.weight;
        if (th < 1.0) {
            const Eigen::ArrayXd c_old = reaction(s_old);
            const double w = (1.0 - th) * ds;
            for (Eigen::Index i = 0; i < n; ++i) {
                double acc = a[i] + w * (op_di[i] - c_old[i]) * a[i];
                if (i > 0) acc += w * op_lo[i] * a[i - 1];
                if (i + 1 < n) acc += w * op_up[i] * a[i + 1];
                if (i == 0) acc += w * op_first_extra * a[2];
                if (i == n - 1) acc += w * op_last_extra * a[n - 3];
                rhs[i] = acc;
            }
        } else {
            rhs = a;
        }
        const Eigen::ArrayXd c_new = reaction(s_new);
        const double w = th * ds;
        lhs_lo = -w * op_lo;
        lhs_di = 1.0 - w * (op_di - c_new);
        lhs_up = -w * op_up;
        solve_tridiagonal_with_corners(lhs_lo, lhs_di, lhs_up, -w * op_first_extra,
                                       -w * op_last_extra, rhs);
        a = rhs;
        s.A_.col(n_t - 1 - k) = a;
    }

    // empirical monotonicity-in-y report
    int monotone_cols = 0;
    for (int j = 0; j < n_t; ++j) {
        bool mono = true;
        for (Eigen::Index i = 0; i + 1 < n && mono; ++i)
            if (s.A_(i + 1, j) > s.A_(i, j) + 1e-12) mono = false;
        if (mono) ++monotone_cols;
    }
    s.monotone_fraction_ = n_t > 0 ? static_cast<double>(monotone_cols) / n_t : 1.0;

    if (grid.richardson_tol) {
        Grid2F fine = grid;
        fine.n_y = n_y * 2;
        fine.n_t = n_t * 2;
        fine.richardson_tol.reset();
        const BondSurface2F f2 = solve_A_pde(model, density, fine);
        double err = 0.0;
        for (Eigen::Index i = 0; i < s.y_grid_.size(); ++i)
            err = std::max(err, std::fabs(s.A_(i, 0) - f2.A_at(0.0, s.y_grid_[i])));
        s.richardson_error_ = err;
        if (err > *grid.richardson_tol)
            throw GridTooCoarse("solve_A_pde: Richardson estimate " + std::to_string(err) +
                                " exceeds tolerance");
    }
    return s;
}

PdeResidualReport verify_pi_pde(const BondSurface2F& surface, int r_samples, int t_samples,
                                int y_samples) {
    const TwoFactorModel& m = surface.model();
    const Eigen::ArrayXd& yg = surface.y_grid();
    const Eigen::ArrayXd& tg = surface.t_grid();
    const Eigen::MatrixXd& A = surface.A();
    const double T = surface.maturity();
    const double dt = tg[1] - tg[0];
    const double w2 = m.vol.omega * m.vol.omega;

    PdeResidualReport rep;
    rep.n_y = static_cast<int>(yg.size()) - 1;
    rep.n_t = static_cast<int>(tg.size()) - 1;

    const double r_lo = 0.0, r_hi = std::max(0.12, 2.0 * m.rate.theta);
    const double hr = (r_hi - r_lo) / 64.0;

    auto pi = [&](Eigen::Index j, Eigen::Index i, double r) {
        return A(i, j) * std::exp(-vasicek_B(m.rate.kappa, T - tg[j]) * r);
    };

    double max_res = 0.0, sum_res = 0.0;
    int count = 0;
    for (int a = 1; a <= t_samples; ++a) {
        // sample a fixed interior time window; the first steps after the
        // terminal condition use fully implicit smoothing and are first-order
        const double frac = 0.05 + 0.85 * static_cast<double>(a - 1) / std::max(1, t_samples - 1);
        const Eigen::Index j = std::clamp<Eigen::Index>(
            static_cast<Eigen::Index>(std::lround(frac * (tg.size() - 1))), 1, tg.size() - 2);
        for (int b = 1; b <= y_samples; ++b) {
            const Eigen::Index i =
                1 + static_cast<Eigen::Index>((yg.size() - 3) * static_cast<double>(b - 1) /
                                              std::max(1, y_samples - 1));
            const double y = yg[i];
            const double hm = yg[i] - yg[i - 1], hp = yg[i + 1] - yg[i];
            for (int c = 0; c < r_samples; ++c) {
                const double r = r_lo + (r_hi - r_lo) * (c + 0.5) / r_samples;
                const double p0 = pi(j, i, r);
                const double p_t = (pi(j + 1, i, r) - pi(j - 1, i, r)) / (2.0 * dt);
                const double p_r = (pi(j, i, r + hr) - pi(j, i, r - hr)) / (2.0 * hr);
                const double p_rr =
                    (pi(j, i, r + hr) - 2.0 * p0 + pi(j, i, r - hr)) / (hr * hr);
                const double pm = pi(j, i - 1, r), pp = pi(j, i + 1, r);
                const double p_y = (-hp / (hm * (hm + hp))) * pm +
                                   ((hp - hm) / (hm * hp)) * p0 +
                                   (hm / (hp * (hm + hp))) * pp;
                const double p_yy = 2.0 * (pm / (hm * (hm + hp)) - p0 / (hm * hp) +
                                           pp / (hp * (hm + hp)));
                const double res =
                    p_t + (m.rate.kappa * (m.rate.theta - r) - m.rate.lambda * y) * p_r +
                    (m.vol.drift(y) - m.vol.lambda_tilde * y) * p_y + 0.5 * y * p_rr +
                    0.5 * w2 * y * p_yy - r * p0;
                max_res = std::max(max_res, std::fabs(res));
                sum_res += std::fabs(res);
                ++count;
            }
        }
    }
    rep.max_residual = max_res;
    rep.mean_residual = count > 0 ? sum_res / count : 0.0;
    rep.n_points = count;
    return rep;
}

}  // namespace tsq
