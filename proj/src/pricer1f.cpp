#include "tsq/pricer1f.hpp"

#include <cmath>

#include "tsq/errors.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/tridiagonal.hpp"

namespace tsq {

double vasicek_B(double kappa, double tau) {
    if (!(kappa > 0.0)) throw InvalidInput("vasicek_B: kappa must be positive");
    if (!(tau >= 0.0)) throw InvalidInput("vasicek_B: tau must be non-negative");
    return -std::expm1(-kappa * tau) / kappa;
}

double vasicek_ln_A(const VasicekParams& p, double tau) {
    p.validate();
    const double B = vasicek_B(p.kappa, tau);
    const double r_inf = p.theta - p.lambda_bar / p.kappa - p.sigma * p.sigma / (2.0 * p.kappa * p.kappa);
    return (B - tau) * r_inf - p.sigma * p.sigma * B * B / (4.0 * p.kappa);
}

double vasicek_price_tau(const VasicekParams& p, double tau, double r) {
    return std::exp(vasicek_ln_A(p, tau) - vasicek_B(p.kappa, tau) * r);
}

double vasicek_price(const VasicekParams& p, double t, double r) {
    if (!(t <= p.T)) throw InvalidInput("vasicek_price: t must not exceed maturity");
    return vasicek_price_tau(p, p.T - t, r);
}

TermStructure term_structure(const std::function<double(double)>& price_at_tau,
                             const Eigen::ArrayXd& maturities) {
    TermStructure ts;
    ts.maturities = maturities;
    ts.prices.resize(maturities.size());
    ts.yields.resize(maturities.size());
    for (Eigen::Index i = 0; i < maturities.size(); ++i) {
        if (!(maturities[i] > 0.0) || (i > 0 && !(maturities[i] > maturities[i - 1])))
            throw InvalidInput("term_structure: maturities must be positive and increasing");
        ts.prices[i] = price_at_tau(maturities[i]);
        ts.yields[i] = yield_from_price(ts.prices[i], maturities[i]);
    }
    return ts;
}

double PriceSurface1F::price(double t, double r) const {
    if (t < t_grid_[0] - 1e-12 || t > T_ + 1e-12)
        throw OutOfGrid("PriceSurface1F: t outside the solved range");
    if (r < r_grid_[0] - 1e-12 || r > r_grid_[r_grid_.size() - 1] + 1e-12)
        throw OutOfGrid("PriceSurface1F: r outside the solved range");
    const Eigen::Index j = locate(t_grid_, t);
    const double w = (t - t_grid_[j]) / (t_grid_[j + 1] - t_grid_[j]);
    const CubicStencil s = cubic_stencil(r_grid_, r);
    double lo = 0.0, hi = 0.0;
    for (int a = 0; a < 4; ++a) {
        lo += s.w[static_cast<std::size_t>(a)] * values_(s.i0 + a, j);
        hi += s.w[static_cast<std::size_t>(a)] * values_(s.i0 + a, j + 1);
    }
    return (1.0 - w) * lo + w * hi;
}

PriceSurface1F solve_1f_pde(const Coefficients1F& coef, double r_min, double r_max, double T,
                            const Grid1F& grid) {
    if (!(r_max > r_min)) throw InvalidInput("solve_1f_pde: empty r-domain");
    if (!(T > 0.0)) throw InvalidInput("solve_1f_pde: maturity must be positive");
    const int n_r = grid.n_r;
    const int n_t = grid.n_t > 0 ? grid.n_t : std::max(200, static_cast<int>(std::ceil(50.0 * T)));
    if (n_r < 8 || n_t < 4) throw InvalidInput("solve_1f_pde: grid too small");

    PriceSurface1F s;
    s.T_ = T;
    s.weight_ = grid.weight;
    s.r_grid_ = Eigen::ArrayXd::LinSpaced(n_r + 1, r_min, r_max);
    s.t_grid_ = Eigen::ArrayXd::LinSpaced(n_t + 1, 0.0, T);
    s.values_.resize(n_r + 1, n_t + 1);
    s.values_.col(n_t).setOnes();

    const double h = (r_max - r_min) / n_r;
    const double dt = T / n_t;
    const Eigen::Index n = n_r + 1;

    // spatial operator L P = conv P_r + (sigma^2/2) P_rr - r P at time t;
    // rows: [lower, diag, upper] plus a possible third entry in the first and
    // last row from one-sided stencils
    Eigen::ArrayXd lo(n), di(n), up(n);
    double first_extra = 0.0, last_extra = 0.0;
    auto assemble = [&](double t) {
        first_extra = last_extra = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = s.r_grid_[i];
            const double sg = coef.sigma(t, r);
            const double v = sg * sg;
            if (!(v >= 0.0)) throw NegativeVariance("solve_1f_pde: sigma^2 < 0 on the grid");
            const double conv = coef.mu(t, r) - coef.risk_premium(t, r);
            if (i == 0) {
                // one-sided convection; one-sided curvature where sigma > 0
                lo[i] = 0.0;
                di[i] = -conv / h - r;
                up[i] = conv / h;
                if (v > 0.0) {
                    const double d = 0.5 * v / (h * h);
                    di[i] += d;
                    up[i] += -2.0 * d;
                    first_extra = d;
                }
            } else if (i == n - 1) {
                // far field: zero curvature, upwind convection
                lo[i] = -conv / h;
                di[i] = conv / h - r;
                up[i] = 0.0;
            } else {
                const double d = 0.5 * v / (h * h);
                lo[i] = d - conv / (2.0 * h);
                di[i] = -2.0 * d - r;
                up[i] = d + conv / (2.0 * h);
            }
        }
    };

    Eigen::ArrayXd lhs_lo(n), lhs_di(n), lhs_up(n), rhs(n);
    Eigen::ArrayXd p = Eigen::ArrayXd::Ones(n);
    for (int k = 0; k < n_t; ++k) {
        const double t_new = T - (k + 1) * dt;
        const double t_old = T - k * dt;
        const double theta =
            k < grid.startup_implicit_steps ? 1.0 : grid.weight;
        // explicit part
        if (theta < 1.0) {
            assemble(t_old);
            const double c = (1.0 - theta) * dt;
            for (Eigen::Index i = 0; i < n; ++i) {
                double acc = p[i] + c * di[i] * p[i];
                if (i > 0) acc += c * lo[i] * p[i - 1];
                if (i + 1 < n) acc += c * up[i] * p[i + 1];
                if (i == 0 && first_extra != 0.0) acc += c * first_extra * p[2];
                if (i == n - 1 && last_extra != 0.0) acc += c * last_extra * p[n - 3];
                rhs[i] = acc;
            }
        } else {
            rhs = p;
        }
        // implicit part
        assemble(t_new);
        const double c = theta * dt;
        lhs_lo = -c * lo;
        lhs_di = 1.0 - c * di;
        lhs_up = -c * up;
        solve_tridiagonal_with_corners(lhs_lo, lhs_di, lhs_up, -c * first_extra,
                                       -c * last_extra, rhs);
        p = rhs;
        s.values_.col(n_t - 1 - k) = p;
    }

    if (grid.richardson_tol) {
        Grid1F fine = grid;
        fine.n_r = grid.n_r * 2;
        fine.n_t = n_t * 2;
        fine.richardson_tol.reset();
        PriceSurface1F f = solve_1f_pde(coef, r_min, r_max, T, fine);
        double err = 0.0;
        for (Eigen::Index i = 0; i < s.r_grid_.size(); ++i)
            err = std::max(err, std::fabs(s.values_(i, 0) - f.values_(2 * i, 0)));
        s.richardson_error_ = err;
        if (err > *grid.richardson_tol)
            throw GridTooCoarse("solve_1f_pde: Richardson estimate " + std::to_string(err) +
                                " exceeds tolerance");
    }
    return s;
}

double vasicek_r_hi(const VasicekParams& p) {
    const double sd = p.sigma / std::sqrt(2.0 * p.kappa);
    return p.theta + std::max({10.0 * sd, 5.0 * p.sigma * std::sqrt(p.T), 0.1});
}

double vasicek_r_lo(const VasicekParams& p) {
    const double sd = p.sigma / std::sqrt(2.0 * p.kappa);
    return std::min(0.0, p.theta) - std::max({10.0 * sd, 5.0 * p.sigma * std::sqrt(p.T), 0.05});
}

double ckls_r_hi(const CKLSParams& p) {
    const double theta_eff = p.b < 0.0 ? -p.a / p.b : std::max(0.05, p.a * p.T);
    const double vol = p.sigma * std::pow(std::max(theta_eff, 1e-4), p.gamma);
    const double sd = p.b < 0.0 ? vol / std::sqrt(-2.0 * p.b) : vol * std::sqrt(p.T);
    return theta_eff + std::max(10.0 * sd, 0.1);
}

PriceSurface1F solve_vasicek_pde(const VasicekParams& p, const Grid1F& grid) {
    p.validate();
    Coefficients1F c;
    c.mu = [p](double, double r) { return p.kappa * (p.theta - r); };
    c.sigma = [p](double, double) { return p.sigma; };
    // the Vasicek PDE carries the risk adjustment as a bare -lambda_bar
    c.risk_premium = [p](double, double) { return p.lambda_bar; };
    return solve_1f_pde(c, vasicek_r_lo(p), vasicek_r_hi(p), p.T, grid);
}

PriceSurface1F solve_ckls_pde(const CKLSParams& p, const Grid1F& grid) {
    p.validate();
    Coefficients1F c;
    c.mu = [p](double, double r) { return p.a + p.b * r; };
    c.sigma = [p](double, double r) { return p.sigma * std::pow(std::max(r, 0.0), p.gamma); };
    c.risk_premium = [p](double, double r) {
        return p.lambda_bar * p.sigma * std::pow(std::max(r, 0.0), p.gamma);
    };
    double r_lo = 0.0;
    if (p.gamma == 0.0) {
        // Gaussian rates: guard the domain below zero
        const double sd = p.b < 0.0 ? p.sigma / std::sqrt(-2.0 * p.b) : p.sigma * std::sqrt(p.T);
        r_lo = -std::max(10.0 * sd, 0.05);
    }
    return solve_1f_pde(c, r_lo, ckls_r_hi(p), p.T, grid);
}

}  // namespace tsq
