#include "tsq/no1f.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsq/errors.hpp"
#include "tsq/taylor_engine.hpp"

namespace tsq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SymbolicModel<double> symbolic_model(const TwoFactorModel& m) {
    if (!m.vol.drift.is_polynomial())
        throw NonPolynomialDrift("taylor oracle requires a polynomial drift");
    SymbolicModel<double> s;
    s.kappa = m.rate.kappa;
    s.theta = m.rate.theta;
    s.lambda = m.rate.lambda;
    s.lambda_tilde = m.vol.lambda_tilde;
    s.omega_sq = m.vol.omega * m.vol.omega;
    s.alpha = m.vol.drift.coefficients();
    return s;
}

double average_polynomial(const Polynomial<double>& p, const StationaryDensity& f) {
    double acc = 0.0;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * f.moment(static_cast<int>(k));
    return acc;
}

}  // namespace

double compute_K(const ShortRateParams& rate, double sigma_sq) {
    return rate.kappa * rate.theta - rate.lambda * sigma_sq;
}

double compute_omega_bar_sq(double sigma_sq, double lambda, double lambda_tilde) {
    return sigma_sq * (1.0 - lambda_tilde * lambda);
}

OneFactorCandidate one_factor_candidate(const TwoFactorModel& model, double sigma_sq) {
    OneFactorCandidate c;
    c.K = compute_K(model.rate, sigma_sq);
    c.omega_bar_sq = compute_omega_bar_sq(sigma_sq, model.rate.lambda, model.vol.lambda_tilde);
    c.kappa = model.rate.kappa;
    c.negative_variance = c.omega_bar_sq < 0.0;
    return c;
}

Route1Taylor route1_taylor(const OneFactorCandidate& c, int order) {
    if (order < 1 || order > 4) throw InvalidInput("route1_taylor: order must be 1..4");
    Route1Taylor r;
    r.published.fill(kNaN);
    r.derived.fill(kNaN);
    const double K = c.K, kp = c.kappa, O2 = c.omega_bar_sq;
    const std::array<double, 5> pub = {1.0, 0.0, -K, -K * kp - O2,
                                       3.0 * K * K - 3.0 * O2 * kp - K * kp};
    const std::vector<double> derived = taylor_a_ode(K, O2, kp, order);
    for (int k = 0; k <= order; ++k) {
        r.published[static_cast<std::size_t>(k)] = pub[static_cast<std::size_t>(k)];
        r.derived[static_cast<std::size_t>(k)] = derived[static_cast<std::size_t>(k)];
        const double scale = std::max({1.0, std::fabs(K), std::fabs(O2)});
        if (std::fabs(pub[static_cast<std::size_t>(k)] - derived[static_cast<std::size_t>(k)]) >
            1e-12 * scale)
            r.mismatch = true;  // published order-4 term -K kappa vs derived -K kappa^2
    }
    return r;
}

Route2Taylor route2_taylor(const TwoFactorModel& model, const StationaryDensity& f, int order) {
    if (order < 1 || order > 4) throw InvalidInput("route2_taylor: order must be 1..4");
    Route2Taylor r;
    r.published.fill(kNaN);
    r.oracle.fill(kNaN);

    const double kp = model.rate.kappa;
    const double th = model.rate.theta;
    const double la = model.rate.lambda;
    const double lt = model.vol.lambda_tilde;
    const double w2 = model.vol.omega * model.vol.omega;
    const double s2 = f.moment(1);
    const double d = f.moment(2);
    const double a2avg = f.average([&](double y) {
        const double a = model.vol.drift(y);
        return a * a;
    });

    // published coefficient set with quadrature moments substituted
    r.published[0] = 1.0;
    if (order >= 1) r.published[1] = 0.0;
    if (order >= 2) r.published[2] = -kp * th + la * s2;
    if (order >= 3) r.published[3] = lt * la * s2 - kp * kp * th + kp * la * s2 - s2;
    if (order >= 4)
        r.published[4] =
            3.0 * la * la * d +
            (-6.0 * kp * th * la + kp * kp * la - 3.0 * kp + lt * (kp * la - 1.0 + la * lt)) * s2 +
            3.0 * kp * kp * th * th - kp * kp * kp * th + (2.0 / w2) * lt * la * a2avg;

    if (model.vol.drift.is_polynomial()) {
        r.oracle_available = true;
        const auto polys = taylor_A_polynomials(symbolic_model(model), order);
        for (int k = 0; k <= order; ++k)
            r.oracle[static_cast<std::size_t>(k)] =
                average_polynomial(polys[static_cast<std::size_t>(k)], f);
        for (int k = 0; k <= order; ++k) {
            const double a = r.published[static_cast<std::size_t>(k)];
            const double b = r.oracle[static_cast<std::size_t>(k)];
            if (std::fabs(a - b) > 1e-9 * std::max(1.0, std::fabs(a))) r.mismatch = true;
        }
    }
    return r;
}

std::vector<Polynomial<double>> taylor_A_derivatives(const TwoFactorModel& model, int order) {
    return taylor_A_polynomials(symbolic_model(model), order);
}

NonexistenceResult nonexistence_residual(const TwoFactorModel& model,
                                         const StationaryDensity& f) {
    NonexistenceResult res;
    const double kp = model.rate.kappa;
    const double la = model.rate.lambda;
    const double lt = model.vol.lambda_tilde;
    const double w2 = model.vol.omega * model.vol.omega;
    res.sigma_sq = f.moment(1);
    res.d = f.moment(2);
    res.alpha_sq_avg = f.average([&](double y) {
        const double a = model.vol.drift(y);
        return a * a;
    });
    const double s2 = res.sigma_sq;

    // published condition: sigma^2 (2 kappa lt la + 1 - la lt^2)
    //   = (2/w^2) lt la <alpha^2> + 3 la^2 (d - sigma^4)
    res.residual_published = s2 * (2.0 * kp * lt * la + 1.0 - la * lt * lt) -
                             ((2.0 / w2) * lt * la * res.alpha_sq_avg +
                              3.0 * la * la * (res.d - s2 * s2));

    if (model.vol.drift.is_polynomial()) {
        res.derived_available = true;
        const OneFactorCandidate c = one_factor_candidate(model, s2);
        const auto r1 = taylor_a_ode(c.K, c.omega_bar_sq, c.kappa, 4);
        const auto polys = taylor_A_polynomials(symbolic_model(model), 4);
        const double oracle4 = average_polynomial(polys[4], f);
        res.residual_derived = r1[4] - oracle4;
    } else {
        res.residual_derived = kNaN;
    }

    const double tol = 1e-10 * s2;
    const bool published_fires = std::fabs(res.residual_published) > tol;
    const bool derived_fires =
        res.derived_available && std::fabs(res.residual_derived) > tol;
    res.verdict = published_fires || derived_fires;

    if (la == 0.0) {
        res.annotation = "lambda = 0: published condition reduces to 0 = sigma^2";
        if (res.derived_available && lt == 0.0 && std::fabs(res.residual_derived) <= tol)
            res.annotation +=
                "; re-derived order-4 condition degenerates to 0 = 0 (requires lambda_tilde != 0)";
    }
    return res;
}

TaylorReport build_taylor_report(const TwoFactorModel& model, const StationaryDensity& f) {
    TaylorReport rep;
    rep.sigma_sq = f.moment(1);
    rep.d = f.moment(2);
    rep.alpha_sq_avg = f.average([&](double y) {
        const double a = model.vol.drift(y);
        return a * a;
    });
    rep.candidate = one_factor_candidate(model, rep.sigma_sq);
    rep.route1 = route1_taylor(rep.candidate, 4);
    rep.route2 = route2_taylor(model, f, 4);
    rep.residuals = nonexistence_residual(model, f);
    if (rep.route2.oracle_available) {
        rep.order3_consistent = true;
        for (int k = 1; k <= 3; ++k) {
            const double a = rep.route1.derived[static_cast<std::size_t>(k)];
            const double b = rep.route2.oracle[static_cast<std::size_t>(k)];
            if (std::fabs(a - b) > 1e-8 * std::max(1.0, std::fabs(a)))
                rep.order3_consistent = false;
        }
    }
    return rep;
}

ClosestVasicek closest_vasicek(const TwoFactorModel& model, const StationaryDensity& f,
                               const AveragedPrice& avg) {
    ClosestVasicek out;
    const double s2 = f.moment(1);
    const OneFactorCandidate c = one_factor_candidate(model, s2);
    if (c.negative_variance)
        throw NegativeVariance("closest_vasicek: Omega_bar^2 < 0, no diffusion surrogate");

    out.surrogate.kappa = c.kappa;
    out.surrogate.theta = c.K / c.kappa;  // drift K - kappa r with lambda_bar = 0
    out.surrogate.sigma = std::sqrt(c.omega_bar_sq);
    out.surrogate.lambda_bar = 0.0;
    out.surrogate.T = model.rate.T;

    const double T = model.rate.T;
    const Eigen::ArrayXd& tg = avg.t_grid();
    const double dt = tg[1] - tg[0];
    const Eigen::Index n_t = tg.size() - 1;

    // scan taus snapped to the a(t) grid: log-spaced short end + linear body
    std::vector<Eigen::Index> idx;
    for (int k = 0; k <= 32; ++k) {
        const double tau = 0.01 * std::pow(T / 0.01, k / 32.0);
        const Eigen::Index j = std::clamp<Eigen::Index>(
            static_cast<Eigen::Index>(std::lround(tau / dt)), 1, n_t);
        if (idx.empty() || j != idx.back()) idx.push_back(j);
    }
    for (int k = 1; k <= 40; ++k) {
        const Eigen::Index j = std::clamp<Eigen::Index>(n_t * k / 40, 1, n_t);
        if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());

    const Eigen::ArrayXd r_scan = Eigen::ArrayXd::LinSpaced(13, 0.0, 0.12);
    out.taus.resize(static_cast<Eigen::Index>(idx.size()));
    out.gaps.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t q = 0; q < idx.size(); ++q) {
        const double tau = idx[q] * dt;
        const double a_avg = avg.a()[n_t - idx[q]];
        const double a_sur = std::exp(vasicek_ln_A(out.surrogate, tau));
        const double B = vasicek_B(c.kappa, tau);
        double gap = 0.0;
        for (Eigen::Index ri = 0; ri < r_scan.size(); ++ri)
            gap = std::max(gap, std::fabs(a_avg - a_sur) * std::exp(-B * r_scan[ri]));
        out.taus[static_cast<Eigen::Index>(q)] = tau;
        out.gaps[static_cast<Eigen::Index>(q)] = gap;
        if (gap > out.max_gap) {
            out.max_gap = gap;
            out.tau_at_max = tau;
        }
        if (out.tau_first_gap < 0.0 && gap > 1e-6) out.tau_first_gap = tau;
    }

    // least-squares log-log slope on tau in [0.1, 1]
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (Eigen::Index q = 0; q < out.taus.size(); ++q) {
        const double tau = out.taus[q];
        if (tau < 0.1 - 1e-9 || tau > 1.0 + 1e-9 || !(out.gaps[q] > 0.0)) continue;
        const double x = std::log(tau), y = std::log(out.gaps[q]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    out.loglog_slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : kNaN;
    return out;
}

}  // namespace tsq
