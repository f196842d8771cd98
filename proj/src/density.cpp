#include "tsq/density.hpp"

#include <algorithm>
#include <cmath>

#include "tsq/errors.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/quadrature.hpp"

namespace tsq {

namespace {

// crude scale of the drift's interesting region, used to seed scans
double drift_scale(const DriftFunction& d) {
    if (d.is_polynomial()) {
        const auto& c = d.coefficients().coeffs();
        const int deg = d.coefficients().degree();
        if (deg >= 1) {
            // magnitude where the leading term balances alpha(0)
            const double lead = std::fabs(c[static_cast<std::size_t>(deg)]);
            if (lead > 0.0 && d.alpha0() > 0.0)
                return std::pow(d.alpha0() / lead, 1.0 / deg);
        }
    }
    return 1.0;
}

}  // namespace

StationaryDensity::StationaryDensity(DriftFunction drift, double omega, double rel_tol)
    : drift_(std::move(drift)), omega_(omega), rel_tol_(rel_tol) {
    if (!(rel_tol_ > 0.0 && rel_tol_ < 1e-2))
        throw InvalidInput("StationaryDensity: rel_tol out of range");
    report_ = validate_hypothesis_A(drift_, omega_);
    if (!report_.pass) throw HypothesisAViolated("stationary density: " + report_.detail);
    exponent_ = report_.feller_ratio - 1.0;

    // tabulated alpha_hat antiderivative for the general (sampled) variant
    if (!drift_.is_polynomial()) {
        const int n = 4096;
        const double hi = 1024.0 * drift_scale(drift_);
        ihat_y_ = Eigen::ArrayXd::LinSpaced(n + 1, 0.0, hi);
        ihat_v_.resize(n + 1);
        ihat_v_[0] = 0.0;
        for (int i = 1; i <= n; ++i)
            ihat_v_[i] = ihat_v_[i - 1] +
                         gauss_kronrod_15([this](double y) { return drift_.alpha_hat(y); },
                                          ihat_y_[i - 1], ihat_y_[i])
                             .value;
    }

    // locate the mode of ln u to anchor the truncation search
    const double scale = drift_scale(drift_);
    double y_peak = scale, g_peak = -1e300;
    for (int i = -60; i <= 40; ++i) {
        const double y = scale * std::pow(10.0, i / 10.0);
        const double g = log_unnormalized(y);
        if (g > g_peak) {
            g_peak = g;
            y_peak = y;
        }
    }

    // truncation: double y_max until the tail beyond it is < 1e-12 of the bulk
    const QuadOptions opt{rel_tol_, 0.0, 8000};
    double y_max = 8.0 * y_peak;
    double bulk = 0.0;
    for (int tries = 0;; ++tries) {
        if (tries > 60)
            throw QuadratureNonConvergence("stationary density: tail never decays below 1e-12");
        auto u = [&](double y) { return std::exp(log_unnormalized(y) - g_peak); };
        bulk = integrate_adaptive(u, 0.0, y_max, opt, &panels_).value;
        const double tail = integrate_adaptive(u, y_max, 4.0 * y_max, opt).value;
        if (tail < 1e-12 * bulk) break;
        y_max *= 2.0;
    }
    y_max_ = y_max;
    log_C_ = -std::log(bulk) - g_peak;

    build_cumulative_table();

    for (int k = 0; k <= 8; ++k) {
        auto integrand = [&](double y) { return std::pow(y, k) * (*this)(y); };
        moments_[static_cast<std::size_t>(k)] =
            integrate_adaptive(integrand, 0.0, y_max_, opt).value;
    }
}

double StationaryDensity::log_unnormalized(double y) const {
    return exponent_ * std::log(y) + (2.0 / (omega_ * omega_)) * alpha_hat_integral(1.0, y);
}

double StationaryDensity::alpha_hat_integral(double a, double b) const {
    if (drift_.is_polynomial()) return drift_.alpha_hat_antiderivative(a, b);
    auto lookup = [&](double y) {
        if (y >= ihat_y_[ihat_y_.size() - 1]) {
            // beyond the table: extend with one adaptive call (rare)
            return ihat_v_[ihat_v_.size() - 1] +
                   integrate_adaptive([this](double x) { return drift_.alpha_hat(x); },
                                      ihat_y_[ihat_y_.size() - 1], y, QuadOptions{1e-12, 1e-300, 2000})
                       .value;
        }
        return interp_cubic(ihat_y_, ihat_v_, y);
    };
    return lookup(b) - lookup(a);
}

double StationaryDensity::operator()(double y) const {
    if (y <= 0.0) return 0.0;
    const double lg = log_C_ + log_unnormalized(y);
    return lg < -745.0 ? 0.0 : std::exp(lg);
}

double StationaryDensity::eval_first_form(double y) const {
    if (y <= 0.0) return 0.0;
    const double lo = std::min(y, 1.0), hi = std::max(y, 1.0);
    double integral = integrate_adaptive([this](double x) { return drift_(x) / x; }, lo, hi,
                                         QuadOptions{1e-12, 1e-300, 4000})
                          .value;
    if (y < 1.0) integral = -integral;
    // work with log C: the constant itself can overflow when the reference
    // point 1 sits far outside the support
    const double lg = log_C_ - std::log(y) + 2.0 / (omega_ * omega_) * integral;
    return lg < -745.0 ? 0.0 : std::exp(lg);
}

double StationaryDensity::normalization() const { return std::exp(log_C_); }

double StationaryDensity::moment(int k) const {
    if (k < 0 || k > 8) throw InvalidInput("moment: supported range is k in [0,8]");
    return moments_[static_cast<std::size_t>(k)];
}

double StationaryDensity::average(const std::function<double(double)>& psi) const {
    auto integrand = [&](double y) { return psi(y) * (*this)(y); };
    return integrate_adaptive(integrand, 0.0, y_max_, QuadOptions{rel_tol_, 1e-300, 8000}).value;
}

void StationaryDensity::build_cumulative_table() {
    // refine the normalization panels ~4x for a monotone cumulative table
    std::vector<double> edges;
    for (std::size_t p = 0; p + 1 < panels_.size(); ++p) {
        const double a = panels_[p], b = panels_[p + 1];
        for (int j = 0; j < 4; ++j) edges.push_back(a + (b - a) * j / 4.0);
    }
    edges.push_back(y_max_);
    table_y_ = Eigen::Map<Eigen::ArrayXd>(edges.data(), static_cast<Eigen::Index>(edges.size()));
    table_F_.resize(table_y_.size());
    table_F_[0] = 0.0;
    for (Eigen::Index i = 1; i < table_y_.size(); ++i)
        table_F_[i] = table_F_[i - 1] +
                      gauss_kronrod_15([this](double y) { return (*this)(y); }, table_y_[i - 1],
                                       table_y_[i])
                          .value;
}

double StationaryDensity::cdf(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= y_max_) return table_F_[table_F_.size() - 1];
    const Eigen::Index i = locate(table_y_, y);
    return table_F_[i] +
           gauss_kronrod_15([this](double x) { return (*this)(x); }, table_y_[i], y).value;
}

double StationaryDensity::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("quantile: p must lie in [0,1]");
    const double target = p * table_F_[table_F_.size() - 1];
    // bracket in the table, then bisect
    Eigen::Index lo = 0, hi = table_F_.size() - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        (table_F_[mid] < target ? lo : hi) = mid;
    }
    double a = table_y_[lo], b = table_y_[hi];
    for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + b); ++it) {
        const double m = 0.5 * (a + b);
        (cdf(m) < target ? a : b) = m;
    }
    return 0.5 * (a + b);
}

}  // namespace tsq
