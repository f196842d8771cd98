#include "tsq/model.hpp"

#include <array>
#include <cmath>

#include "tsq/errors.hpp"

namespace tsq {

void ShortRateParams::validate() const {
    if (!(kappa > 0.0)) throw InvalidInput("shortrate: kappa must be positive");
    if (!(T > 0.0)) throw InvalidInput("shortrate: maturity T must be positive");
    if (!std::isfinite(theta) || !std::isfinite(lambda))
        throw InvalidInput("shortrate: non-finite parameter");
}

void VolatilityParams::validate() const {
    if (!(omega > 0.0)) throw InvalidInput("volatility: omega must be positive");
    if (!std::isfinite(lambda_tilde)) throw InvalidInput("volatility: non-finite lambda_tilde");
}

void VasicekParams::validate() const {
    if (!(kappa > 0.0)) throw InvalidInput("vasicek: kappa must be positive");
    if (!(sigma >= 0.0)) throw InvalidInput("vasicek: sigma must be non-negative");
}

void CKLSParams::validate() const {
    if (!(sigma >= 0.0)) throw InvalidInput("ckls: sigma must be non-negative");
    if (!(gamma >= 0.0)) throw InvalidInput("ckls: gamma must be non-negative");
}

ValidationReport validate_hypothesis_A(const DriftFunction& drift, double omega) {
    if (!(omega > 0.0)) throw InvalidInput("validate_hypothesis_A: omega must be positive");

    ValidationReport rep;
    rep.feller_ratio = 2.0 * drift.alpha0() / (omega * omega);
    rep.feller_ok = rep.feller_ratio > 1.0;

    if (drift.is_polynomial()) {
        rep.smooth_ok = true;  // polynomials are C^1
        const auto& p = drift.coefficients();
        const int deg = p.degree();
        // limsup alpha(y)/y: 0 for deg <= 0 (fails, not negative), sign of the
        // slope for deg == 1, sign of the leading coefficient for deg >= 2
        if (deg <= 0) {
            rep.limsup_ok = false;
        } else if (deg == 1) {
            rep.limsup_ok = p.coeff(1) < 0.0;
        } else {
            rep.limsup_ok = p.coeff(static_cast<std::size_t>(deg)) < 0.0;
        }
    } else {
        // heuristics for sampled drifts: decade-spaced ratio probes and a
        // finite-difference continuity check of alpha'
        rep.limsup_heuristic = true;
        rep.limsup_ok = true;
        for (double y : {1e2, 1e3, 1e4}) {
            if (!(drift(y) / y < 0.0)) rep.limsup_ok = false;
        }
        rep.smooth_ok = true;
        double prev = drift.derivative(0.0);
        for (int i = 1; i <= 32; ++i) {
            const double y = 0.03125 * i;
            const double d = drift.derivative(y);
            if (!std::isfinite(d) || std::fabs(d - prev) > 1e3 * (1.0 + std::fabs(prev)))
                rep.smooth_ok = false;
            prev = d;
        }
    }

    rep.pass = rep.feller_ok && rep.limsup_ok && rep.smooth_ok;
    if (!rep.pass) {
        if (!rep.feller_ok)
            rep.detail = "2*alpha(0)/omega^2 = " + std::to_string(rep.feller_ratio) + " must exceed 1";
        else if (!rep.limsup_ok)
            rep.detail = "limsup alpha(y)/y must be negative";
        else
            rep.detail = "alpha must be C^1 on [0,inf)";
    }
    return rep;
}

double yield_from_price(double price, double tau) {
    if (!(price > 0.0)) throw InvalidInput("yield_from_price: price must be positive");
    if (!(tau > 0.0)) throw InvalidInput("yield_from_price: tau must be positive");
    return -std::log(price) / tau;
}

double price_from_yield(double yield, double tau) {
    if (!(tau > 0.0)) throw InvalidInput("price_from_yield: tau must be positive");
    return std::exp(-yield * tau);
}

}  // namespace tsq
