#pragma once

// The non-existence analysis: Taylor coefficients of a(t) at t = T computed
// along two independent routes, the K and Omega_bar^2 identifications, the
// non-existence residuals (the published matching condition and an
// independently re-derived one), and the best-effort one-factor Vasicek
// comparison.
//
// Every quantity is reported twice, as published and as re-derived;
// discrepancies are flagged, never silently fixed.

#include <Eigen/Dense>
#include <array>
#include <string>

#include "tsq/averaging.hpp"
#include "tsq/density.hpp"
#include "tsq/model.hpp"
#include "tsq/pricer1f.hpp"

namespace tsq {

// K = kappa theta - lambda sigma^2
double compute_K(const ShortRateParams& rate, double sigma_sq);
// Omega_bar^2 = sigma^2 (1 - lambda_tilde lambda); may be negative
double compute_omega_bar_sq(double sigma_sq, double lambda, double lambda_tilde);

struct OneFactorCandidate {
    double K = 0.0;
    double omega_bar_sq = 0.0;
    double kappa = 1.0;
    bool negative_variance = false;
};

OneFactorCandidate one_factor_candidate(const TwoFactorModel& model, double sigma_sq);

// indices 0..4 hold a(T) .. a''''(T); orders above `order` are NaN
struct Route1Taylor {
    // published closed forms: a'=0, a''=-K, a'''=-K kappa - Ob^2,
    // a'''' = 3K^2 - 3 Ob^2 kappa - K kappa
    std::array<double, 5> published{};
    std::array<double, 5> derived{};  // exact differentiation of the a-ODE
    bool mismatch = false;            // fires at order 4 unless kappa == 1
};

Route1Taylor route1_taylor(const OneFactorCandidate& c, int order = 4);

struct Route2Taylor {
    std::array<double, 5> published{};  // closed forms with quadrature moments
    std::array<double, 5> oracle{};  // recurrence engine, f-averaged
    bool oracle_available = false;   // polynomial drift only
    bool mismatch = false;
};

Route2Taylor route2_taylor(const TwoFactorModel& model, const StationaryDensity& f,
                           int order = 4);

// d^k A/dt^k (T,y) as double-coefficient polynomials in y (exact recurrences
// evaluated in floating point); throws NonPolynomialDrift otherwise
std::vector<Polynomial<double>> taylor_A_derivatives(const TwoFactorModel& model, int order = 4);

struct NonexistenceResult {
    double residual_published = 0.0;    // LHS - RHS of the published condition
    double residual_derived = 0.0;  // order-4 mismatch re-derived from the ODE
    bool derived_available = false;
    bool verdict = false;  // true: no one-factor model reproduces the averages
    double sigma_sq = 0.0;
    double d = 0.0;
    double alpha_sq_avg = 0.0;
    std::string annotation;
};

NonexistenceResult nonexistence_residual(const TwoFactorModel& model, const StationaryDensity& f);

struct TaylorReport {
    double sigma_sq = 0.0;
    double d = 0.0;
    double alpha_sq_avg = 0.0;
    OneFactorCandidate candidate;
    Route1Taylor route1;
    Route2Taylor route2;
    NonexistenceResult residuals;
    bool order3_consistent = false;  // route1 derived vs route2 oracle at orders 1..3
};

TaylorReport build_taylor_report(const TwoFactorModel& model, const StationaryDensity& f);

struct ClosestVasicek {
    VasicekParams surrogate;        // Vasicek with drift K - kappa r, variance Ob^2
    double max_gap = 0.0;           // over the (tau, r) scan grid
    double tau_at_max = 0.0;
    double tau_first_gap = -1.0;    // first tau with gap > 1e-6, -1 if none
    double loglog_slope = 0.0;      // fit of ln gap vs ln tau on [0.1, 1]
    Eigen::ArrayXd taus;            // scan taus (snapped to the a(t) grid)
    Eigen::ArrayXd gaps;            // max-over-r gap per tau
};

ClosestVasicek closest_vasicek(const TwoFactorModel& model, const StationaryDensity& f,
                               const AveragedPrice& avg);

}  // namespace tsq
