#include <doctest.h>

#include <cmath>

#include "tsq/averaging.hpp"
#include "tsq/errors.hpp"
#include "tsq/no1f.hpp"
#include "tsq/rational.hpp"
#include "tsq/taylor_engine.hpp"

using namespace tsq;

namespace {

using RPoly = Polynomial<Rational>;

TwoFactorModel reference_model() {
    TwoFactorModel m;
    m.rate.kappa = 1.0;
    m.rate.theta = 0.05;
    m.rate.lambda = 0.5;
    m.rate.T = 5.0;
    m.vol.omega = 0.2;
    m.vol.lambda_tilde = 0.1;
    m.vol.drift = DriftFunction::linear(2.0, 0.04);
    return m;
}

SymbolicModel<Rational> reference_symbolic() {
    SymbolicModel<Rational> s;
    s.kappa = Rational(1);
    s.theta = Rational(1, 20);
    s.lambda = Rational(1, 2);
    s.lambda_tilde = Rational(1, 10);
    s.omega_sq = Rational(1, 25);
    s.alpha = RPoly({Rational(2, 25), Rational(-2)});  // 2 (1/25 - y)
    return s;
}

const StationaryDensity& reference_density() {
    static const StationaryDensity f(DriftFunction::linear(2.0, 0.04), 0.2, 1e-11);
    return f;
}

// the published third-order recurrence: -kappa^2 theta - (1 - kappa lambda) y
//                                     - lambda (alpha(y) - lambda_tilde y)
RPoly published_order3(const SymbolicModel<Rational>& s) {
    const RPoly y = RPoly::monomial(1);
    return RPoly::constant(-s.kappa * s.kappa * s.theta) -
           (Rational(1) - s.kappa * s.lambda) * y -
           RPoly::constant(s.lambda) * (s.alpha - RPoly({Rational(0), s.lambda_tilde}));
}

// independently hand-derived fourth order (re-derived, kept as an independent oracle):
// -k^3 th + k^2 la y - 3 k y + 3 (k th - la y)^2
//   + (alpha - lt y)(1 - k la - la lt + la alpha') + (w^2/2) la y alpha''
RPoly derived_order4(const SymbolicModel<Rational>& s) {
    const RPoly y = RPoly::monomial(1);
    const RPoly risk_adjusted = s.alpha - RPoly({Rational(0), s.lambda_tilde});
    const RPoly kty = RPoly::constant(s.kappa * s.theta) - s.lambda * y;
    return RPoly::constant(-s.kappa * s.kappa * s.kappa * s.theta) +
           (s.kappa * s.kappa * s.lambda - Rational(3) * s.kappa) * y +
           Rational(3) * (kty * kty) +
           risk_adjusted * (RPoly::constant(Rational(1) - s.kappa * s.lambda -
                                            s.lambda * s.lambda_tilde) +
                            s.lambda * s.alpha.derivative()) +
           (s.omega_sq / Rational(2)) * s.lambda * (y * s.alpha.derivative().derivative());
}

}  // namespace

TEST_CASE("K and Omega_bar^2 identifications") {
    ShortRateParams rate;
    rate.kappa = 1.0;
    rate.theta = 0.05;
    rate.lambda = 0.0;
    CHECK(compute_K(rate, 0.04) == doctest::Approx(0.05).epsilon(1e-15));
    rate.lambda = 0.5;
    CHECK(compute_K(rate, 0.04) == doctest::Approx(0.03).epsilon(1e-14));
    rate.kappa = 2.0;
    rate.theta = 0.03;
    rate.lambda = 1.0;
    CHECK(compute_K(rate, 0.04) == doctest::Approx(0.02).epsilon(1e-14));

    CHECK(compute_omega_bar_sq(0.04, 0.5, 0.0) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(compute_omega_bar_sq(0.04, 0.5, 0.1) == doctest::Approx(0.038).epsilon(1e-14));
    CHECK(compute_omega_bar_sq(0.04, 2.0, 1.0) == doctest::Approx(-0.04).epsilon(1e-14));

    TwoFactorModel m = reference_model();
    m.rate.lambda = 2.0;
    m.vol.lambda_tilde = 1.0;
    const auto cand = one_factor_candidate(m, 0.04);
    CHECK(cand.negative_variance);
}

TEST_CASE("recurrence engine reproduces the published polynomials exactly") {
    const auto s = reference_symbolic();
    const auto polys = taylor_A_polynomials(s, 4);
    REQUIRE(polys.size() == 5);

    CHECK(polys[0] == RPoly::constant(Rational(1)));  // A(T,y) = 1
    CHECK(polys[1].is_zero());                        // dA/dt(T,y) = 0
    // d2A/dt2(T,y) = -kappa theta + lambda y
    CHECK(polys[2] == RPoly({Rational(-1, 20), Rational(1, 2)}));
    // expanded coefficients of the published third-order line
    CHECK(polys[3] == published_order3(s));
    CHECK(polys[3] == RPoly({Rational(-9, 100), Rational(11, 20)}));
}

TEST_CASE("recurrence engine matches the published orders for a cubic drift") {
    SymbolicModel<Rational> s = reference_symbolic();
    // alpha = -30 (y - 1/100)(y - 1/20)(y - 3/25)
    const RPoly y = RPoly::monomial(1);
    s.alpha = Rational(-30) * (y - RPoly::constant(Rational(1, 100))) *
              (y - RPoly::constant(Rational(1, 20))) * (y - RPoly::constant(Rational(3, 25)));
    s.omega_sq = Rational(9, 2500);  // omega = 0.06 keeps the Feller ratio above 1
    const auto polys = taylor_A_polynomials(s, 4);
    CHECK(polys[0] == RPoly::constant(Rational(1)));
    CHECK(polys[1].is_zero());
    CHECK(polys[2] == RPoly({-s.kappa * s.theta, s.lambda}));
    CHECK(polys[3] == published_order3(s));
    CHECK(polys[4] == derived_order4(s));
}

TEST_CASE("recurrence engine order 4 equals the hand-derived closed form") {
    const auto s = reference_symbolic();
    const auto polys = taylor_A_polynomials(s, 4);
    CHECK(polys[4] == derived_order4(s));
}

TEST_CASE("a-ODE engine: exact derivatives and the published order-4 discrepancy") {
    // reference parameters: K = 3/100, Omega_bar^2 = 19/500, kappa = 1
    const Rational K(3, 100), O2(19, 500), kappa(1);
    const auto derivs = taylor_a_ode(K, O2, kappa, 4);
    CHECK(derivs[0] == Rational(1));
    CHECK(derivs[1] == Rational(0));
    CHECK(derivs[2] == -K);
    CHECK(derivs[3] == -K * kappa - O2);
    // derived fourth order carries -K kappa^2 (the published line has -K kappa)
    CHECK(derivs[4] == Rational(3) * K * K - Rational(3) * O2 * kappa - K * kappa * kappa);

    const Rational kappa2(2);
    const auto derivs2 = taylor_a_ode(K, O2, kappa2, 4);
    CHECK(derivs2[4] ==
          Rational(3) * K * K - Rational(3) * O2 * kappa2 - K * kappa2 * kappa2);
    CHECK(derivs2[4] != Rational(3) * K * K - Rational(3) * O2 * kappa2 - K * kappa2);
}

TEST_CASE("order-3 agreement of the two routes with exact Gamma moments") {
    const auto s = reference_symbolic();
    const auto moments = gamma_moments_linear(Rational(2), Rational(1, 25), s.omega_sq, 8);
    CHECK(moments[1] == Rational(1, 25));   // sigma^2
    CHECK(moments[2] == Rational(1, 500));  // d

    const Rational sigma_sq = moments[1];
    const Rational K = s.kappa * s.theta - s.lambda * sigma_sq;
    const Rational O2 = sigma_sq * (Rational(1) - s.lambda_tilde * s.lambda);
    const auto route1 = taylor_a_ode(K, O2, s.kappa, 3);

    const auto polys = taylor_A_polynomials(s, 3);
    auto avg = [&](const RPoly& p) {
        Rational acc(0);
        const auto& c = p.coeffs();
        for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * moments[k];
        return acc;
    };
    CHECK(route1[1] == avg(polys[1]));
    CHECK(route1[2] == avg(polys[2]));
    CHECK(route1[3] == avg(polys[3]));  // exact: this is how K, Omega_bar are defined
    CHECK(route1[3] == Rational(-17, 250));  // -0.068
}

TEST_CASE("route1_taylor flags the order-4 discrepancy only for kappa != 1") {
    OneFactorCandidate c;
    c.K = 0.03;
    c.omega_bar_sq = 0.038;
    c.kappa = 1.0;
    const auto r1 = route1_taylor(c, 4);
    CHECK(r1.published[1] == 0.0);
    CHECK(r1.published[2] == doctest::Approx(-0.03).epsilon(1e-14));
    CHECK(r1.published[3] == doctest::Approx(-0.068).epsilon(1e-14));
    CHECK_FALSE(r1.mismatch);  // -K kappa == -K kappa^2 at kappa = 1

    c.kappa = 2.0;
    const auto r2 = route1_taylor(c, 4);
    CHECK(r2.mismatch);
    CHECK(r2.published[4] == doctest::Approx(3.0 * 0.03 * 0.03 - 3.0 * 0.038 * 2.0 - 0.03 * 2.0));
    CHECK(r2.derived[4] == doctest::Approx(3.0 * 0.03 * 0.03 - 3.0 * 0.038 * 2.0 - 0.03 * 4.0));
}

TEST_CASE("route2_taylor: published coefficients agree with the engine oracle") {
    const auto r2 = route2_taylor(reference_model(), reference_density(), 4);
    REQUIRE(r2.oracle_available);
    CHECK(r2.published[1] == 0.0);
    CHECK(r2.published[2] == doctest::Approx(-0.03).epsilon(1e-9));
    CHECK(r2.published[3] == doctest::Approx(-0.068).epsilon(1e-9));
    for (int k = 1; k <= 4; ++k)
        CHECK(r2.published[static_cast<std::size_t>(k)] ==
              doctest::Approx(r2.oracle[static_cast<std::size_t>(k)]).epsilon(1e-9));
    CHECK_FALSE(r2.mismatch);
}

TEST_CASE("taylor report ties the pieces together") {
    const auto rep = build_taylor_report(reference_model(), reference_density());
    CHECK(rep.sigma_sq == doctest::Approx(0.04).epsilon(1e-9));
    CHECK(rep.d == doctest::Approx(0.002).epsilon(1e-9));
    CHECK(rep.alpha_sq_avg == doctest::Approx(1.6e-3).epsilon(1e-8));
    CHECK(rep.candidate.K == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(rep.candidate.omega_bar_sq == doctest::Approx(0.038).epsilon(1e-9));
    CHECK(rep.order3_consistent);
    CHECK(rep.residuals.residual_published == doctest::Approx(0.0395).epsilon(1e-6));
    CHECK(rep.residuals.verdict);
}

TEST_CASE("nonexistence residual for the reference parameters") {
    const auto res = nonexistence_residual(reference_model(), reference_density());
    CHECK(res.residual_published == doctest::Approx(0.0395).epsilon(1e-6));
    REQUIRE(res.derived_available);
    CHECK(res.residual_derived == doctest::Approx(0.0035).epsilon(1e-6));
    CHECK(res.verdict);
}

TEST_CASE("lambda = 0 reduces the published condition to 0 = sigma^2") {
    TwoFactorModel m = reference_model();
    m.rate.lambda = 0.0;
    const auto res = nonexistence_residual(m, reference_density());
    CHECK(res.residual_published == doctest::Approx(res.sigma_sq).epsilon(1e-15));
    CHECK(res.verdict);
    CHECK(res.annotation.find("sigma^2") != std::string::npos);
}

TEST_CASE("lambda = lambda_tilde = 0 degenerates the derived condition only") {
    TwoFactorModel m = reference_model();
    m.rate.lambda = 0.0;
    m.vol.lambda_tilde = 0.0;
    const auto res = nonexistence_residual(m, reference_density());
    REQUIRE(res.derived_available);
    CHECK(std::fabs(res.residual_derived) < 1e-12);
    CHECK(res.residual_published == doctest::Approx(res.sigma_sq).epsilon(1e-15));
    CHECK(res.verdict);
    CHECK(res.annotation.find("degenerates") != std::string::npos);
}

TEST_CASE("derived residual equals the re-derived matching condition") {
    // independent cross-check on a cubic-drift (non-Gamma) density:
    // sigma^2 (2 k lt la + lt - la lt^2) - (2/w^2) lt la <alpha^2>
    //   - 3 la^2 (d - sigma^4)
    TwoFactorModel m = reference_model();
    m.vol.drift = DriftFunction::cubic(-30.0, 0.01, 0.05, 0.12);
    m.vol.omega = 0.05;
    const StationaryDensity f(m.vol.drift, m.vol.omega, 1e-11);
    const auto res = nonexistence_residual(m, f);
    REQUIRE(res.derived_available);
    const double kp = m.rate.kappa, la = m.rate.lambda, lt = m.vol.lambda_tilde;
    const double w2 = m.vol.omega * m.vol.omega;
    const double expect = res.sigma_sq * (2.0 * kp * lt * la + lt - la * lt * lt) -
                          (2.0 / w2) * lt * la * res.alpha_sq_avg -
                          3.0 * la * la * (res.d - res.sigma_sq * res.sigma_sq);
    CHECK(res.residual_derived == doctest::Approx(expect).epsilon(1e-8));
    CHECK(res.verdict);
}

TEST_CASE("closest vasicek surrogate: parameters, gap growth, strict positivity") {
    const TwoFactorModel m = reference_model();
    const auto& f = reference_density();
    static const BondSurface2F surface = solve_A_pde(m, f);
    static const AveragedPrice avg = average_a(surface, f);
    const auto cv = closest_vasicek(m, f, avg);

    CHECK(cv.surrogate.kappa == doctest::Approx(1.0));
    CHECK(cv.surrogate.theta == doctest::Approx(0.03).epsilon(1e-8));
    CHECK(cv.surrogate.sigma == doctest::Approx(std::sqrt(0.038)).epsilon(1e-8));

    // gap at tau = 5 is strictly positive (the theorem made computable)
    CHECK(cv.gaps[cv.gaps.size() - 1] > 1e-5);
    CHECK(cv.max_gap > 1e-5);
    CHECK(cv.tau_first_gap > 0.0);

    // orders 1..3 shared: gap is O(tau^4) near 0
    CHECK(cv.loglog_slope >= 3.5);
    CHECK(cv.loglog_slope <= 4.5);

    // at tau = 0 both prices are exactly 1, so the gap vanishes at the short
    // end of the scan
    CHECK(avg.price(avg.maturity(), 0.03) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(vasicek_price_tau(cv.surrogate, 0.0, 0.03) == 1.0);
    CHECK(cv.gaps[0] < 1e-6);
}

TEST_CASE("negative variance candidates are rejected by closest_vasicek") {
    TwoFactorModel m = reference_model();
    m.rate.lambda = 2.0;
    m.vol.lambda_tilde = 1.0;
    const auto& f = reference_density();
    static const BondSurface2F surface = solve_A_pde(reference_model(), f);
    static const AveragedPrice avg = average_a(surface, f);
    CHECK_THROWS_AS(closest_vasicek(m, f, avg), NegativeVariance);
}

TEST_CASE("taylor oracle requires a polynomial drift") {
    TwoFactorModel m = reference_model();
    m.vol.drift = DriftFunction::general([](double y) { return 2.0 * (0.04 - y); });
    CHECK_THROWS_AS(taylor_A_derivatives(m, 4), NonPolynomialDrift);
    const StationaryDensity f(m.vol.drift, m.vol.omega, 1e-10);
    const auto r2 = route2_taylor(m, f, 4);
    CHECK_FALSE(r2.oracle_available);
    CHECK(r2.published[2] == doctest::Approx(-0.03).epsilon(1e-6));
    const auto res = nonexistence_residual(m, f);
    CHECK_FALSE(res.derived_available);
    CHECK(res.verdict);  // the published residual still fires
}
