#include <doctest.h>

#include <cmath>

#include "tsq/density.hpp"
#include "tsq/errors.hpp"
#include "tsq/pricer1f.hpp"
#include "tsq/pricer2f.hpp"

using namespace tsq;

namespace {

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

const StationaryDensity& reference_density() {
    static const StationaryDensity f(DriftFunction::linear(2.0, 0.04), 0.2, 1e-11);
    return f;
}

const BondSurface2F& reference_surface() {
    static const BondSurface2F s = solve_A_pde(reference_model(), reference_density());
    return s;
}

}  // namespace

TEST_CASE("terminal condition A(T, y) = 1 on the whole grid") {
    const auto& s = reference_surface();
    const Eigen::Index last = s.t_grid().size() - 1;
    for (Eigen::Index i = 0; i < s.y_grid().size(); ++i) CHECK(s.A()(i, last) == 1.0);
}

TEST_CASE("A stays positive and the y_max covers the density support") {
    const auto& s = reference_surface();
    CHECK((s.A().array() > 0.0).all());
    CHECK(s.y_max() >= reference_density().y_max());
}

TEST_CASE("second t-derivative of A at T reproduces -kappa theta + lambda y") {
    const auto& s = reference_surface();
    const auto& m = reference_model();
    const Eigen::Index n_t = s.t_grid().size() - 1;
    const double dt = s.t_grid()[1] - s.t_grid()[0];
    const int stride = 8;
    const double h = stride * dt;
    // sweep the y-range carrying density mass; exclude far tail
    double worst = 0.0;
    for (Eigen::Index i = 0; i < s.y_grid().size(); ++i) {
        const double y = s.y_grid()[i];
        if (y > 0.2) break;
        auto a = [&](int k) { return s.A()(i, n_t - k * stride); };
        const double fd = (2.0 * a(0) - 5.0 * a(1) + 4.0 * a(2) - a(3)) / (h * h);
        const double exact = -m.rate.kappa * m.rate.theta + m.rate.lambda * y;
        // guarded relative error: the target crosses zero at y = kappa theta/lambda
        worst = std::max(worst,
                         std::fabs(fd - exact) / (std::fabs(exact) + m.rate.kappa * m.rate.theta));
    }
    CHECK(worst < 0.01);
}

TEST_CASE("separable form: price ratios in r are exactly exponential") {
    const auto& s = reference_surface();
    const double t = 2.0, y = 0.04, r = 0.03, dr = 0.01;
    const double ratio = s.price(t, r + dr, y) / s.price(t, r, y);
    const double expect = std::exp(-s.B(s.maturity() - t) * dr);
    CHECK(ratio == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("price at maturity is 1 for any state") {
    const auto& s = reference_surface();
    for (double r : {0.0, 0.03, 0.1})
        for (double y : {0.01, 0.04, 0.2})
            CHECK(s.price(s.maturity(), r, y) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("out-of-grid evaluation throws") {
    const auto& s = reference_surface();
    CHECK_THROWS_AS(s.price(-1.0, 0.03, 0.04), OutOfGrid);
    CHECK_THROWS_AS(s.price(2.0, 0.03, 10.0 * s.y_max()), OutOfGrid);
}

TEST_CASE("full two-factor PDE residual is small and shrinks under refinement") {
    const auto& m = reference_model();
    const auto& f = reference_density();

    Grid2F coarse;
    coarse.n_y = 100;
    coarse.n_t = 250;
    Grid2F fine;
    fine.n_y = 200;
    fine.n_t = 500;

    const BondSurface2F s_coarse = solve_A_pde(m, f, coarse);
    const BondSurface2F s_fine = solve_A_pde(m, f, fine);
    const PdeResidualReport r_coarse = verify_pi_pde(s_coarse);
    const PdeResidualReport r_fine = verify_pi_pde(s_fine);

    CHECK(std::isfinite(r_coarse.max_residual));
    CHECK(r_fine.max_residual < 1e-3);
    CHECK(r_coarse.max_residual / r_fine.max_residual >= 3.0);

    // default grids comfortably beat 1e-3
    const PdeResidualReport r_default = verify_pi_pde(reference_surface());
    CHECK(r_default.max_residual < 1e-3);
}

TEST_CASE("Richardson check flags an undersized 2F grid") {
    Grid2F g;
    g.n_y = 24;
    g.n_t = 24;
    g.richardson_tol = 1e-10;
    CHECK_THROWS_AS(solve_A_pde(reference_model(), reference_density(), g), GridTooCoarse);
}

TEST_CASE("hypothesis-(A) violation is rejected before solving") {
    TwoFactorModel m = reference_model();
    m.vol.omega = 0.6;  // feller ratio 2*0.08/0.36 < 1
    CHECK_THROWS_AS(StationaryDensity(m.vol.drift, m.vol.omega), HypothesisAViolated);
}

TEST_CASE("B values in the surface match the closed form") {
    const auto& s = reference_surface();
    for (double tau : {0.0, 0.5, 2.0, 5.0})
        CHECK(s.B(tau) == vasicek_B(reference_model().rate.kappa, tau));
}

TEST_CASE("monotonicity in y is reported, not asserted") {
    const auto& s = reference_surface();
    CHECK(s.monotone_in_y_fraction() >= 0.0);
    CHECK(s.monotone_in_y_fraction() <= 1.0);
}
