#include <doctest.h>

#include <cmath>
#include <cstring>

#include "tsq/errors.hpp"
#include "tsq/model.hpp"

using namespace tsq;

TEST_CASE("hypothesis (A) on the reference linear drift") {
    const auto rep = validate_hypothesis_A(DriftFunction::linear(2.0, 0.04), 0.2);
    CHECK(rep.pass);
    CHECK(rep.feller_ratio == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_FALSE(rep.limsup_heuristic);
}

TEST_CASE("hypothesis (A) fails when the Feller ratio is too small") {
    const auto rep = validate_hypothesis_A(DriftFunction::linear(1.0, 0.01), 0.2);
    CHECK_FALSE(rep.pass);
    CHECK(rep.feller_ratio == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(rep.feller_ok);
    CHECK(rep.detail.find("exceed 1") != std::string::npos);
}

TEST_CASE("hypothesis (A) fails for an upward drift alpha(y) = y") {
    const auto rep = validate_hypothesis_A(DriftFunction::polynomial({0.0, 1.0}), 0.2);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.limsup_ok);
}

TEST_CASE("hypothesis (A) on general sampled drifts is flagged heuristic") {
    auto fn = [](double y) { return 2.0 * (0.04 - y); };
    const auto rep = validate_hypothesis_A(DriftFunction::general(fn), 0.2);
    CHECK(rep.pass);
    CHECK(rep.limsup_heuristic);
}

TEST_CASE("validate_hypothesis_A rejects non-positive omega") {
    CHECK_THROWS_AS(validate_hypothesis_A(DriftFunction::linear(2.0, 0.04), 0.0), InvalidInput);
}

TEST_CASE("hypothesis validation is deterministic") {
    const auto a = validate_hypothesis_A(DriftFunction::linear(2.0, 0.04), 0.2);
    const auto b = validate_hypothesis_A(DriftFunction::linear(2.0, 0.04), 0.2);
    CHECK(std::memcmp(&a.feller_ratio, &b.feller_ratio, sizeof(double)) == 0);
    CHECK(a.pass == b.pass);
    CHECK(a.detail == b.detail);
}

TEST_CASE("yield transforms") {
    CHECK(yield_from_price(1.0, 7.0) == 0.0);
    CHECK(yield_from_price(std::exp(-0.1), 2.0) == doctest::Approx(0.05).epsilon(1e-15));
    // extended-precision value of -ln(0.8)/5
    CHECK(yield_from_price(0.8, 5.0) ==
          doctest::Approx(0.044628710262841951).epsilon(1e-15));
    CHECK_THROWS_AS(yield_from_price(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(yield_from_price(-1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(yield_from_price(0.5, 0.0), InvalidInput);
}

TEST_CASE("price/yield round trip to near machine precision") {
    for (int i = 0; i <= 60; ++i) {
        const double p = std::pow(10.0, -6.0 + 6.0 * i / 60.0);  // 1e-6 .. 1
        for (double tau : {0.1, 1.0, 7.0, 30.0}) {
            const double back = price_from_yield(yield_from_price(p, tau), tau);
            CHECK(std::fabs(back - p) <= 1e-14 * p);
        }
    }
}

TEST_CASE("alpha_hat on the drift families") {
    const auto lin = DriftFunction::linear(2.0, 0.04);
    CHECK(lin.alpha_hat(0.1) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(lin.alpha_hat(0.0) == doctest::Approx(-2.0).epsilon(1e-14));

    const auto cub = DriftFunction::cubic(-1.0, 0.02, 0.05, 0.08);
    CHECK(cub.alpha0() == doctest::Approx(8e-5).epsilon(1e-12));
    CHECK(cub.alpha_hat(0.05) == doctest::Approx(-1.6e-3).epsilon(1e-12));
}

TEST_CASE("alpha_hat identity alpha_hat(y) y + alpha(0) = alpha(y)") {
    const DriftFunction drifts[] = {
        DriftFunction::linear(2.0, 0.04),
        DriftFunction::cubic(-5.0, 0.01, 0.04, 0.09),
        DriftFunction::polynomial({0.08, -1.0, -3.0}),
        DriftFunction::general([](double y) { return 0.08 * std::exp(-y) - 1.5 * y; }),
    };
    for (const auto& d : drifts) {
        for (int i = 0; i <= 40; ++i) {
            const double y = std::pow(10.0, -6.0 + 8.0 * i / 40.0);
            const double lhs = d.alpha_hat(y) * y + d.alpha0();
            const double rhs = d(y);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
    }
}

TEST_CASE("cubic drift expands to the expected polynomial") {
    const auto cub = DriftFunction::cubic(-1.0, 0.02, 0.05, 0.08);
    // -(y-.02)(y-.05)(y-.08) = -y^3 + .15 y^2 - .0066 y + .00008
    const auto& c = cub.coefficients().coeffs();
    REQUIRE(c.size() == 4);
    CHECK(c[0] == doctest::Approx(8e-5).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(-0.0066).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(c[3] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    ShortRateParams bad;
    bad.kappa = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    VolatilityParams vol;
    vol.omega = -0.1;
    CHECK_THROWS_AS(vol.validate(), InvalidInput);
    CHECK_THROWS_AS(DriftFunction::cubic(1.0, 0.02, 0.05, 0.08), InvalidInput);
    CHECK_THROWS_AS(DriftFunction::cubic(-1.0, 0.05, 0.02, 0.08), InvalidInput);
}
