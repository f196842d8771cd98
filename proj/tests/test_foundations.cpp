#include <doctest.h>

#include <cmath>

#include "tsq/grids.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/polynomial.hpp"
#include "tsq/quadrature.hpp"
#include "tsq/rational.hpp"
#include "tsq/tridiagonal.hpp"

using namespace tsq;

TEST_CASE("rational arithmetic stays normalized") {
    Rational a(1, 2), b(1, 3);
    CHECK((a + b) == Rational(5, 6));
    CHECK((a * b) == Rational(1, 6));
    CHECK((a - b) == Rational(1, 6));
    CHECK((a / b) == Rational(3, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK((-a).to_double() == -0.5);
}

TEST_CASE("rational recovers decimal literals from doubles") {
    CHECK(Rational::from_double(0.05) == Rational(1, 20));
    CHECK(Rational::from_double(0.04) == Rational(1, 25));
    CHECK(Rational::from_double(-0.068) == Rational(-17, 250));
    CHECK(Rational::from_double(3.0) == Rational(3));
    CHECK_THROWS_AS(Rational::from_double(std::sqrt(2.0), 100), std::domain_error);
}

TEST_CASE("rational overflow throws instead of wrapping") {
    Rational big(INT64_MAX / 2, 3);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("polynomial ring operations") {
    Polynomial<double> p({1.0, 2.0, 1.0});  // (1+x)^2
    Polynomial<double> q({-1.0, 1.0});      // x - 1
    CHECK((p * q).coeffs() == std::vector<double>{-1.0, -1.0, 1.0, 1.0});
    CHECK(p.derivative().coeffs() == std::vector<double>{2.0, 2.0});
    CHECK(p(2.0) == doctest::Approx(9.0));
    CHECK((p - p).is_zero());

    // nested: bivariate over rationals
    using P = Polynomial<Rational>;
    using Q = Polynomial<P>;
    Q f({P({Rational(0), Rational(1)}), P({Rational(1)})});  // y + B
    Q g = f * f;                                             // y^2 + 2yB + B^2
    CHECK(g.coeff(0) == P({Rational(0), Rational(0), Rational(1)}));
    CHECK(g.coeff(1) == P({Rational(0), Rational(2)}));
    CHECK(g.coeff(2) == P({Rational(1)}));
}

TEST_CASE("adaptive quadrature on smooth and singular integrands") {
    auto cube = [](double x) { return x * x * x; };
    CHECK(integrate_adaptive(cube, 0.0, 1.0).value == doctest::Approx(0.25).epsilon(1e-12));

    // sqrt singularity in the derivative at 0
    auto root = [](double x) { return std::sqrt(x); };
    CHECK(integrate_adaptive(root, 0.0, 1.0, {1e-12, 0.0, 8000}).value ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-10));

    // truncated Gaussian vs erf
    auto gauss = [](double x) { return std::exp(-x * x); };
    const double ref = std::sqrt(std::acos(-1.0)) / 2.0 * std::erf(5.0);
    CHECK(integrate_adaptive(gauss, 0.0, 5.0).value == doctest::Approx(ref).epsilon(1e-12));

    // non-integrable: must throw rather than return garbage
    auto inv = [](double x) { return 1.0 / x; };
    CHECK_THROWS_AS(integrate_adaptive(inv, 0.0, 1.0, {1e-10, 0.0, 200}),
                    QuadratureNonConvergence);
}

TEST_CASE("panel reuse reproduces the adaptive value") {
    auto f = [](double x) { return std::exp(-3.0 * x) * std::cos(x); };
    std::vector<double> edges;
    const double ref = integrate_adaptive(f, 0.0, 4.0, {1e-12, 0.0, 4000}, &edges).value;
    CHECK(integrate_panels(f, edges) == doctest::Approx(ref).epsilon(1e-12));

    std::vector<double> nodes, weights;
    kronrod_nodes_on_panels(edges, &nodes, &weights);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    CHECK(acc == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("tridiagonal solver matches dense solve") {
    const int n = 40;
    Eigen::ArrayXd lo(n), di(n), up(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = -1.0 + 0.01 * i;
        di[i] = 4.0 + 0.05 * i;
        up[i] = -1.5;
        rhs[i] = std::sin(0.3 * i);
    }
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        dense(i, i) = di[i];
        if (i > 0) dense(i, i - 1) = lo[i];
        if (i + 1 < n) dense(i, i + 1) = up[i];
    }
    Eigen::VectorXd expect = dense.partialPivLu().solve(rhs.matrix());
    Eigen::ArrayXd b = rhs;
    solve_tridiagonal(lo, di, up, b);
    CHECK((b.matrix() - expect).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("corner elimination handles one-sided boundary rows") {
    const int n = 12;
    Eigen::ArrayXd lo(n), di(n), up(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = -0.7;
        di[i] = 3.0;
        up[i] = -0.9;
        rhs[i] = 1.0 + 0.1 * i;
    }
    const double fe = 0.25, le = -0.4;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        dense(i, i) = di[i];
        if (i > 0) dense(i, i - 1) = lo[i];
        if (i + 1 < n) dense(i, i + 1) = up[i];
    }
    dense(0, 2) = fe;
    dense(n - 1, n - 3) = le;
    Eigen::VectorXd expect = dense.partialPivLu().solve(rhs.matrix());
    Eigen::ArrayXd b = rhs;
    solve_tridiagonal_with_corners(lo, di, up, fe, le, b);
    CHECK((b.matrix() - expect).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("graded grid clusters near zero and stays monotone") {
    const Eigen::ArrayXd g = graded_grid(0.5, 200, 0.04, 0.02);
    CHECK(g.size() == 201);
    CHECK(g[0] == 0.0);
    CHECK(g[200] == doctest::Approx(0.5));
    for (int i = 0; i < 200; ++i) CHECK(g[i + 1] > g[i]);
    // near-zero spacing must be much finer than the uniform step
    CHECK(g[1] - g[0] < 0.2 * (0.5 / 200));
}

TEST_CASE("cubic interpolation is exact on cubics") {
    Eigen::ArrayXd grid(7), vals(7);
    grid << 0.0, 0.08, 0.2, 0.33, 0.5, 0.71, 1.0;
    auto f = [](double x) { return 2.0 - x + 3.0 * x * x - 0.5 * x * x * x; };
    for (int i = 0; i < 7; ++i) vals[i] = f(grid[i]);
    for (double x : {0.05, 0.1, 0.25, 0.4, 0.6, 0.9}) {
        CHECK(interp_cubic(grid, vals, x) == doctest::Approx(f(x)).epsilon(1e-13));
    }
}
