#pragma once

// Drift function families for the dispersion process dy = alpha(y) dt
// + omega sqrt(y) dw: linear (mean-reverting), cubic with three roots
// (volatility clustering), raw polynomial, and a general sampled form.

#include <functional>
#include <vector>

#include "tsq/polynomial.hpp"

namespace tsq {

class DriftFunction {
  public:
    enum class Kind { Linear, Cubic, Polynomial, General };

    // alpha(y) = kappa_y (theta_y - y)
    static DriftFunction linear(double kappa_y, double theta_y);
    // alpha(y) = c (y-y1)(y-y2)(y-y3), c < 0 and 0 < y1 < y2 < y3 expected
    static DriftFunction cubic(double c, double y1, double y2, double y3);
    static DriftFunction polynomial(std::vector<double> ascending_coeffs);
    static DriftFunction general(std::function<double(double)> fn);

    double operator()(double y) const;
    // alpha(0), cached at construction
    double alpha0() const { return alpha0_; }
    // alpha_hat(y) = (alpha(y) - alpha(0)) / y, extended by alpha'(0) at y=0
    double alpha_hat(double y) const;
    // d alpha / dy (analytic for polynomial kinds, one-sided difference else)
    double derivative(double y) const;

    Kind kind() const { return kind_; }
    bool is_polynomial() const { return kind_ != Kind::General; }
    // throws NonPolynomialDrift for the general variant
    const Polynomial<double>& coefficients() const;
    // exact antiderivative of alpha_hat on [a,b] for polynomial kinds;
    // the general variant must integrate numerically (see density module)
    double alpha_hat_antiderivative(double a, double b) const;

  private:
    DriftFunction() = default;

    Kind kind_ = Kind::Linear;
    Polynomial<double> poly_;                  // valid unless General
    std::function<double(double)> fn_;         // valid for General
    double alpha0_ = 0.0;
};

}  // namespace tsq
