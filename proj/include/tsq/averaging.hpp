#pragma once

// Volatility-averaged bond prices P(t,r) = a(t) exp(-B(tau) r) with
// a(t) = int A(t,y) f(y) dy. The y-quadrature nodes are fixed once per
// (surface, density) pair and reused across all time steps so that a(t) is a
// smooth function of t suitable for finite-difference derivative estimates.

#include <Eigen/Dense>

#include "tsq/density.hpp"
#include "tsq/pricer1f.hpp"
#include "tsq/pricer2f.hpp"

namespace tsq {

class AveragedPrice {
  public:
    double a_at(double t) const;                 // linear interpolation on the t-grid
    double B(double tau) const;
    double price(double t, double r) const;      // averaged_price
    double price_at_tau(double tau, double r) const { return price(T_ - tau, r); }
    TermStructure term_structure(double r, const Eigen::ArrayXd& maturities) const;

    const Eigen::ArrayXd& t_grid() const { return t_grid_; }
    const Eigen::ArrayXd& a() const { return a_; }
    double maturity() const { return T_; }
    double kappa() const { return kappa_; }

  private:
    friend AveragedPrice average_a(const BondSurface2F&, const StationaryDensity&, int);
    Eigen::ArrayXd t_grid_;
    Eigen::ArrayXd a_;
    double kappa_ = 1.0;
    double T_ = 1.0;
};

// refine > 0 splits every quadrature panel 2^refine times (convergence checks)
AveragedPrice average_a(const BondSurface2F& surface, const StationaryDensity& density,
                        int refine = 0);

// One-sided 2nd-order finite-difference estimates of a', a'', a''' at t = T,
// taken from the a(t) grid with spacing stride * dt (stride 0 picks a spacing
// balancing truncation against roundoff amplification).
struct ADerivativeEstimates {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double spacing = 0.0;
};

ADerivativeEstimates estimate_a_derivatives(const AveragedPrice& avg, int stride = 0);

}  // namespace tsq
