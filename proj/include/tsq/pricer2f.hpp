#pragma once

// Two-factor bond price pi(t,r,y) = A(t,y) exp(-B(tau) r). B is the Vasicek
// closed form; A solves the degenerate parabolic PDE
//   A_t - B(kappa theta - lambda y - y B/2) A
//       + (alpha(y) - lambda_tilde y) A_y + (omega^2/2) y A_yy = 0,
// backward from A(T,.) = 1. At y = 0 the PDE itself is discretized with
// one-sided convection (no artificial boundary condition); at y_max the
// curvature is set to zero.

#include <Eigen/Dense>
#include <limits>
#include <optional>

#include "tsq/density.hpp"
#include "tsq/model.hpp"

namespace tsq {

struct Grid2F {
    int n_y = 400;
    int n_t = 0;          // 0: max(2000, 200 * T)
    double weight = 0.5;  // implicit weight
    // terminal data A = 1 is smooth, so no damped startup steps by default;
    // a first-order kink at t = T would pollute the Taylor-derivative checks
    int startup_implicit_steps = 0;
    double y_max_mass = 1e-10;   // tail mass defining the base truncation
    double y_max_safety = 1.5;   // multiplies the mass-based truncation
    std::optional<double> richardson_tol;  // half-grid error check when set
};

class BondSurface2F {
  public:
    double B(double tau) const;
    double A_at(double t, double y) const;        // cubic in y, linear in t
    double price(double t, double r, double y) const;  // bond_price_2f

    const Eigen::ArrayXd& y_grid() const { return y_grid_; }
    const Eigen::ArrayXd& t_grid() const { return t_grid_; }
    const Eigen::MatrixXd& A() const { return A_; }  // row y, col t
    const TwoFactorModel& model() const { return model_; }
    double maturity() const { return model_.rate.T; }
    double y_max() const { return y_grid_[y_grid_.size() - 1]; }
    // fraction of (t,y) grid columns where A is non-increasing in y;
    // reported, not asserted (monotonicity in y is not guaranteed)
    double monotone_in_y_fraction() const { return monotone_fraction_; }
    // half-grid Richardson estimate (NaN when the check was not requested)
    double richardson_error() const { return richardson_error_; }

  private:
    friend BondSurface2F solve_A_pde(const TwoFactorModel&, const StationaryDensity&,
                                     const Grid2F&);
    TwoFactorModel model_;
    Eigen::ArrayXd y_grid_;
    Eigen::ArrayXd t_grid_;
    Eigen::ArrayXd B_;  // cached B(T - t_j)
    Eigen::MatrixXd A_;
    double monotone_fraction_ = 0.0;
    double richardson_error_ = std::numeric_limits<double>::quiet_NaN();
};

BondSurface2F solve_A_pde(const TwoFactorModel& model, const StationaryDensity& density,
                          const Grid2F& grid = {});

struct PdeResidualReport {
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int n_points = 0;
    int n_y = 0;
    int n_t = 0;
};

// Finite-differences the assembled pi on interior sample points and reports
// the residual of the full two-factor PDE, confirming the separable ansatz.
PdeResidualReport verify_pi_pde(const BondSurface2F& surface, int r_samples = 12,
                                int t_samples = 24, int y_samples = 40);

}  // namespace tsq
