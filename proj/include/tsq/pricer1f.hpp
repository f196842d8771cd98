#pragma once

// One-factor bond pricing: Vasicek closed forms and a generic
// weighted-implicit finite-difference solver for the pricing PDE
//   P_t + (mu - risk_premium) P_r + (sigma^2/2) P_rr - r P = 0,  P(T,.) = 1,
// which covers the CKLS family.

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>

#include "tsq/model.hpp"

namespace tsq {

// B(tau) = (1 - e^{-kappa tau}) / kappa, cancellation-safe
double vasicek_B(double kappa, double tau);
double vasicek_ln_A(const VasicekParams& p, double tau);
// closed-form price at time-to-maturity tau
double vasicek_price_tau(const VasicekParams& p, double tau, double r);
// closed-form price at calendar time t <= p.T
double vasicek_price(const VasicekParams& p, double t, double r);

struct TermStructure {
    Eigen::ArrayXd maturities;
    Eigen::ArrayXd prices;
    Eigen::ArrayXd yields;
};

// prices from any tau -> P functional, yields via yield_from_price
TermStructure term_structure(const std::function<double(double)>& price_at_tau,
                             const Eigen::ArrayXd& maturities);

struct Grid1F {
    int n_r = 800;
    int n_t = 0;          // 0: max(200, 50 * T)
    double weight = 0.5;  // implicit weight; 2 fully implicit startup steps
    int startup_implicit_steps = 2;
    std::optional<double> richardson_tol;  // half-grid error check when set
};

// PDE coefficients as functions of (t, r)
struct Coefficients1F {
    std::function<double(double, double)> mu;
    std::function<double(double, double)> sigma;
    std::function<double(double, double)> risk_premium;  // lambda * sigma term
};

class PriceSurface1F {
  public:
    double price(double t, double r) const;  // cubic in r, linear in t

    const Eigen::ArrayXd& r_grid() const { return r_grid_; }
    const Eigen::ArrayXd& t_grid() const { return t_grid_; }
    const Eigen::MatrixXd& values() const { return values_; }  // row r, col t
    double maturity() const { return T_; }
    double scheme_weight() const { return weight_; }
    // half-grid Richardson estimate (NaN when the check was not requested)
    double richardson_error() const { return richardson_error_; }

  private:
    friend PriceSurface1F solve_1f_pde(const Coefficients1F&, double, double, double,
                                       const Grid1F&);
    Eigen::ArrayXd r_grid_;
    Eigen::ArrayXd t_grid_;
    Eigen::MatrixXd values_;
    double T_ = 0.0;
    double weight_ = 0.5;
    double richardson_error_ = std::numeric_limits<double>::quiet_NaN();
};

PriceSurface1F solve_1f_pde(const Coefficients1F& coef, double r_min, double r_max, double T,
                            const Grid1F& grid = {});

// convenience wrappers with the default domains
PriceSurface1F solve_vasicek_pde(const VasicekParams& p, const Grid1F& grid = {});
PriceSurface1F solve_ckls_pde(const CKLSParams& p, const Grid1F& grid = {});

double vasicek_r_hi(const VasicekParams& p);
double vasicek_r_lo(const VasicekParams& p);
double ckls_r_hi(const CKLSParams& p);

}  // namespace tsq
