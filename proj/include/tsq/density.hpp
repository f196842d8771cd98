#pragma once

// Stationary (limiting) density of the dispersion process
//   f(y) = C y^{2 alpha(0)/omega^2 - 1} exp((2/omega^2) int_1^y alpha_hat),
// valid under hypothesis (A), with f = 0 on y <= 0. Owns its normalization,
// truncation bound, moment functionals and a cumulative table for CDF /
// quantile queries. Immutable after construction.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "tsq/drift.hpp"
#include "tsq/model.hpp"

namespace tsq {

class StationaryDensity {
  public:
    StationaryDensity(DriftFunction drift, double omega, double rel_tol = 1e-10);

    // density_eval: 0 for y <= 0, C y^(...) exp(...) above
    double operator()(double y) const;
    // alternative published form C y^-1 exp((2/w^2) int_1^y alpha/xi),
    // algebraically identical to operator(), evaluated independently
    double eval_first_form(double y) const;

    // <y^k> for k = 0..8, precomputed by adaptive quadrature
    double moment(int k) const;
    // <psi> = int psi(y) f(y) dy over (0, y_max]
    double average(const std::function<double(double)>& psi) const;

    double cdf(double y) const;
    double quantile(double p) const;

    double y_max() const { return y_max_; }
    // 2 alpha(0)/omega^2 - 1, the power-law exponent at 0
    double exponent() const { return exponent_; }
    double normalization() const;  // the constant C
    double quadrature_tol() const { return rel_tol_; }
    const DriftFunction& drift() const { return drift_; }
    double omega() const { return omega_; }
    const ValidationReport& hypothesis_report() const { return report_; }
    // adaptive panel edges from the normalization integral; downstream
    // quadratures reuse them
    const std::vector<double>& panels() const { return panels_; }

  private:
    double log_unnormalized(double y) const;  // ln(y^p exp((2/w^2) Ihat(y)))
    double alpha_hat_integral(double a, double b) const;
    void build_cumulative_table();

    DriftFunction drift_;
    double omega_ = 0.0;
    double rel_tol_ = 1e-10;
    double exponent_ = 0.0;
    double y_max_ = 0.0;
    double log_C_ = 0.0;  // f(y) = exp(log_C_ + log_unnormalized(y))
    ValidationReport report_;
    std::vector<double> panels_;
    std::array<double, 9> moments_{};
    // cumulative table for cdf/quantile
    Eigen::ArrayXd table_y_;
    Eigen::ArrayXd table_F_;
    // sampled antiderivative of alpha_hat for the general variant
    Eigen::ArrayXd ihat_y_;
    Eigen::ArrayXd ihat_v_;
};

}  // namespace tsq
