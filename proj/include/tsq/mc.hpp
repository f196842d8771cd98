#pragma once

// Monte-Carlo oracle for the two-factor model. Euler-Maruyama with full
// truncation (sqrt(max(y,0)) in diffusions, alpha(max(y,0)) in drifts),
// trapezoidal discounting, and a counter-based generator: the normals of
// path i, step j are a pure function of (seed, i, j), so estimates are
// bitwise reproducible at any thread count.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>

#include "tsq/density.hpp"
#include "tsq/model.hpp"

namespace tsq {

// Philox-4x64-10 block cipher (Salmon et al. constants).
struct Philox4x64 {
    static std::array<std::uint64_t, 4> block(std::uint64_t key0, std::uint64_t key1,
                                              std::array<std::uint64_t, 4> counter);
};

// two standard normals per (seed, stream, path, step) via Box-Muller
std::array<double, 2> counter_normals(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t path, std::uint64_t step);
// one uniform in (0,1)
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                       std::uint64_t step);

struct SimulationConfig {
    std::int64_t n_paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double r0 = 0.03;
    std::optional<double> y0;  // fixed initial dispersion; empty: sample from f
    bool antithetic = false;
    int threads = 0;  // 0: TSQ_THREADS or hardware; never affects the numbers

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // NaN for a single path
    std::int64_t n_paths = 0;
    // hypothesis-(A) probe of the risk-neutral dispersion drift
    // alpha(y) - lambda_tilde y (reported, pricing proceeds regardless)
    bool risk_neutral_drift_ok = true;
};

// E[exp(-int_0^T r)] under the pricing-measure drifts kappa(theta-r)-lambda y
// and alpha(y)-lambda_tilde y. `density` may be null when cfg.y0 is fixed.
McEstimate mc_bond_price(const TwoFactorModel& model, const StationaryDensity* density,
                         const SimulationConfig& cfg, double T);

struct StationarySampleOptions {
    double dt = 1e-3;
    double spacing = 0.5;  // years between collected samples
    std::uint64_t seed = 1;
    int histogram_bins = 64;
};

struct StationarySampleResult {
    Eigen::ArrayXd samples;         // sorted
    double sample_mean = 0.0;
    double sample_std_error = 0.0;
    double ks_distance = 0.0;       // sup-CDF distance to the quadrature CDF
    Eigen::ArrayXd histogram_edges;
    Eigen::ArrayXd histogram_density;
};

// One long trajectory of dy = alpha dt + omega sqrt(y) dw, sampled every
// `spacing` years after `burn_in` years.
StationarySampleResult mc_stationary_sample(const DriftFunction& drift, double omega,
                                            double burn_in, std::int64_t n,
                                            const StationaryDensity& density,
                                            const StationarySampleOptions& opts = {});

// deterministic pairwise (tree) sum; independent of chunking/thread count
double pairwise_sum(const double* data, std::int64_t n);

int resolve_thread_count(int requested);

}  // namespace tsq
