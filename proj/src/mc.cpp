#include "tsq/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

inline void philox_round(std::uint64_t& x0, std::uint64_t& x1, std::uint64_t& x2,
                         std::uint64_t& x3, std::uint64_t k0, std::uint64_t k1) {
    constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t M1 = 0xCA5A826395121157ULL;
    const __uint128_t p0 = static_cast<__uint128_t>(M0) * x0;
    const __uint128_t p1 = static_cast<__uint128_t>(M1) * x2;
    const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
    const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
    const std::uint64_t y0 = hi1 ^ x1 ^ k0;
    const std::uint64_t y1 = lo1;
    const std::uint64_t y2 = hi0 ^ x3 ^ k1;
    const std::uint64_t y3 = lo0;
    x0 = y0; x1 = y1; x2 = y2; x3 = y3;
}

constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::uint64_t key0, std::uint64_t key1,
                                               std::array<std::uint64_t, 4> ctr) {
    std::uint64_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
    std::uint64_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
        philox_round(x0, x1, x2, x3, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
}

namespace {

inline double to_open_unit(std::uint64_t w) {
    // (0,1): shift into 53 bits, offset by half an ulp
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<double, 2> counter_normals(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t path, std::uint64_t step) {
    const auto w = Philox4x64::block(seed, stream, {path, step, 0, 0});
    const double u1 = to_open_unit(w[0]);
    const double u2 = to_open_unit(w[1]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925287 * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                       std::uint64_t step) {
    return to_open_unit(Philox4x64::block(seed, stream, {path, step, 0, 0})[0]);
}

double pairwise_sum(const double* data, std::int64_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::int64_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::int64_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TSQ_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void SimulationConfig::validate() const {
    if (n_paths < 1) throw InvalidInput("mc: path count must be >= 1");
    if (antithetic && n_paths % 2 != 0)
        throw InvalidInput("mc: antithetic mode needs an even path count");
    if (!(dt > 0.0)) throw InvalidInput("mc: dt must be positive");
    if (!std::isfinite(r0)) throw InvalidInput("mc: non-finite r0");
}

namespace {

// one path of the risk-adjusted two-factor system; returns exp(-int r dt)
double simulate_discount(const TwoFactorModel& m, double r0, double y_init, double dt,
                         std::int64_t n_steps, double T, std::uint64_t seed,
                         std::uint64_t path, double z_sign) {
    const double kappa = m.rate.kappa, theta = m.rate.theta, lambda = m.rate.lambda;
    const double lt = m.vol.lambda_tilde, omega = m.vol.omega;
    const DriftFunction& alpha = m.vol.drift;
    const double sdt = std::sqrt(dt);
    double r = r0, y = y_init;
    double integral = 0.0;
    double t = 0.0;
    for (std::int64_t j = 0; j < n_steps; ++j) {
        const double step = std::min(dt, T - t);
        const auto z = counter_normals(seed, 1, path, static_cast<std::uint64_t>(j));
        const double yp = std::max(y, 0.0);  // full truncation
        const double sq = std::sqrt(yp);
        const double r_next = r + (kappa * (theta - r) - lambda * yp) * step +
                              sq * (step == dt ? sdt : std::sqrt(step)) * z_sign * z[0];
        const double y_next = y + (alpha(yp) - lt * yp) * step +
                              omega * sq * (step == dt ? sdt : std::sqrt(step)) * z_sign * z[1];
        integral += 0.5 * (r + r_next) * step;
        r = r_next;
        y = y_next;
        t += step;
    }
    return std::exp(-integral);
}

}  // namespace

McEstimate mc_bond_price(const TwoFactorModel& model, const StationaryDensity* density,
                         const SimulationConfig& cfg, double T) {
    model.rate.validate();
    cfg.validate();
    if (!(T > 0.0)) throw InvalidInput("mc_bond_price: T must be positive");
    if (!cfg.y0 && density == nullptr)
        throw InvalidInput("mc_bond_price: need a stationary density to sample y0");
    if (!cfg.y0 && !density->hypothesis_report().pass)
        throw HypothesisAViolated("mc_bond_price: stationary y0 requires hypothesis (A)");

    McEstimate est;
    est.n_paths = cfg.n_paths;
    {
        // probe the risk-neutral dispersion drift; large lambda_tilde can
        // break hypothesis (A) for the adjusted process
        const double lt = model.vol.lambda_tilde;
        const DriftFunction& alpha = model.vol.drift;
        if (model.vol.omega > 0.0) {
            const double feller = 2.0 * alpha(0.0) / (model.vol.omega * model.vol.omega);
            bool limsup = true;
            for (double y : {1e2, 1e3, 1e4})
                if (!((alpha(y) - lt * y) / y < 0.0)) limsup = false;
            est.risk_neutral_drift_ok = feller > 1.0 && limsup;
        }
    }

    const auto n_steps = static_cast<std::int64_t>(std::ceil(T / cfg.dt - 1e-12));
    std::vector<double> discounts(static_cast<std::size_t>(cfg.n_paths));

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const std::uint64_t base_path =
                cfg.antithetic ? static_cast<std::uint64_t>(i / 2) : static_cast<std::uint64_t>(i);
            const double sign = cfg.antithetic && (i % 2 == 1) ? -1.0 : 1.0;
            double y_init;
            if (cfg.y0) {
                y_init = *cfg.y0;
            } else {
                const double u = counter_uniform(cfg.seed, 2, base_path, 0);
                y_init = density->quantile(u);
            }
            discounts[static_cast<std::size_t>(i)] = simulate_discount(
                model, cfg.r0, y_init, cfg.dt, n_steps, T, cfg.seed, base_path, sign);
        }
    };

    const int threads = std::min<std::int64_t>(resolve_thread_count(cfg.threads), cfg.n_paths);
    if (threads <= 1) {
        run_range(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::int64_t chunk = (cfg.n_paths + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(cfg.n_paths, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // antithetic pairs are dependent: statistics run over pair averages
    std::vector<double> units;
    if (cfg.antithetic) {
        units.resize(static_cast<std::size_t>(cfg.n_paths / 2));
        for (std::size_t k = 0; k < units.size(); ++k)
            units[k] = 0.5 * (discounts[2 * k] + discounts[2 * k + 1]);
    } else {
        units = std::move(discounts);
    }
    const auto n_units = static_cast<std::int64_t>(units.size());
    const double sum = pairwise_sum(units.data(), n_units);
    est.mean = sum / static_cast<double>(n_units);
    if (n_units > 1) {
        std::vector<double> sq(units.size());
        for (std::size_t i = 0; i < units.size(); ++i) {
            const double d = units[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq.data(), n_units) / static_cast<double>(n_units - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n_units));
    } else {
        est.std_error = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

StationarySampleResult mc_stationary_sample(const DriftFunction& drift, double omega,
                                            double burn_in, std::int64_t n,
                                            const StationaryDensity& density,
                                            const StationarySampleOptions& opts) {
    if (!(omega > 0.0)) throw InvalidInput("mc_stationary_sample: omega must be positive");
    if (n < 1) throw InvalidInput("mc_stationary_sample: need at least one sample");
    const ValidationReport rep = validate_hypothesis_A(drift, omega);
    if (!rep.pass || !density.hypothesis_report().pass)
        throw HypothesisAViolated("mc_stationary_sample: hypothesis (A) fails");

    const double dt = opts.dt;
    const double sdt = std::sqrt(dt);
    const auto burn_steps = static_cast<std::int64_t>(std::ceil(burn_in / dt));
    const auto gap_steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::lround(opts.spacing / dt)));

    double y = density.moment(1);  // start at the stationary mean
    std::uint64_t step = 0;
    auto advance = [&](std::int64_t steps) {
        for (std::int64_t j = 0; j < steps; ++j) {
            // two normals per block; use both across consecutive steps
            const auto z = counter_normals(opts.seed, 3, 0, step / 2);
            const double zj = (step % 2 == 0) ? z[0] : z[1];
            const double yp = std::max(y, 0.0);
            y = y + drift(yp) * dt + omega * std::sqrt(yp) * sdt * zj;
            ++step;
        }
    };

    advance(burn_steps);
    Eigen::ArrayXd samples(n);
    for (std::int64_t i = 0; i < n; ++i) {
        advance(gap_steps);
        samples[i] = std::max(y, 0.0);  // truncation applied at readout
    }

    std::sort(samples.data(), samples.data() + samples.size());
    StationarySampleResult res;
    res.samples = samples;
    res.sample_mean = samples.mean();
    const double var = (samples - res.sample_mean).square().sum() /
                       static_cast<double>(std::max<std::int64_t>(1, n - 1));
    res.sample_std_error = std::sqrt(var / static_cast<double>(n));

    double ks = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double F = density.cdf(samples[i]);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        ks = std::max({ks, std::fabs(F - hi), std::fabs(F - lo)});
    }
    res.ks_distance = ks;

    const int bins = std::max(4, opts.histogram_bins);
    const double y_hi = samples[samples.size() - 1] * 1.0000001;
    res.histogram_edges = Eigen::ArrayXd::LinSpaced(bins + 1, 0.0, y_hi);
    res.histogram_density = Eigen::ArrayXd::Zero(bins);
    const double width = y_hi / bins;
    for (std::int64_t i = 0; i < n; ++i) {
        auto b = static_cast<Eigen::Index>(samples[i] / width);
        b = std::min<Eigen::Index>(b, bins - 1);
        res.histogram_density[b] += 1.0;
    }
    res.histogram_density /= static_cast<double>(n) * width;
    return res;
}

}  // namespace tsq
