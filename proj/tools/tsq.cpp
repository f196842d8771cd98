// tsq: term-structure computations for the two-factor stochastic-volatility
// short-rate model. Subcommands: density, curve, surface, nonexist, mc,
// mcsample, compare.
// Exit codes: 0 success, 2 configuration/input error, 3 hypothesis-(A)
// violation, 4 numerical non-convergence.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "tsq/averaging.hpp"
#include "tsq/config.hpp"
#include "tsq/csv.hpp"
#include "tsq/density.hpp"
#include "tsq/errors.hpp"
#include "tsq/mc.hpp"
#include "tsq/no1f.hpp"
#include "tsq/pricer2f.hpp"

namespace {

using namespace tsq;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file: " + path);
    return file;
}

Grid2F grid_from(const NumericsConfig& n) {
    Grid2F g;
    g.n_y = n.n_y;
    g.n_t = n.n_t;
    return g;
}

int cmd_density(const std::string& config_path, int points, const std::string& out_path) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "y,f\n";
    const double lo = 1e-6 * f.y_max();
    for (int i = 0; i < points; ++i) {
        const double y =
            points == 1 ? f.y_max() : lo * std::pow(f.y_max() / lo, i / (points - 1.0));
        out << format_g17(y) << ',' << format_g17(f(y)) << '\n';
    }
    return 0;
}

int cmd_curve(const std::string& config_path, double r, double tau_max, int steps,
              const std::string& out_path, const std::vector<double>& per_y,
              const std::vector<std::string>& per_y_raw) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    if (tau_max <= 0.0) tau_max = cfg.model.rate.T;
    if (tau_max > cfg.model.rate.T + 1e-12)
        throw ConfigError("--tau-max exceeds the configured maturity T");
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    BondSurface2F surface = solve_A_pde(cfg.model, f, grid_from(cfg.numerics));
    AveragedPrice avg = average_a(surface, f);

    CurveFile out;
    out.tau.resize(steps);
    out.price.resize(steps);
    out.yield.resize(steps);
    for (std::size_t q = 0; q < per_y.size(); ++q) {
        out.extra_names.push_back("yield_y" + per_y_raw[q]);
        out.extra_columns.emplace_back(steps);
    }
    const double T = cfg.model.rate.T;
    for (int i = 1; i <= steps; ++i) {
        const double tau = tau_max * i / steps;
        const double p = avg.price_at_tau(tau, r);
        out.tau[i - 1] = tau;
        out.price[i - 1] = p;
        out.yield[i - 1] = yield_from_price(p, tau);
        for (std::size_t q = 0; q < per_y.size(); ++q)
            out.extra_columns[q][i - 1] =
                yield_from_price(surface.price(T - tau, r, per_y[q]), tau);
    }
    std::ofstream file;
    out.write(open_out(file, out_path));
    return 0;
}

int cmd_surface(const std::string& config_path, const std::vector<double>& times,
                const std::vector<std::string>& times_raw, const std::string& out_path) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    const BondSurface2F surface = solve_A_pde(cfg.model, f, grid_from(cfg.numerics));
    for (double t : times)
        if (t < 0.0 || t > cfg.model.rate.T + 1e-12)
            throw ConfigError("--t values must lie in [0, T]");
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "y";
    for (const auto& raw : times_raw) out << ",A_t" << raw;
    out << '\n';
    for (Eigen::Index i = 0; i < surface.y_grid().size(); ++i) {
        out << format_g17(surface.y_grid()[i]);
        for (double t : times) out << ',' << format_g17(surface.A_at(t, surface.y_grid()[i]));
        out << '\n';
    }
    return 0;
}

int cmd_nonexist(const std::string& config_path, const std::string& out_path) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    const TaylorReport rep = build_taylor_report(cfg.model, f);
    const NonexistenceResult& res = rep.residuals;
    BondSurface2F surface = solve_A_pde(cfg.model, f, grid_from(cfg.numerics));
    AveragedPrice avg = average_a(surface, f);
    const ClosestVasicek cv = closest_vasicek(cfg.model, f, avg);

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "# nonexistence report\n";
    out << "model: kappa=" << format_g17(cfg.model.rate.kappa)
        << " theta=" << format_g17(cfg.model.rate.theta)
        << " lambda=" << format_g17(cfg.model.rate.lambda)
        << " lambda_tilde=" << format_g17(cfg.model.vol.lambda_tilde)
        << " omega=" << format_g17(cfg.model.vol.omega)
        << " T=" << format_g17(cfg.model.rate.T) << '\n';
    out << "drift: " << cfg.drift_spec << '\n';
    out << "sigma_sq=" << format_g17(rep.sigma_sq) << '\n';
    out << "d=" << format_g17(rep.d) << '\n';
    out << "alpha_sq_avg=" << format_g17(rep.alpha_sq_avg) << '\n';
    out << "K=" << format_g17(rep.candidate.K) << '\n';
    out << "omega_bar_sq=" << format_g17(rep.candidate.omega_bar_sq)
        << (rep.candidate.negative_variance ? " (negative-variance flag)" : "") << '\n';
    out << "order,route1_published,route1_derived,route2_published,route2_oracle\n";
    for (int k = 1; k <= 4; ++k) {
        out << k << ',' << format_g17(rep.route1.published[static_cast<std::size_t>(k)]) << ','
            << format_g17(rep.route1.derived[static_cast<std::size_t>(k)]) << ','
            << format_g17(rep.route2.published[static_cast<std::size_t>(k)]) << ','
            << format_g17(rep.route2.oracle[static_cast<std::size_t>(k)]) << '\n';
    }
    out << "route1_order4_discrepancy=" << (rep.route1.mismatch ? "yes" : "no") << '\n';
    out << "route2_discrepancy=" << (rep.route2.mismatch ? "yes" : "no") << '\n';
    out << "order3_consistent=" << (rep.order3_consistent ? "yes" : "no") << '\n';
    out << "residual_published=" << format_g17(res.residual_published) << '\n';
    out << "residual_derived="
        << (res.derived_available ? format_g17(res.residual_derived) : "unavailable") << '\n';
    if (!res.annotation.empty()) out << "note: " << res.annotation << '\n';
    out << "closest_vasicek: theta=" << format_g17(cv.surrogate.theta)
        << " sigma=" << format_g17(cv.surrogate.sigma) << '\n';
    out << "closest_vasicek_max_gap=" << format_g17(cv.max_gap) << " at tau="
        << format_g17(cv.tau_at_max) << '\n';
    out << "closest_vasicek_tau_first_gap=" << format_g17(cv.tau_first_gap) << '\n';
    out << "closest_vasicek_loglog_slope=" << format_g17(cv.loglog_slope) << '\n';
    out << "verdict: "
        << (res.verdict ? "NO ONE-FACTOR MODEL matches the averaged term structure"
                        : "no mismatch detected at tested orders")
        << '\n';
    return 0;
}

int cmd_mc(const std::string& config_path, std::optional<std::int64_t> paths,
           std::optional<double> dt, std::optional<std::uint64_t> seed,
           std::optional<double> r, std::optional<double> tau, std::optional<double> y0) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    SimulationConfig sim;
    sim.n_paths = paths.value_or(cfg.numerics.paths);
    sim.dt = dt.value_or(cfg.numerics.dt);
    sim.seed = seed.value_or(cfg.numerics.seed);
    sim.r0 = r.value_or(cfg.model.rate.theta);
    if (y0) sim.y0 = *y0;
    const double T = tau.value_or(cfg.model.rate.T);
    if (T > cfg.model.rate.T + 1e-12) throw ConfigError("--tau exceeds the configured maturity T");

    std::unique_ptr<StationaryDensity> f;
    if (!sim.y0)
        f = std::make_unique<StationaryDensity>(cfg.model.vol.drift, cfg.model.vol.omega,
                                                cfg.numerics.tol);
    const McEstimate est = mc_bond_price(cfg.model, f.get(), sim, T);
    std::cout << format_g17(est.mean) << ','
              << (est.n_paths > 1 ? format_g17(est.std_error) : "") << ',' << est.n_paths
              << '\n';
    if (!est.risk_neutral_drift_ok)
        std::cerr << "warning: risk-neutral dispersion drift fails the hypothesis-(A) probe\n";
    return 0;
}

int cmd_mcsample(const std::string& config_path, std::int64_t n, double burn_in,
                 double spacing, std::optional<double> dt, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    StationarySampleOptions opts;
    opts.dt = dt.value_or(cfg.numerics.dt);
    opts.spacing = spacing;
    opts.seed = seed.value_or(cfg.numerics.seed);
    const StationarySampleResult res =
        mc_stationary_sample(cfg.model.vol.drift, cfg.model.vol.omega, burn_in, n, f, opts);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "y\n";
    for (Eigen::Index i = 0; i < res.samples.size(); ++i)
        out << format_g17(res.samples[i]) << '\n';
    std::cerr << "ks_distance=" << format_g17(res.ks_distance)
              << " sample_mean=" << format_g17(res.sample_mean) << '\n';
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& market_path, double r,
                const std::string& out_path) {
    const ModelConfig cfg = ModelConfig::load_file(config_path);
    const CurveFile market = CurveFile::read_file(market_path);
    if (market.tau.size() == 0) throw ConfigError(market_path + ": no data rows");
    if (market.tau[market.tau.size() - 1] > cfg.model.rate.T + 1e-12)
        throw ConfigError(market_path + ": market tau exceeds the configured maturity T");
    StationaryDensity f(cfg.model.vol.drift, cfg.model.vol.omega, cfg.numerics.tol);
    BondSurface2F surface = solve_A_pde(cfg.model, f, grid_from(cfg.numerics));
    AveragedPrice avg = average_a(surface, f);

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "tau,model_yield,market_yield,gap\n";
    for (Eigen::Index i = 0; i < market.tau.size(); ++i) {
        const double tau = market.tau[i];
        const double model_yield = yield_from_price(avg.price_at_tau(tau, r), tau);
        const double gap = model_yield - market.yield[i];
        out << format_g17(tau) << ',' << format_g17(model_yield) << ','
            << format_g17(market.yield[i]) << ',' << format_g17(gap) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"term-structure toolkit for the two-factor stochastic-volatility model"};
    app.require_subcommand(1);

    std::string config_path, out_path, market_path;
    int points = 200;
    double r = 0.03, tau_max = 0.0;
    int steps = 100;
    std::vector<std::string> per_y_raw;
    std::optional<std::int64_t> mc_paths;
    std::optional<double> mc_dt, mc_r, mc_tau, mc_y0;
    std::optional<std::uint64_t> mc_seed;

    auto* density = app.add_subcommand("density", "stationary dispersion density as CSV (y,f)");
    density->add_option("--config", config_path, "model config file")->required();
    density->add_option("--points", points, "log-spaced output rows")
        ->check(CLI::PositiveNumber);
    density->add_option("--out", out_path, "output file (default stdout)");

    auto* curve = app.add_subcommand("curve", "averaged term structure as a curve file");
    curve->add_option("--config", config_path, "model config file")->required();
    curve->add_option("--r", r, "short rate")->required();
    curve->add_option("--tau-max", tau_max, "largest maturity (default: T)");
    curve->add_option("--steps", steps, "number of maturities")->check(CLI::PositiveNumber);
    curve->add_option("--per-y", per_y_raw,
                      "comma-separated dispersion levels for un-averaged yield columns")
        ->delimiter(',');
    curve->add_option("--out", out_path, "output file (default stdout)");

    std::vector<std::string> surface_t_raw{"0"};
    auto* surface = app.add_subcommand("surface", "A(t,y) slices of the solved surface as CSV");
    surface->add_option("--config", config_path, "model config file")->required();
    surface->add_option("--t", surface_t_raw, "comma-separated slice times (default 0)")
        ->delimiter(',');
    surface->add_option("--out", out_path, "output file (default stdout)");

    auto* nonexist = app.add_subcommand("nonexist", "non-existence report");
    nonexist->add_option("--config", config_path, "model config file")->required();
    nonexist->add_option("--out", out_path, "output file (default stdout)");

    auto* mc = app.add_subcommand("mc", "Monte-Carlo bond price: mean,stderr,paths");
    mc->add_option("--config", config_path, "model config file")->required();
    mc->add_option("--paths", mc_paths, "path count");
    mc->add_option("--dt", mc_dt, "Euler step (years)");
    mc->add_option("--seed", mc_seed, "64-bit seed");
    mc->add_option("--r", mc_r, "initial short rate");
    mc->add_option("--tau", mc_tau, "bond maturity (default: T)");
    mc->add_option("--y0", mc_y0, "fixed initial dispersion (default: sample from f)");

    std::int64_t sample_n = 10000;
    double sample_burn = 50.0, sample_spacing = 0.5;
    auto* mcsample = app.add_subcommand("mcsample", "dispersion samples from a long path as CSV");
    mcsample->add_option("--config", config_path, "model config file")->required();
    mcsample->add_option("--n", sample_n, "number of samples")->check(CLI::PositiveNumber);
    mcsample->add_option("--burn-in", sample_burn, "burn-in (years)");
    mcsample->add_option("--spacing", sample_spacing, "years between samples");
    mcsample->add_option("--dt", mc_dt, "Euler step (years)");
    mcsample->add_option("--seed", mc_seed, "64-bit seed");
    mcsample->add_option("--out", out_path, "output file (default stdout)");

    auto* compare = app.add_subcommand("compare", "overlay a market curve file");
    compare->add_option("--config", config_path, "model config file")->required();
    compare->add_option("--market", market_path, "market curve CSV")->required();
    compare->add_option("--r", r, "short rate")->required();
    compare->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help() << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand(density)) return cmd_density(config_path, points, out_path);
        if (app.got_subcommand(curve)) {
            std::vector<double> per_y;
            for (const auto& tok : per_y_raw) {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end == tok.c_str() || *end != '\0')
                    throw ConfigError("--per-y: bad number '" + tok + "'");
                per_y.push_back(v);
            }
            return cmd_curve(config_path, r, tau_max, steps, out_path, per_y, per_y_raw);
        }
        if (app.got_subcommand(surface)) {
            std::vector<double> times;
            for (const auto& tok : surface_t_raw) {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end == tok.c_str() || *end != '\0')
                    throw ConfigError("--t: bad number '" + tok + "'");
                times.push_back(v);
            }
            return cmd_surface(config_path, times, surface_t_raw, out_path);
        }
        if (app.got_subcommand(nonexist)) return cmd_nonexist(config_path, out_path);
        if (app.got_subcommand(mcsample))
            return cmd_mcsample(config_path, sample_n, sample_burn, sample_spacing, mc_dt,
                                mc_seed, out_path);
        if (app.got_subcommand(mc))
            return cmd_mc(config_path, mc_paths, mc_dt, mc_seed, mc_r, mc_tau, mc_y0);
        if (app.got_subcommand(compare)) return cmd_compare(config_path, market_path, r, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const OutOfGrid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const HypothesisAViolated& e) {
        std::cerr << "error: hypothesis (A) violated: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
