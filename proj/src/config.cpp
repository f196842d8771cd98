#include "tsq/config.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& origin, int line, const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(origin, line, "not a decimal number: '" + tok + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

DriftFunction parse_drift(const std::string& origin, int line, const std::string& value) {
    const auto toks = split_ws(value);
    if (toks.empty()) fail(origin, line, "empty drift specification");
    const std::string& kind = toks[0];
    std::vector<double> args;
    for (std::size_t i = 1; i < toks.size(); ++i)
        args.push_back(parse_number(origin, line, toks[i]));
    try {
        if (kind == "linear") {
            if (args.size() != 2) fail(origin, line, "drift linear needs: kappa_y theta_y");
            return DriftFunction::linear(args[0], args[1]);
        }
        if (kind == "cubic") {
            if (args.size() != 4) fail(origin, line, "drift cubic needs: c y1 y2 y3");
            return DriftFunction::cubic(args[0], args[1], args[2], args[3]);
        }
        if (kind == "poly") {
            if (args.empty()) fail(origin, line, "drift poly needs coefficients c0 c1 ...");
            return DriftFunction::polynomial(args);
        }
    } catch (const InvalidInput& e) {
        fail(origin, line, std::string("bad drift parameters: ") + e.what());
    }
    fail(origin, line, "unknown drift kind '" + kind + "' (linear|cubic|poly)");
}

}  // namespace

ModelConfig ModelConfig::parse(const std::string& text, const std::string& origin) {
    ModelConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    std::set<std::string> seen;
    bool have_drift = false;
    std::optional<double> risk_lambda, risk_lambda_tilde;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "shortrate" && section != "volatility" && section != "risk" &&
                section != "numerics")
                fail(origin, line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(origin, line_no, "expected key = value");
        if (section.empty()) fail(origin, line_no, "key outside any [section]");
        const std::string qual = section + "." + key;
        if (!seen.insert(qual).second) fail(origin, line_no, "duplicate key '" + qual + "'");

        if (section == "shortrate") {
            if (key == "kappa") cfg.model.rate.kappa = parse_number(origin, line_no, value);
            else if (key == "theta") cfg.model.rate.theta = parse_number(origin, line_no, value);
            else if (key == "lambda") cfg.model.rate.lambda = parse_number(origin, line_no, value);
            else if (key == "T") cfg.model.rate.T = parse_number(origin, line_no, value);
            else fail(origin, line_no, "unknown key '" + qual + "'");
        } else if (section == "volatility") {
            if (key == "omega") cfg.model.vol.omega = parse_number(origin, line_no, value);
            else if (key == "lambda_tilde")
                cfg.model.vol.lambda_tilde = parse_number(origin, line_no, value);
            else if (key == "drift") {
                cfg.model.vol.drift = parse_drift(origin, line_no, value);
                cfg.drift_spec = value;
                have_drift = true;
            } else fail(origin, line_no, "unknown key '" + qual + "'");
        } else if (section == "risk") {
            // optional overrides of the market prices of risk, applied after
            // parsing so section order does not matter
            if (key == "lambda") risk_lambda = parse_number(origin, line_no, value);
            else if (key == "lambda_tilde")
                risk_lambda_tilde = parse_number(origin, line_no, value);
            else fail(origin, line_no, "unknown key '" + qual + "'");
        } else {  // numerics
            if (key == "n_y") cfg.numerics.n_y = static_cast<int>(parse_number(origin, line_no, value));
            else if (key == "n_t") cfg.numerics.n_t = static_cast<int>(parse_number(origin, line_no, value));
            else if (key == "n_r") cfg.numerics.n_r = static_cast<int>(parse_number(origin, line_no, value));
            else if (key == "tol") cfg.numerics.tol = parse_number(origin, line_no, value);
            else if (key == "seed") {
                const double v = parse_number(origin, line_no, value);
                if (v < 0.0) fail(origin, line_no, "seed must be non-negative");
                cfg.numerics.seed = static_cast<std::uint64_t>(v);
            } else if (key == "paths") {
                const double v = parse_number(origin, line_no, value);
                if (v < 1.0) fail(origin, line_no, "paths must be at least 1");
                cfg.numerics.paths = static_cast<std::int64_t>(v);
            }
            else if (key == "dt") cfg.numerics.dt = parse_number(origin, line_no, value);
            else fail(origin, line_no, "unknown key '" + qual + "'");
        }
    }

    for (const char* req : {"shortrate.kappa", "shortrate.theta", "shortrate.lambda",
                            "shortrate.T", "volatility.omega", "volatility.lambda_tilde"})
        if (!seen.count(req)) throw ConfigError(origin + ": missing required key " + std::string(req));
    if (!have_drift) throw ConfigError(origin + ": missing required key volatility.drift");
    if (risk_lambda) cfg.model.rate.lambda = *risk_lambda;
    if (risk_lambda_tilde) cfg.model.vol.lambda_tilde = *risk_lambda_tilde;

    try {
        cfg.model.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ModelConfig ModelConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

}  // namespace tsq
