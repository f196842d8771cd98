#include "tsq/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "tsq/errors.hpp"

namespace tsq {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& origin, int row, const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ConfigError(origin + ": row " + std::to_string(row) + ": bad number '" + tok + "'");
    return v;
}

}  // namespace

CurveFile CurveFile::read(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(origin + ": empty file");
    auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "tau" || header[1] != "price" || header[2] != "yield")
        throw ConfigError(origin + ": header must start with tau,price,yield");

    CurveFile cf;
    cf.extra_names.assign(header.begin() + 3, header.end());
    std::vector<double> tau, price, yield;
    std::vector<std::vector<double>> extras(cf.extra_names.size());
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ConfigError(origin + ": row " + std::to_string(row) + ": expected " +
                              std::to_string(header.size()) + " fields");
        const double t = parse_field(origin, row, fields[0]);
        const double p = parse_field(origin, row, fields[1]);
        if (!tau.empty() && !(t > tau.back()))
            throw ConfigError(origin + ": row " + std::to_string(row) +
                              ": tau must be strictly increasing");
        if (!(p > 0.0))
            throw ConfigError(origin + ": row " + std::to_string(row) + ": price must be positive");
        tau.push_back(t);
        price.push_back(p);
        yield.push_back(parse_field(origin, row, fields[2]));
        for (std::size_t e = 0; e < extras.size(); ++e)
            extras[e].push_back(parse_field(origin, row, fields[3 + e]));
    }
    const auto n = static_cast<Eigen::Index>(tau.size());
    cf.tau = Eigen::Map<Eigen::ArrayXd>(tau.data(), n);
    cf.price = Eigen::Map<Eigen::ArrayXd>(price.data(), n);
    cf.yield = Eigen::Map<Eigen::ArrayXd>(yield.data(), n);
    for (auto& e : extras)
        cf.extra_columns.push_back(Eigen::Map<Eigen::ArrayXd>(e.data(), n));
    return cf;
}

CurveFile CurveFile::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file: " + path);
    return read(in, path);
}

void CurveFile::write(std::ostream& out) const {
    out << "tau,price,yield";
    for (const auto& name : extra_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < tau.size(); ++i) {
        out << format_g17(tau[i]) << ',' << format_g17(price[i]) << ',' << format_g17(yield[i]);
        for (const auto& col : extra_columns) out << ',' << format_g17(col[i]);
        out << '\n';
    }
}

void CurveFile::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    write(out);
}

}  // namespace tsq
