#pragma once

// Curve files: CSV with header `tau,price,yield` (plus optional extra
// columns), '.' decimal point, comma separator, newline-terminated rows.
// All floats print with 17 significant digits so files round-trip exactly.

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsq {

std::string format_g17(double v);

struct CurveFile {
    Eigen::ArrayXd tau;
    Eigen::ArrayXd price;
    Eigen::ArrayXd yield;
    std::vector<std::string> extra_names;
    std::vector<Eigen::ArrayXd> extra_columns;

    static CurveFile read(std::istream& in, const std::string& origin = "<csv>");
    static CurveFile read_file(const std::string& path);
    void write(std::ostream& out) const;
    void write_file(const std::string& path) const;
};

}  // namespace tsq
