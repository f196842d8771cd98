#pragma once

// INI-style model configuration: flat `key = value` lines under [section]
// headers. Unknown keys are rejected with their line number.

#include <cstdint>
#include <string>

#include "tsq/model.hpp"

namespace tsq {

struct NumericsConfig {
    int n_y = 400;
    int n_t = 0;  // 0: solver default
    int n_r = 800;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::int64_t paths = 100000;
    double dt = 1e-3;
};

struct ModelConfig {
    TwoFactorModel model;
    NumericsConfig numerics;
    std::string drift_spec;  // raw drift value, echoed in reports

    static ModelConfig load_file(const std::string& path);
    static ModelConfig parse(const std::string& text, const std::string& origin = "<config>");
};

}  // namespace tsq
