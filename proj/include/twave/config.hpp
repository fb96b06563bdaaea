#pragma once

#include "twave/coefficients.hpp"
#include "twave/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twave {

// Grid of symmetric power-law instances (d = u^delta (1-u)^delta,
// rho = u^r (1-u)^r, f = 0, g = 1). Combinations violating the existence
// conditions are skipped.
struct PowerGrid {
    std::vector<double> p, delta, r;
    bool empty() const { return p.empty() || delta.empty() || r.empty(); }
};

// count speeds evenly spaced on [from, to], offsets from c* when relative.
struct SpeedRange {
    double from = 0.0;
    double to = 0.0;
    int count = 0;
    bool relative = true;
};

struct RunConfig {
    CoefficientSet problem;
    bool has_problem = false;
    Json problem_json;  // echoed into reports

    double tol = 1e-4;
    int grid = 1024;
    std::optional<double> c;
    std::vector<double> k;
    double t_min = -20.0;
    double t_max = 20.0;
    double output_dt = 0.01;
    double u_floor = 1e-6;
    std::string out = ".";

    std::optional<PowerGrid> power_grid;
    std::optional<SpeedRange> speeds;
};

// Builds a coefficient set from the problem object. Throws Error(config) on
// missing or ill-typed keys and SyntaxError on malformed expressions.
CoefficientSet parse_problem(const Json& problem);

// Throws Error(config) on schema or value errors.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

// Tolerances positive, grid >= 16, window ordered, speed range non-empty.
void validate_config(const RunConfig& cfg);

} // namespace twave
