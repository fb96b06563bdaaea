#pragma once

#include "twave/coefficients.hpp"
#include "twave/reduced_ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twave {

struct AnalyticBounds {
    double lower = 0.0;
    double upper = 0.0;
    double G0 = 0.0;  // inf of the running mean of g
    double F0 = 0.0;  // sup of the running mean of f
    double L0 = 0.0;  // sup of the running mean of rho (d/s)^q
    double ell0 = 0.0;
};

// Throws Error(no_existence) when ell0 = +inf and Error(invalid_argument)
// when g(0) or G0 falls below 1e-8.
AnalyticBounds analytic_bounds(const CoefficientSet& cs, const EndpointLimits& lim, int grid = 4096);

struct ShotOutcome {
    double c = 0.0;
    bool above = false;  // at or above the threshold
    std::string reason;
    double a_floor = 0.0;  // z/u at the last sample
    double r0_plus = 0.0;
};

// Shooting predicate from u = 1 toward 0. Below the threshold the shot
// overshoots: z exceeds M u, or z/u at the floor exceeds the larger root of
// eta0, or eta0 has no roots.
ShotOutcome shoot(double c, const CoefficientSet& cs, const EndpointLimits& lim, const IntegrationOptions& opts = {},
                  double eps = 1e-6);

enum class SignAtZero { positive, zero, unknown };
const char* to_string(SignAtZero s);

enum class StimaVerdict { proves_greater, proves_less_eq, inconclusive };
const char* to_string(StimaVerdict v);

struct StimaResult {
    double k = 0.0;
    StimaVerdict verdict = StimaVerdict::inconclusive;
    char clause = '-';  // 'a', 'b', 'c' or '-'
    std::string certificate = "grid-certified";
    std::string detail;
};

// Sign tests bounding c* against a constant k, checked on finite grids.
StimaResult stima_test(const CoefficientSet& cs, double k, int grid_size = 1024);

struct CStarOptions {
    double tol = 1e-4;
    // Bisection continues to this width (relative to 1+|c|) so that the
    // surviving endpoint is close enough to measure z'(0+) at c*.
    double refine_width = 1e-9;
    bool refine = true;
    int scan_points = 8;
    int max_expansions = 30;
    double eps = 1e-6;
    IntegrationOptions integration;
};

struct WaveSpeedEstimate {
    AnalyticBounds bounds;
    double cstar = 0.0;
    double half_width = 0.0;
    double tol = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    int shots = 0;
    int expansions = 0;
    bool at_lower_bound = false;
    std::optional<BoundarySlope> slope_0;  // z'(0+) at the surviving endpoint
    Eta0Roots roots;                      // eta0 roots at the surviving endpoint
    std::string slope_branch;             // "r0_plus" or "r0_minus"
    SignAtZero sign_at_zero = SignAtZero::unknown;
    std::string sign_provenance;
    double mean_g = 0.0;  // integrals of g and f over (0,1)
    double mean_f = 0.0;
};

// Throws Error(no_existence) when ell0 = +inf, Error(bracket_failure) when
// the shooting outcomes are not monotone in c.
WaveSpeedEstimate cstar(const CoefficientSet& cs, const EndpointLimits& lim, const CStarOptions& opts = {});
WaveSpeedEstimate cstar(const CoefficientSet& cs, double tol);

SignAtZero sign_at_zero(const CoefficientSet& cs, const EndpointLimits& lim, const WaveSpeedEstimate& est,
                        std::string* provenance = nullptr);

} // namespace twave
