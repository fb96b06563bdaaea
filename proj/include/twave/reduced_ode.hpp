#pragma once

#include "twave/coefficients.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace twave {

// eta0(t) = t^(p') - lambda0 t^q + h0 and eta1(t) = t^(p') + lambda1 t^q - h1,
// with q = 1/(p-1), p' = p/(p-1), lambda = c g - f at the endpoint.
double eta0(double t, double lambda0, double h0, double p);
double eta1(double t, double lambda1, double h1, double p);

struct Eta0Roots {
    bool exist = false;
    double minus = 0.0;
    double plus = 0.0;
    bool double_root() const { return exist && minus == plus; }
};

// Both nonnegative roots of eta0; exist == false when min eta0 > 0.
// Throws Error(infinite_h0) when h0 = +inf.
Eta0Roots eta0_roots(double lambda0, double h0, double p);
Eta0Roots eta0_roots(double c, const EndpointLimits& lim, const CoefficientSet& cs);

// |z'(1)|, or nondifferentiable when h1 = +inf.
struct SlopeAtOne {
    bool differentiable = true;
    double magnitude = 0.0;
};
SlopeAtOne eta1_root(double lambda1, double h1, double p);
SlopeAtOne eta1_root(double c, const EndpointLimits& lim, const CoefficientSet& cs);

enum class SeedKind { linear, implicit_step, power };
const char* to_string(SeedKind k);

struct StartPoint {
    double u = 0.0;
    double z = 0.0;
    double eps = 0.0;
    SeedKind kind = SeedKind::linear;
    // Power seed exponent; 1 for the linear and implicit seeds.
    double sigma = 1.0;
    double coefficient = 0.0;
};

// Seed at u = 1 - eps. Throws Error(no_asymptotics) when h1 = +inf and no
// power-law descriptors are available at 1, Error(invalid_argument) for eps
// outside (0, 1e-3].
StartPoint startup_at_one(double c, const CoefficientSet& cs, const EndpointLimits& lim, double eps = 1e-6);

struct IntegrationOptions {
    double u_floor = 1e-6;
    double z_floor = 1e-12;   // touchdown threshold toward 1, scaled by max(1, M)
    double rtol = 1e-10;
    double max_step_tau = 0.01;    // in 1-u, above u = 1/2
    double max_step_sigma = 0.02;  // in -log u, below u = 1/2
    double bound_slack = 1e-6;
    std::size_t max_steps = 500000;
};

enum class Direction { toward_zero, toward_one };

enum class Termination { reached_floor, touchdown, bound_exceeded, reached_one };
const char* to_string(Termination t);

struct ReducedSample {
    double u;
    double z;
    double dz;
    double dz_scale;  // |lambda| + h z^-q; dz is a cancellation when much larger
};

struct BoundarySlope {
    double value = 0.0;
    // |d(z/u)/d(log u)| at the measurement point is below 1e-4 of the scale.
    bool converged = false;
    double u = 0.0;
};

struct ReducedSolution {
    double c = 0.0;
    double M = 0.0;
    double u_floor = 0.0;
    Direction direction = Direction::toward_zero;
    StartPoint start;
    std::vector<ReducedSample> samples;  // u strictly monotone in the direction of integration
    Termination termination = Termination::reached_floor;
    std::optional<double> touchdown;
    std::optional<BoundarySlope> z_slope_0;
    std::optional<SlopeAtOne> z_slope_1;

    // Cubic Hermite interpolant of log z against log(u/(1-u)), with slopes
    // from the vector field, or from five-point differences of the sampled
    // values where the field is a difference of nearly equal terms (the slow
    // manifold); u is clamped to the sampled range. Must not be
    // called while samples are still being appended.
    double z_at(double u) const;
    double u_min() const;
    double u_max() const;
    void write_csv(std::ostream& os) const;

private:
    struct Interp;
    mutable std::shared_ptr<Interp> interp_;
    mutable std::shared_ptr<std::once_flag> interp_once_ = std::make_shared<std::once_flag>();
    const Interp& interp() const;
};

// Fornberg weights for the derivative of order m at x0 on nodes x.
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

// M = max over [0,1] of |c g - f| on a 4096-point grid plus endpoints.
double linear_bound(double c, const CoefficientSet& cs);

ReducedSolution integrate_reduced(double c, const CoefficientSet& cs, const StartPoint& start, Direction dir,
                                  const IntegrationOptions& opts = {});

// Startup at 1 followed by integration toward 0, with slopes at both ends.
ReducedSolution solve_from_one(double c, const CoefficientSet& cs, const EndpointLimits& lim,
                               const IntegrationOptions& opts = {}, double eps = 1e-6);

// Plateau estimate of z'(0+) from samples: the point where z/u is most
// nearly constant in log u.
std::optional<BoundarySlope> measure_slope_at_zero(const ReducedSolution& sol, double scale);

enum class ComparisonKind { lower, upper };

struct ComparisonResult {
    bool premise = false;     // differential inequality and anchoring hold
    bool conclusion = false;  // ordering holds on all samples in the window
    double worst_gap = 0.0;
    bool holds() const { return !premise || conclusion; }
};

// A lower candidate y (y' <= RHS) with y(u_b) >= z(u_b) stays above z on
// [u_a, u_b]; an upper candidate (y' >= RHS, y(u_b) <= z(u_b)) stays below.
ComparisonResult check_comparison(const ScalarFn& candidate, const ReducedSolution& sol, const CoefficientSet& cs,
                                  double u_a, double u_b, ComparisonKind kind);

} // namespace twave
