#pragma once

#include "twave/coefficients.hpp"
#include "twave/reduced_ode.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twave {

enum class Finiteness { finite, infinite, unknown };
const char* to_string(Finiteness f);

// Local model of z near an endpoint, used below the sampled range.
//   linear:        z ~ m * dist
//   slow_manifold: z ~ d rho^(p-1) / lambda^(p-1), so (d/z)^q ~ lambda/rho
//   power:         z ~ K * dist^sigma
enum class TailKind { linear, slow_manifold, power };
const char* to_string(TailKind k);

struct TailModel {
    Endpoint endpoint = Endpoint::zero;
    TailKind kind = TailKind::linear;
    double coefficient = 0.0;  // m or K; lambda at the endpoint for slow_manifold
    double sigma = 1.0;
    // z of the model as a function of the distance to the endpoint.
    ScalarFn z_model;
    // Integrand (d/z)^q of the model in the same variable, and its exponent
    // when descriptors fix it.
    ScalarFn integrand;
    std::optional<double> analytic_exponent;
};

// z on all of (0,1): Hermite interpolation on the samples, tail models
// outside, matched in value at the sampled extremes.
class ZField {
public:
    ZField(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);

    double operator()(double u) const;
    // z at distance dist from the endpoint; keeps relative accuracy near 1.
    double at_distance(Endpoint e, double dist) const;
    const TailModel& tail(Endpoint e) const { return e == Endpoint::zero ? tail0_ : tail1_; }
    const ReducedSolution& solution() const { return *sol_; }

private:
    const ReducedSolution* sol_;
    const CoefficientSet* cs_;
    TailModel tail0_, tail1_;
    double scale0_ = 1.0, scale1_ = 1.0;
};

TailModel tail_model_at_zero(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);
TailModel tail_model_at_one(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);

struct EndpointTime {
    double value = 0.0;  // beta >= 0 or alpha <= 0, possibly infinite
    Finiteness finiteness = Finiteness::unknown;
    double bulk = 0.0;  // quadrature over the sampled range
    double tail = 0.0;  // closed-form tail beyond it
    double tail_exponent = 0.0;
    TailKind tail_kind = TailKind::linear;
    std::string note;
};

// beta = integral over (0, 1/2) of (d/z)^q. Throws Error(undecidable_tail)
// when the tail exponent is within margin of -1 or the tail model disagrees
// with the deepest samples.
EndpointTime time_to_zero(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);
EndpointTime time_to_zero(const ReducedSolution& sol, const CoefficientSet& cs);

// alpha = -integral over (1/2, 1) of (d/z)^q, same error policy.
EndpointTime time_to_one(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);
EndpointTime time_to_one(const ReducedSolution& sol, const CoefficientSet& cs);

// Limit of u' = -(z/d)^q at an endpoint computed from the tail model:
// 0, a finite negative value, or -inf. Empty if the limit does not settle.
std::optional<double> numeric_slope(const TailModel& tail, const CoefficientSet& cs);

struct ProfileSample {
    double t;
    double u;
    double du_dt;
    double flux;  // d(u)|u'|^(p-1)
};

struct WaveProfile {
    double c = 0.0;
    double anchor_u = 0.5;
    std::vector<ProfileSample> samples;  // t increasing, u strictly decreasing
    double alpha = -kInf;
    double beta = kInf;
    Finiteness alpha_finite = Finiteness::unknown;
    Finiteness beta_finite = Finiteness::unknown;
    // The profile reached the endpoint inside the window (versus clipping).
    bool reached_one = false;
    bool reached_zero = false;
    // The backward branch stopped where 1 - u is no longer resolved in u.
    bool clipped_near_one = false;
    // Endpoint times that could not be decided by quadrature.
    bool alpha_undecided = false;
    bool beta_undecided = false;
    std::string alpha_note, beta_note;

    void write_csv(std::ostream& os) const;
    // Copy shifted by t0 in time.
    WaveProfile shifted(double t0) const;
    // Linear interpolation of u at t within the sampled range.
    double u_at(double t) const;
};

struct ReconstructOptions {
    double t_min = -20.0;
    double t_max = 20.0;
    double output_dt = 0.01;
    double rtol = 1e-11;
    double anchor_u = 0.5;
};

// Integrates u' = -(z(u)/d(u))^q forward and backward from u(0) = anchor_u.
// Throws Error(inconsistent_endpoint) when integration stalls short of an
// endpoint whose arrival time the quadrature reports finite, and
// Error(invalid_argument) when the window does not contain 0.
WaveProfile reconstruct(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim,
                        const ReconstructOptions& opts = {});

struct ProfileCheck {
    std::string name;
    bool pass = true;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<ProfileCheck> checks;
    double max_rho = 0.0;
    bool all_pass() const;
    const ProfileCheck* find(const std::string& name) const;
};

struct VerifyOptions {
    double residual_tol = 1e-6;  // relative to max rho
    double flux_tol = 1e-4;
    double boundary_tol = 1e-3;
};

// Residual of the flux form psi' - (c g - f) u' - rho with psi = d|u'|^(p-1)
// differentiated by five-point finite differences; monotonicity; flux and
// state values at the extreme samples.
VerificationReport verify_profile(const WaveProfile& profile, const CoefficientSet& cs, double c,
                                  const VerifyOptions& opts = {});

} // namespace twave
