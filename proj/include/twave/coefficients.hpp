#pragma once

#include "twave/expression.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace twave {

using ScalarFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Two exponents closer than this are treated as equal when a closed-form
// rule branches on their comparison.
inline constexpr double kExponentTie = 1e-12;

enum class Endpoint { zero, one };

inline double distance_to(Endpoint e, double u) { return e == Endpoint::zero ? u : 1.0 - u; }
inline double point_at(Endpoint e, double dist) { return e == Endpoint::zero ? dist : 1.0 - dist; }

// -1, 0 or +1 for a < b, a == b, a > b up to kExponentTie.
int compare_exponents(double a, double b);

// A named scalar function. Expression-backed coefficients keep their source.
struct Coefficient {
    ScalarFn fn;
    std::string label;

    Coefficient() = default;
    Coefficient(ScalarFn f, std::string l) : fn(std::move(f)), label(std::move(l)) {}
    static Coefficient from_expression(const std::string& src);
    static Coefficient constant(double v);

    double operator()(double u) const { return fn(u); }
};

// f(u) ~ constant * distance^exponent at one endpoint.
struct PowerLawMeta {
    double constant = 1.0;
    double exponent = 0.0;
    Endpoint endpoint = Endpoint::zero;
};

struct EndpointMeta {
    std::optional<PowerLawMeta> d;
    std::optional<PowerLawMeta> rho;
    // User assertion that d*rho^(p-1) is squeezed between multiples of a
    // single monotone comparison function near this endpoint.
    bool chain_asserted = false;

    bool complete() const { return d.has_value() && rho.has_value(); }
};

struct CoefficientSet {
    double p = 2.0;
    Coefficient f, g, d, rho;
    EndpointMeta meta0, meta1;

    static CoefficientSet from_expressions(double p, const std::string& f, const std::string& g,
                                           const std::string& d, const std::string& rho);

    double q() const { return 1.0 / (p - 1.0); }
    double p_conj() const { return p / (p - 1.0); }
    double lambda(double c, double u) const { return c * g(u) - f(u); }
    // h = d^q rho
    double h(double u) const;
    // rho (d/u)^q, the ratio whose limit at 0 is ell0
    double h_over_u(double u) const;
    // rho (d/(1-u))^q as a function of tau = 1-u, limit ell1 at tau -> 0
    double h_over_tau(double tau) const;

    const EndpointMeta& meta(Endpoint e) const { return e == Endpoint::zero ? meta0 : meta1; }
    EndpointMeta& meta(Endpoint e) { return e == Endpoint::zero ? meta0 : meta1; }

    // Copy with all power-law descriptors removed; chain assertions kept.
    CoefficientSet black_box() const;
};

// Symmetric power-law instance: d = k1 u^delta (1-u)^delta, rho = k2 u^r (1-u)^r,
// f = 0, g = 1, with matching descriptors at both endpoints.
CoefficientSet symmetric_power_instance(double p, double delta, double r, double k1 = 1.0, double k2 = 1.0);

// Existence-side admissibility of descriptor pairs.
bool admissible_at_zero(double p, double delta, double r);
bool admissible_at_one(double p, double delta, double r);

// ---------------------------------------------------------------- limits

enum class Confidence { analytic, extrapolated, unknown };
const char* to_string(Confidence c);

struct Limit {
    double value = std::numeric_limits<double>::quiet_NaN();
    Confidence confidence = Confidence::unknown;

    bool known() const { return confidence != Confidence::unknown; }
    bool is_zero() const { return known() && value == 0.0; }
    bool is_infinite() const { return known() && std::isinf(value); }
    bool is_positive_finite() const { return known() && value > 0.0 && std::isfinite(value); }

    static Limit unknown() { return {}; }
    static Limit analytic(double v) { return {v, Confidence::analytic}; }
    static Limit extrapolated(double v) { return {v, Confidence::extrapolated}; }
};

struct EndpointLimits {
    Limit ell0, ell1, h0, h1;
    Limit d_at_0, d_at_1;
    Limit ddot_0, ddot_1;
};

// Limit of fn at an endpoint from samples at distance 2^-j, j = 8..24.
// Throws Error(oscillating_limit) if successive extrapolants disagree.
double extrapolate_limit(const ScalarFn& fn, Endpoint e);

// ell0 from descriptors; throws OscillatingLimit if ell0 needs extrapolation
// and it fails. Other limits that fail to extrapolate are flagged unknown.
EndpointLimits endpoint_limits(const CoefficientSet& cs);

struct PowerFit {
    double exponent = 0.0;
    double constant = 0.0;
    double residual = 0.0;
};

// Least-squares fit of log|fn| against log(distance) at distance 2^-j.
// Throws Error(fit_failed) if fn vanishes or is non-finite on the probes.
PowerFit power_fit(const ScalarFn& fn, Endpoint e, int j_min = 10, int j_max = 20);

// Local log-log slope of fn at the deepest probe pair, j_max-1 -> j_max.
double local_exponent(const ScalarFn& fn, Endpoint e, int j_max = 40);

// ---------------------------------------------------------------- validation

struct HypothesisCheck {
    std::string name;
    bool pass = true;
    std::optional<double> first_violation;
    std::string detail;
};

struct ValidationReport {
    int grid_size = 0;
    std::vector<HypothesisCheck> checks;
    bool all_pass() const;
    const HypothesisCheck* find(const std::string& name) const;
};

// Chebyshev-Gauss-Lobatto interior nodes (1 - cos(pi i/N))/2, i = 1..N-1.
// The node set for 2N contains the node set for N.
std::vector<double> clustered_grid(int n);

ValidationReport validate_hypotheses(const CoefficientSet& cs, int grid_size = 1024);

// Convergence of an improper integral of a nonnegative integrand at one endpoint.
enum class Convergence { convergent, divergent, undecided };
const char* to_string(Convergence c);

struct IntegralTest {
    Convergence verdict = Convergence::undecided;
    double exponent = 0.0;
    bool analytic = false;
    std::string note;
};

// Decides convergence of the integral of fn near the endpoint from its
// power exponent (analytic if given, probed otherwise); exponent > -1 with
// margin 1e-3 converges, < -1 - margin diverges. Inside the margin a limit
// comparison of distance*fn is attempted before giving up.
IntegralTest integral_test(const ScalarFn& fn, Endpoint e, std::optional<double> analytic_exponent);

inline constexpr double kExponentMargin = 1e-3;

} // namespace twave
