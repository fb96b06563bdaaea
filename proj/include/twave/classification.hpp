#pragma once

#include "twave/coefficients.hpp"
#include "twave/profile.hpp"
#include "twave/reduced_ode.hpp"
#include "twave/wavespeed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twave {

// What the classifier needs to know about the threshold speed.
struct CriticalSpeed {
    double cstar = 0.0;
    // c - cstar <= tol counts as c = c*.
    double tol = 1e-4;
    // Smallest speed known to admit a wave; shots for c = c* start here.
    double surviving = 0.0;
    SignAtZero sign = SignAtZero::unknown;  // of c* g(0) - f(0)

    static CriticalSpeed from(const WaveSpeedEstimate& est);
    bool is_critical(double c) const { return c - cstar <= tol; }
};

struct FinitenessVerdict {
    Finiteness value = Finiteness::unknown;
    std::string criterion;  // short name of the rule that decided
    std::string detail;
    std::optional<double> exponent;  // integrand exponent at the endpoint
    // The rule set leaves this case open; no verdict may be supplied.
    bool open_case = false;
};

// Limit of u' at an endpoint: 0, negative, -inf, or unknown (empty).
struct SlopeVerdict {
    std::optional<double> value;
    std::string criterion;
    std::string detail;
};

Finiteness to_finiteness(Convergence c);

// General criteria, valid for any coefficients with known endpoint limits.
FinitenessVerdict beta_finiteness(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                  const EndpointLimits& lim);
FinitenessVerdict alpha_finiteness(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                   const EndpointLimits& lim);
SlopeVerdict slope_at_zero(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim);
SlopeVerdict slope_at_one(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim);

// Closed-form rules for power-law descriptors. Empty when the descriptors
// at the endpoint are incomplete or the rule does not cover the case
// (the rule at 0 covers c = c* only).
struct PowerLawVerdict {
    FinitenessVerdict time;
    SlopeVerdict slope;
};
std::optional<PowerLawVerdict> power_law_beta(double c, const CriticalSpeed& crit, const CoefficientSet& cs);
std::optional<PowerLawVerdict> power_law_alpha(double c, const CriticalSpeed& crit, const CoefficientSet& cs);

// Verdicts from the reduced solution: quadrature of the endpoint times and
// tail-model slopes.
struct NumericEvidence {
    double c = 0.0;
    EndpointTime alpha, beta;
    std::optional<double> slope_0, slope_1;
    std::string note;
};
NumericEvidence numeric_evidence(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim);

enum class WaveType { classical, sharp_I, sharp_II, sharp_III, unknown };
const char* to_string(WaveType t);
WaveType wave_type(const std::optional<double>& slope_at_1, const std::optional<double>& slope_at_0);

enum class Provenance { analytic_criterion, numeric_quadrature, both_agree, conflict };
const char* to_string(Provenance p);

struct FieldEvidence {
    Provenance provenance = Provenance::analytic_criterion;
    std::string detail;
};

struct WaveClassification {
    double c = 0.0;
    bool critical = false;
    Finiteness alpha_finite = Finiteness::unknown;
    Finiteness beta_finite = Finiteness::unknown;
    std::optional<double> slope_at_1;
    std::optional<double> slope_at_0;
    WaveType type = WaveType::unknown;
    FieldEvidence alpha_evidence, beta_evidence, slope_1_evidence, slope_0_evidence;

    // Traces of every route, kept for reporting.
    FinitenessVerdict alpha_general, beta_general;
    SlopeVerdict slope_1_general, slope_0_general;
    std::optional<PowerLawVerdict> alpha_power_law, beta_power_law;
    std::optional<NumericEvidence> numeric;
    std::vector<std::string> conflicts;

    bool has_conflict() const { return !conflicts.empty(); }
};

// Analytic classification; numeric verdicts merged when sol is given.
WaveClassification classify(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim,
                            const ReducedSolution* sol = nullptr);

// Solves the reduced problem (at crit.surviving when c is critical) and
// merges its verdicts. Failures of the numeric side leave the analytic
// verdicts in place and are recorded in numeric->note.
WaveClassification classify_with_numerics(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                          const EndpointLimits& lim, const IntegrationOptions& opts = {});

// Relative tolerance used when comparing finite negative slopes.
inline constexpr double kSlopeRelTol = 0.02;

} // namespace twave
