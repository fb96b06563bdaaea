#pragma once

#include "twave/classification.hpp"
#include "twave/coefficients.hpp"
#include "twave/profile.hpp"
#include "twave/reduced_ode.hpp"
#include "twave/wavespeed.hpp"

#include <json.hpp>

namespace twave {

using Json = nlohmann::ordered_json;

// Extended reals map to numbers, with "inf"/"-inf" strings for infinities
// and null for NaN.
Json number(double v);

Json to_json(const Limit& l);
Json to_json(const EndpointLimits& lim);
Json to_json(const ValidationReport& rep);
Json to_json(const AnalyticBounds& b);
Json to_json(const WaveSpeedEstimate& est);
Json to_json(const StimaResult& s);
Json to_json(const FinitenessVerdict& v);
Json to_json(const SlopeVerdict& v);
Json to_json(const EndpointTime& t);
Json to_json(const NumericEvidence& ev);
Json to_json(const WaveClassification& w);
Json to_json(const VerificationReport& rep);
// Endpoint times and flags of a profile; the samples go to CSV.
Json summary_json(const WaveProfile& w);
// Termination, slopes and extent of a reduced solution.
Json summary_json(const ReducedSolution& sol);

} // namespace twave
