#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twave/classification.hpp"

#include <cmath>

using namespace twave;

namespace {

CoefficientSet fisher() { return CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)"); }

CoefficientSet degenerate_fisher() {
    auto cs = CoefficientSet::from_expressions(2.0, "0", "1", "u", "u*(1-u)");
    cs.meta0.d = PowerLawMeta{1.0, 1.0, Endpoint::zero};
    cs.meta0.rho = PowerLawMeta{1.0, 1.0, Endpoint::zero};
    cs.meta1.d = PowerLawMeta{1.0, 0.0, Endpoint::one};
    cs.meta1.rho = PowerLawMeta{1.0, 1.0, Endpoint::one};
    return cs;
}

constexpr double kFisherCstar = 2.0;
constexpr double kDegenerateFisherCstar = 0.707106781827;

CriticalSpeed critical(double cstar, SignAtZero sign = SignAtZero::positive) {
    CriticalSpeed cs;
    cs.cstar = cstar;
    cs.surviving = cstar;
    cs.sign = sign;
    return cs;
}

} // namespace

TEST_CASE("beta at c* from the power-law rule") {
    // r < 1 at 0: finite.
    auto a = symmetric_power_instance(2.0, 1.0, 0.5);
    auto pa = power_law_beta(1.0, critical(1.0), a);
    REQUIRE(pa.has_value());
    CHECK(pa->time.value == Finiteness::finite);

    // Fisher: r = (1 - delta)/(p - 1) = 1, not below 1: infinite.
    auto f = symmetric_power_instance(2.0, 0.0, 1.0);
    auto pf = power_law_beta(2.0, critical(2.0), f);
    REQUIRE(pf.has_value());
    CHECK(pf->time.value == Finiteness::infinite);

    // Degenerate Fisher: (1 - delta)/(p - 1) = 0 < 1 with c* g(0) > f(0): finite.
    auto d = degenerate_fisher();
    auto pd = power_law_beta(kDegenerateFisherCstar, critical(kDegenerateFisherCstar), d);
    REQUIRE(pd.has_value());
    CHECK(pd->time.value == Finiteness::finite);

    // The rule at 0 has nothing to say above c*.
    CHECK_FALSE(power_law_beta(2.0, critical(kDegenerateFisherCstar), d).has_value());
}

TEST_CASE("beta from the general criteria") {
    auto cs = fisher();
    EndpointLimits lim = endpoint_limits(cs);
    CHECK(beta_finiteness(kFisherCstar, critical(kFisherCstar), cs, lim).value == Finiteness::infinite);
    CHECK(beta_finiteness(3.0, critical(kFisherCstar), cs, lim).value == Finiteness::infinite);

    auto d = degenerate_fisher();
    EndpointLimits dl = endpoint_limits(d);
    CHECK(beta_finiteness(kDegenerateFisherCstar, critical(kDegenerateFisherCstar), d, dl).value ==
          Finiteness::finite);
    // Above c* the integral of 1/rho decides once the chain condition is known.
    auto chained = d.black_box();
    chained.meta0.chain_asserted = true;
    CHECK(beta_finiteness(kDegenerateFisherCstar + 0.5, critical(kDegenerateFisherCstar), chained, dl).value ==
          Finiteness::infinite);
}

TEST_CASE("the open case stays unknown") {
    auto cs = CoefficientSet::from_expressions(2.0, "1-u", "1", "u^2", "0.1*u*(1-u)");
    EndpointLimits lim = endpoint_limits(cs);
    // Without the chain condition the one-sided test cannot even start.
    FinitenessVerdict bare = beta_finiteness(1.0, critical(1.0, SignAtZero::zero), cs, lim);
    CHECK(bare.value == Finiteness::unknown);
    cs.meta0.chain_asserted = true;
    FinitenessVerdict v = beta_finiteness(1.0, critical(1.0, SignAtZero::zero), cs, lim);
    CHECK(v.value == Finiteness::unknown);
    CHECK(v.open_case);
    WaveClassification w = classify(1.0, critical(1.0, SignAtZero::zero), cs, lim);
    CHECK(w.beta_finite == Finiteness::unknown);
    CHECK_FALSE(w.has_conflict());
}

TEST_CASE("alpha from the power-law rule") {
    // Fisher near 1: case p + delta = 2, infinite.
    auto f = symmetric_power_instance(2.0, 0.0, 1.0);
    auto pf = power_law_alpha(2.0, critical(2.0), f);
    REQUIRE(pf.has_value());
    CHECK(pf->time.value == Finiteness::infinite);

    // p = 2, delta = 0, r = 1/2 at 1: p + delta = 2 > r + 1 = 1.5, finite.
    auto e = CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*sqrt(1-u)");
    e.meta1.d = PowerLawMeta{1.0, 0.0, Endpoint::one};
    e.meta1.rho = PowerLawMeta{1.0, 0.5, Endpoint::one};
    auto pe = power_law_alpha(1.0, critical(0.5), e);
    REQUIRE(pe.has_value());
    CHECK(pe->time.value == Finiteness::finite);
    CHECK(alpha_finiteness(1.0, critical(0.5), e, endpoint_limits(e)).value == Finiteness::finite);

    // p = 3, delta = 0, r = 1, c g(1) > f(1): r(p-1) + delta = 2 > 1 and r = 1 is not below 1.
    auto c = symmetric_power_instance(3.0, 0.0, 1.0);
    auto pc = power_law_alpha(1.0, critical(0.5), c);
    REQUIRE(pc.has_value());
    CHECK(pc->time.value == Finiteness::infinite);
}

TEST_CASE("alpha of a degenerate end with negative lambda") {
    // d = (1-u)^3, c g(1) < f(1): integral of (d/(1-u))^q = (1-u)^2 converges.
    auto cs = CoefficientSet::from_expressions(2.0, "2*u", "1", "(1-u)^3", "u*(1-u)");
    FinitenessVerdict v = alpha_finiteness(1.0, critical(0.5), cs, endpoint_limits(cs));
    CHECK(v.value == Finiteness::finite);
}

TEST_CASE("slopes at 0") {
    auto cs = fisher();
    EndpointLimits lim = endpoint_limits(cs);
    for (double c : {2.0, 2.5, 4.0}) {
        auto s = slope_at_zero(c, critical(kFisherCstar), cs, lim);
        REQUIRE(s.value.has_value());
        CHECK(*s.value == 0.0);
    }
    auto d = degenerate_fisher();
    EndpointLimits dl = endpoint_limits(d);
    auto at = slope_at_zero(kDegenerateFisherCstar, critical(kDegenerateFisherCstar), d, dl);
    REQUIRE(at.value.has_value());
    CHECK(*at.value == doctest::Approx(-kDegenerateFisherCstar).epsilon(1e-9));
    auto above = slope_at_zero(kDegenerateFisherCstar + 1.0, critical(kDegenerateFisherCstar), d, dl);
    REQUIRE(above.value.has_value());
    CHECK(*above.value == 0.0);
}

TEST_CASE("slopes at 1") {
    auto cs = fisher();
    for (double c : {2.0, 3.0}) {
        auto s = slope_at_one(c, critical(kFisherCstar), cs, endpoint_limits(cs));
        REQUIRE(s.value.has_value());
        CHECK(*s.value == 0.0);
    }
    // d = 1-u, c g(1) - f(1) = -0.5: -((-0.5)/(-1)) = -0.5.
    auto neg = CoefficientSet::from_expressions(2.0, "1.5*u", "1", "1-u", "u*(1-u)");
    auto sn = slope_at_one(1.0, critical(0.5), neg, endpoint_limits(neg));
    REQUIRE(sn.value.has_value());
    CHECK(*sn.value == doctest::Approx(-0.5).epsilon(1e-6));
    // c g(1) - f(1) = 0.3: max picks 0.
    auto pos = CoefficientSet::from_expressions(2.0, "0.7*u", "1", "1-u", "u*(1-u)");
    auto sp = slope_at_one(1.0, critical(0.5), pos, endpoint_limits(pos));
    REQUIRE(sp.value.has_value());
    CHECK(*sp.value == 0.0);
}

TEST_CASE("wave types from the two slopes") {
    CHECK(wave_type(0.0, 0.0) == WaveType::classical);
    CHECK(wave_type(0.0, -0.7) == WaveType::sharp_I);
    CHECK(wave_type(-0.5, 0.0) == WaveType::sharp_II);
    CHECK(wave_type(-0.5, -0.7) == WaveType::sharp_III);
    CHECK(wave_type(-kInf, 0.0) == WaveType::sharp_II);
    CHECK(wave_type(std::nullopt, 0.0) == WaveType::unknown);
}

TEST_CASE("analytic classification of the anchors") {
    auto f = fisher();
    EndpointLimits fl = endpoint_limits(f);
    WaveClassification w = classify(2.0, critical(2.0), f, fl);
    CHECK(w.type == WaveType::classical);
    CHECK(w.alpha_finite == Finiteness::infinite);
    CHECK(w.beta_finite == Finiteness::infinite);

    auto d = degenerate_fisher();
    EndpointLimits dl = endpoint_limits(d);
    WaveClassification s = classify(kDegenerateFisherCstar, critical(kDegenerateFisherCstar), d, dl);
    CHECK(s.type == WaveType::sharp_I);
    CHECK(s.beta_finite == Finiteness::finite);
    CHECK(s.alpha_finite == Finiteness::infinite);
}

TEST_CASE("numeric cross-check agrees on the anchors") {
    auto d = degenerate_fisher();
    EndpointLimits dl = endpoint_limits(d);
    WaveSpeedEstimate est = cstar(d, dl);
    CriticalSpeed crit = CriticalSpeed::from(est);

    WaveClassification at = classify_with_numerics(est.cstar, crit, d, dl);
    CHECK(at.type == WaveType::sharp_I);
    CHECK(at.beta_evidence.provenance == Provenance::both_agree);
    CHECK(at.slope_0_evidence.provenance == Provenance::both_agree);
    REQUIRE(at.numeric.has_value());
    CHECK(std::isfinite(at.numeric->beta.value));
    REQUIRE(at.slope_at_0.has_value());
    CHECK(*at.slope_at_0 == doctest::Approx(-est.cstar).epsilon(kSlopeRelTol));

    WaveClassification above = classify_with_numerics(est.cstar + 0.5, crit, d, dl);
    CHECK(above.type == WaveType::classical);
    CHECK(above.beta_finite == Finiteness::infinite);
    CHECK_FALSE(above.has_conflict());

    auto f = fisher();
    EndpointLimits fl = endpoint_limits(f);
    WaveClassification w = classify_with_numerics(3.0, critical(2.0), f, fl);
    CHECK(w.type == WaveType::classical);
    for (const FieldEvidence* e : {&w.alpha_evidence, &w.beta_evidence, &w.slope_1_evidence, &w.slope_0_evidence})
        CHECK(e->provenance == Provenance::both_agree);
}
