#include "twave/classification.hpp"

#include "twave/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace twave {

CriticalSpeed CriticalSpeed::from(const WaveSpeedEstimate& est) {
    CriticalSpeed c;
    c.cstar = est.cstar;
    c.tol = est.tol;
    c.surviving = est.bracket_hi;
    c.sign = est.sign_at_zero;
    return c;
}

Finiteness to_finiteness(Convergence c) {
    switch (c) {
    case Convergence::convergent: return Finiteness::finite;
    case Convergence::divergent: return Finiteness::infinite;
    case Convergence::undecided: return Finiteness::unknown;
    }
    return Finiteness::unknown;
}

const char* to_string(WaveType t) {
    switch (t) {
    case WaveType::classical: return "classical";
    case WaveType::sharp_I: return "sharp-I";
    case WaveType::sharp_II: return "sharp-II";
    case WaveType::sharp_III: return "sharp-III";
    case WaveType::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::analytic_criterion: return "analytic-criterion";
    case Provenance::numeric_quadrature: return "numeric-quadrature";
    case Provenance::both_agree: return "both-agree";
    case Provenance::conflict: return "conflict";
    }
    return "analytic-criterion";
}

WaveType wave_type(const std::optional<double>& slope_at_1, const std::optional<double>& slope_at_0) {
    if (!slope_at_1 || !slope_at_0) return WaveType::unknown;
    bool sharp1 = *slope_at_1 < 0.0, sharp0 = *slope_at_0 < 0.0;
    if (sharp1 && sharp0) return WaveType::sharp_III;
    if (sharp1) return WaveType::sharp_II;
    if (sharp0) return WaveType::sharp_I;
    return WaveType::classical;
}

namespace {

// Rule names shared by the general criteria and the merge step.
const char* const kRuleTInfinity = "alpha: power-type h at 1, weighted 1/rho test";
const char* const kRuleSupercriticalSlope = "slope at 0: zero for c > c*";
const char* const kRuleInfiniteTime = "slope: zero when the endpoint time is infinite";
const char* const kRuleTInfinitySlope = "slope at 1: zero when alpha is finite for power-type h";

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool chain_holds(const EndpointMeta& m) { return m.complete() || m.chain_asserted; }

// Possible signs of lambda1 = c g(1) - f(1) given the uncertainty in c.
struct SignSet {
    bool neg = false, zero = false, pos = false;
    int count() const { return int(neg) + int(zero) + int(pos); }
};

SignSet lambda1_signs(double c, const CriticalSpeed& crit, const CoefficientSet& cs) {
    const double g1 = cs.g(1.0), l1 = cs.lambda(c, 1.0);
    const double snap = 1e-12 * (1.0 + std::abs(c * g1) + std::abs(cs.f(1.0)));
    SignSet s;
    if (!crit.is_critical(c)) {
        // c is exact: only rounding is absorbed.
        s.zero = std::abs(l1) <= snap;
        s.neg = !s.zero && l1 < 0.0;
        s.pos = !s.zero && l1 > 0.0;
        return s;
    }
    // c* is known to within tol, so lambda1 lies in an interval.
    const double band = snap + crit.tol * std::abs(g1);
    s.neg = l1 - band < 0.0;
    s.pos = l1 + band > 0.0;
    s.zero = std::abs(l1) <= band;
    return s;
}

FinitenessVerdict from_test(const IntegralTest& t, std::string criterion, std::string what) {
    FinitenessVerdict v;
    v.value = to_finiteness(t.verdict);
    v.criterion = std::move(criterion);
    v.exponent = t.exponent;
    v.detail = what + ": " + to_string(t.verdict) + ", exponent " + fmt(t.exponent) + " (" + t.note + ")";
    return v;
}

FinitenessVerdict unknown_verdict(std::string criterion, std::string detail, bool open = false) {
    FinitenessVerdict v;
    v.criterion = std::move(criterion);
    v.detail = std::move(detail);
    v.open_case = open;
    return v;
}

IntegralTest safe_test(const ScalarFn& fn, Endpoint e, std::optional<double> exponent) {
    try {
        return integral_test(fn, e, exponent);
    } catch (const Error& err) {
        IntegralTest t;
        t.note = std::string("probe failed: ") + err.what();
        return t;
    }
}

// Integral of 1/rho at an endpoint.
IntegralTest reciprocal_rho_test(const CoefficientSet& cs, Endpoint e) {
    std::optional<double> ex;
    if (cs.meta(e).rho) ex = -cs.meta(e).rho->exponent;
    return safe_test([&cs](double u) { return 1.0 / cs.rho(u); }, e, ex);
}

// Integral of (d/dist)^q at an endpoint.
IntegralTest diffusion_ratio_test(const CoefficientSet& cs, Endpoint e) {
    const double q = cs.q();
    std::optional<double> ex;
    if (cs.meta(e).d) ex = q * (cs.meta(e).d->exponent - 1.0);
    return safe_test([&cs, e, q](double u) { return std::pow(cs.d(u) / distance_to(e, u), q); }, e, ex);
}

// Combines verdicts of the branches compatible with an uncertain sign.
FinitenessVerdict combine(const std::vector<FinitenessVerdict>& vs) {
    if (vs.size() == 1) return vs.front();
    bool same = std::all_of(vs.begin(), vs.end(), [&](const FinitenessVerdict& v) { return v.value == vs[0].value; });
    if (same && vs[0].value != Finiteness::unknown) {
        FinitenessVerdict v = vs[0];
        v.detail += " (all sign branches agree)";
        return v;
    }
    std::string d = "sign of c g - f at the endpoint is not resolved and the branches disagree:";
    for (const auto& v : vs) d += " [" + v.criterion + ": " + to_string(v.value) + "]";
    bool open = std::any_of(vs.begin(), vs.end(), [](const FinitenessVerdict& v) { return v.open_case; });
    return unknown_verdict("ambiguous sign", d, open);
}

bool same_slope(const std::optional<double>& a, const std::optional<double>& b) {
    if (!a || !b) return false;
    if (std::isinf(*a) || std::isinf(*b)) return *a == *b;
    if (*a == 0.0 || *b == 0.0) return *a == *b;
    return std::abs(*a - *b) <= kSlopeRelTol * std::abs(*a);
}

SlopeVerdict combine(const std::vector<SlopeVerdict>& vs) {
    if (vs.size() == 1) return vs.front();
    bool same = std::all_of(vs.begin(), vs.end(), [&](const SlopeVerdict& v) { return same_slope(v.value, vs[0].value); });
    if (same) {
        SlopeVerdict v = vs[0];
        v.detail += " (all sign branches agree)";
        return v;
    }
    SlopeVerdict v;
    v.criterion = "ambiguous sign";
    v.detail = "sign of c g - f at the endpoint is not resolved and the branches disagree";
    return v;
}

std::vector<int> signs_of(const SignSet& s) {
    std::vector<int> out;
    if (s.neg) out.push_back(-1);
    if (s.zero) out.push_back(0);
    if (s.pos) out.push_back(1);
    return out;
}

SlopeVerdict slope(std::optional<double> v, std::string criterion, std::string detail = {}) {
    SlopeVerdict s;
    s.value = v;
    s.criterion = std::move(criterion);
    s.detail = std::move(detail);
    return s;
}

} // namespace

// ------------------------------------------------------------------ beta

FinitenessVerdict beta_finiteness(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                  const EndpointLimits& lim) {
    const auto& l0 = lim.ell0;
    if (!l0.known()) return unknown_verdict("beta: ell0 unknown", "limit of rho (d/u)^q at 0 could not be determined");
    if (l0.is_infinite()) return unknown_verdict("beta: ell0 infinite", "no wave exists for any speed");
    const bool critical = crit.is_critical(c);
    const bool chain = chain_holds(cs.meta0);

    auto reciprocal = [&](const std::string& name) {
        return from_test(reciprocal_rho_test(cs, Endpoint::zero), name, "integral of 1/rho near 0");
    };

    if (!critical) {
        if (l0.value > 0.0) return reciprocal("beta: c > c*, ell0 > 0, 1/rho test");
        if (!chain)
            return unknown_verdict("beta: c > c*, ell0 = 0",
                                   "needs the comparison-chain condition on d rho^(p-1) near 0 (descriptors or "
                                   "chain assertion)");
        return reciprocal("beta: c > c*, ell0 = 0, chain, 1/rho test");
    }

    if (l0.value > 0.0) return reciprocal("beta: c = c*, ell0 > 0, 1/rho test");

    auto positive_branch = [&] {
        return from_test(diffusion_ratio_test(cs, Endpoint::zero), "beta: c = c*, ell0 = 0, c*g(0) > f(0), (d/u)^q test",
                         "integral of (d/u)^q near 0");
    };
    auto zero_branch = [&] {
        const std::string name = "beta: c = c*, ell0 = 0, c*g(0) = f(0), one-sided 1/rho test";
        if (!chain)
            return unknown_verdict(name, "needs the comparison-chain condition on d rho^(p-1) near 0", false);
        IntegralTest t = reciprocal_rho_test(cs, Endpoint::zero);
        if (t.verdict == Convergence::convergent) return from_test(t, name, "integral of 1/rho near 0");
        FinitenessVerdict v = from_test(t, name, "integral of 1/rho near 0");
        v.value = Finiteness::unknown;
        v.open_case = t.verdict == Convergence::divergent;
        v.detail += v.open_case ? "; divergence does not decide beta (open case)" : "";
        return v;
    };

    switch (crit.sign) {
    case SignAtZero::positive: return positive_branch();
    case SignAtZero::zero: return zero_branch();
    case SignAtZero::unknown: return combine({positive_branch(), zero_branch()});
    }
    return unknown_verdict("beta", "unreachable");
}

// ----------------------------------------------------------------- alpha

FinitenessVerdict alpha_finiteness(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                   const EndpointLimits& lim) {
    const auto& l1 = lim.ell1;
    const double q = cs.q(), p = cs.p;
    if (!l1.known()) return unknown_verdict("alpha: ell1 unknown", "limit of rho (d/(1-u))^q at 1 could not be determined");
    const bool chain = chain_holds(cs.meta1);

    auto reciprocal = [&](const std::string& name) {
        return from_test(reciprocal_rho_test(cs, Endpoint::one), name, "integral of 1/rho near 1");
    };

    if (l1.is_positive_finite()) return reciprocal("alpha: ell1 > 0, 1/rho test");

    if (l1.is_zero()) {
        std::vector<FinitenessVerdict> vs;
        for (int s : signs_of(lambda1_signs(c, crit, cs))) {
            if (s < 0) {
                vs.push_back(from_test(diffusion_ratio_test(cs, Endpoint::one),
                                       "alpha: ell1 = 0, c g(1) < f(1), (d/(1-u))^q test",
                                       "integral of (d/(1-u))^q near 1"));
            } else if (s > 0) {
                const std::string name = "alpha: ell1 = 0, c g(1) > f(1), chain, 1/rho test";
                vs.push_back(chain ? reciprocal(name)
                                   : unknown_verdict(name, "needs the comparison-chain condition near 1"));
            } else {
                const std::string name = "alpha: ell1 = 0, c g(1) = f(1), chain, one-sided 1/rho test";
                if (!chain) {
                    vs.push_back(unknown_verdict(name, "needs the comparison-chain condition near 1"));
                    continue;
                }
                IntegralTest t = reciprocal_rho_test(cs, Endpoint::one);
                FinitenessVerdict v = from_test(t, name, "integral of 1/rho near 1");
                if (t.verdict != Convergence::convergent) {
                    v.value = Finiteness::unknown;
                    v.open_case = t.verdict == Convergence::divergent;
                    if (v.open_case) v.detail += "; divergence does not decide alpha";
                }
                vs.push_back(v);
            }
        }
        return combine(vs);
    }

    // ell1 = +inf: h = rho d^q behaves like a power of (1-u) or the
    // comparison with phi = d rho^(p-1) applies.
    std::optional<double> lam;
    std::string lam_note;
    if (cs.meta1.complete()) {
        lam = cs.meta1.rho->exponent + q * cs.meta1.d->exponent;
        lam_note = "from descriptors";
    } else {
        try {
            PowerFit fit = power_fit([&cs](double u) { return cs.h(u); }, Endpoint::one);
            if (fit.residual < 1e-3) {
                lam = fit.exponent;
                lam_note = "fitted, residual " + fmt(fit.residual);
            }
        } catch (const Error&) {
        }
    }
    if (lam && *lam > -1.0 + kExponentMargin && compare_exponents(*lam, q) <= 0) {
        const double L = *lam;
        const double w = L - (L + 1.0) / p;
        std::optional<double> ex;
        if (cs.meta1.rho) ex = w - cs.meta1.rho->exponent;
        IntegralTest t =
            safe_test([&cs, w](double u) { return std::pow(1.0 - u, w) / cs.rho(u); }, Endpoint::one, ex);
        FinitenessVerdict v = from_test(t, kRuleTInfinity,
                                        "integral of (1-u)^(" + fmt(w) + ")/rho near 1, h exponent " + fmt(L) + " " +
                                            lam_note);
        return v;
    }

    // Comparison with phi = d rho^(p-1): phi -> 0 with phi' -> -inf, i.e. a
    // local exponent in (0, 1).
    const std::string little = "alpha: ell1 = inf, phi = d rho^(p-1) lower solution, 1/rho test";
    double k = std::numeric_limits<double>::quiet_NaN();
    try {
        k = local_exponent([&cs, p](double u) { return cs.d(u) * std::pow(cs.rho(u), p - 1.0); }, Endpoint::one);
    } catch (const Error&) {
    }
    if (std::isfinite(k) && k > kExponentMargin && k < 1.0 - kExponentMargin) {
        IntegralTest t = reciprocal_rho_test(cs, Endpoint::one);
        FinitenessVerdict v = from_test(t, little, "integral of 1/rho near 1");
        if (t.verdict != Convergence::divergent) {
            v.value = Finiteness::unknown;
            v.detail += "; only divergence decides alpha here";
        }
        return v;
    }
    return unknown_verdict("alpha: ell1 = inf", "h is not of power type near 1 and phi = d rho^(p-1) does not qualify");
}

// ---------------------------------------------------------------- slopes

SlopeVerdict slope_at_zero(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim) {
    const double q = cs.q();
    const bool critical = crit.is_critical(c);
    if (lim.ell0.is_infinite()) return slope(std::nullopt, "slope at 0", "ell0 infinite, no wave");
    const Limit& d0 = lim.d_at_0;
    const Limit& dd = lim.ddot_0;
    if (!d0.known()) return slope(std::nullopt, "slope at 0", "d(0) unknown");
    if (d0.value > 0.0) return slope(0.0, "slope at 0: d bounded below near 0");
    if (!dd.known()) return slope(std::nullopt, "slope at 0", "limit of d/u unknown");
    if (dd.is_infinite()) return slope(0.0, "slope at 0: d(0) = 0, d/u -> inf");
    if (dd.value > 0.0) {
        const std::string name = "slope at 0: d(0) = 0, 0 < d/u -> finite";
        if (!critical) return slope(0.0, name, "c > c*");
        if (crit.sign == SignAtZero::unknown) return slope(std::nullopt, name, "sign of c*g(0) - f(0) unknown");
        if (crit.sign == SignAtZero::zero) return slope(0.0, name, "c*g(0) = f(0)");
        double l0 = crit.cstar * cs.g(0.0) - cs.f(0.0);
        return slope(-std::pow(l0 / dd.value, q), name, "c = c*, -((c*g(0) - f(0)) / d'(0))^q");
    }
    const std::string name = "slope at 0: d(0) = 0, d/u -> 0";
    if (!critical) return slope(0.0, name, "c > c*");
    if (crit.sign == SignAtZero::positive) return slope(-kInf, name, "c = c*, c*g(0) > f(0)");
    return slope(std::nullopt, name, "needs c*g(0) != f(0)");
}

SlopeVerdict slope_at_one(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim) {
    const double q = cs.q();
    const Limit& d1 = lim.d_at_1;
    const Limit& dd = lim.ddot_1;
    if (!d1.known()) return slope(std::nullopt, "slope at 1", "d(1) unknown");
    if (d1.value > 0.0) return slope(0.0, "slope at 1: d bounded below near 1");
    if (!dd.known()) return slope(std::nullopt, "slope at 1", "limit of -d/(1-u) unknown");
    if (dd.is_infinite()) {
        if (lim.ell1.known() && std::isfinite(lim.ell1.value)) return slope(0.0, "slope at 1: d(1) = 0, d' -> -inf, ell1 finite");
        return slope(std::nullopt, "slope at 1", "d' -> -inf with ell1 infinite");
    }
    const double l1 = cs.lambda(c, 1.0);
    std::vector<SlopeVerdict> vs;
    for (int s : signs_of(lambda1_signs(c, crit, cs))) {
        if (dd.value < 0.0) {
            const std::string name = "slope at 1: d(1) = 0, -inf < d'(1) < 0";
            double m = s < 0 ? std::abs(l1) / -dd.value : 0.0;
            vs.push_back(slope(m == 0.0 ? 0.0 : -std::pow(m, q), name, "-(max(0, (c g(1) - f(1)) / d'(1)))^q"));
        } else {
            const std::string name = "slope at 1: d(1) = 0, d' -> 0";
            if (s > 0) vs.push_back(slope(0.0, name, "c g(1) > f(1)"));
            else if (s < 0) vs.push_back(slope(-kInf, name, "c g(1) < f(1)"));
            else vs.push_back(slope(std::nullopt, name, "needs c g(1) != f(1)"));
        }
    }
    return combine(vs);
}

// ------------------------------------------------------ power-law rules

std::optional<PowerLawVerdict> power_law_beta(double c, const CriticalSpeed& crit, const CoefficientSet& cs) {
    if (!cs.meta0.complete() || !crit.is_critical(c)) return std::nullopt;
    const double p = cs.p, q = cs.q();
    const double delta = cs.meta0.d->exponent, r = cs.meta0.rho->exponent, k1 = cs.meta0.d->constant;
    const double s = (1.0 - delta) / (p - 1.0);
    const int rs = compare_exponents(r, s);
    if (rs < 0) return std::nullopt;

    PowerLawVerdict out;
    out.time.exponent = std::nullopt;
    if (compare_exponents(r, 1.0) < 0) {
        out.time.value = Finiteness::finite;
        out.time.criterion = "power law at 0, c = c*: r < 1";
    } else if (rs == 0) {
        out.time.value = Finiteness::infinite;
        out.time.criterion = "power law at 0, c = c*: r = (1-delta)/(p-1) >= 1";
    } else if (crit.sign == SignAtZero::positive) {
        out.time.value = compare_exponents(s, 1.0) < 0 ? Finiteness::finite : Finiteness::infinite;
        out.time.criterion = "power law at 0, c = c*: r > (1-delta)/(p-1), c*g(0) > f(0)";
    } else {
        out.time.criterion = "power law at 0, c = c*";
        out.time.detail = "r >= 1 and r > (1-delta)/(p-1) without c*g(0) > f(0) is not covered";
    }
    out.time.detail += (out.time.detail.empty() ? "" : "; ") + std::string("delta = ") + fmt(delta) + ", r = " + fmt(r) +
                       ", (1-delta)/(p-1) = " + fmt(s);

    const std::string sname = "power law at 0, slope";
    if (out.time.value == Finiteness::infinite) {
        out.slope = slope(0.0, kRuleInfiniteTime);
    } else if (out.time.value == Finiteness::finite) {
        int d1 = compare_exponents(delta, 1.0);
        if (d1 < 0) {
            out.slope = slope(0.0, sname, "delta < 1");
        } else if (d1 == 0) {
            if (crit.sign == SignAtZero::zero) out.slope = slope(0.0, sname, "delta = 1, c*g(0) = f(0)");
            else if (crit.sign == SignAtZero::positive)
                out.slope = slope(-std::pow((crit.cstar * cs.g(0.0) - cs.f(0.0)) / k1, q), sname,
                                  "delta = 1, c*g(0) > f(0)");
            else out.slope = slope(std::nullopt, sname, "delta = 1, sign of c*g(0) - f(0) unknown");
        } else {
            if (crit.sign == SignAtZero::positive) out.slope = slope(-kInf, sname, "delta > 1, c*g(0) > f(0)");
            else out.slope = slope(std::nullopt, sname, "delta > 1 without c*g(0) > f(0) is not covered");
        }
    } else {
        out.slope = slope(std::nullopt, sname, "beta undecided");
    }
    return out;
}

std::optional<PowerLawVerdict> power_law_alpha(double c, const CriticalSpeed& crit, const CoefficientSet& cs) {
    if (!cs.meta1.complete()) return std::nullopt;
    const double p = cs.p, q = cs.q();
    const double delta = cs.meta1.d->exponent, r = cs.meta1.rho->exponent, k1 = cs.meta1.d->constant;
    const double m = r * (p - 1.0) + delta;
    if (!(m + p > 1.0)) return std::nullopt;
    const double l1 = cs.lambda(c, 1.0);
    const std::string tail = "; delta = " + fmt(delta) + ", r = " + fmt(r) + ", r(p-1)+delta = " + fmt(m);

    auto fin = [](bool finite) { return finite ? Finiteness::finite : Finiteness::infinite; };
    const int m1 = compare_exponents(m, 1.0);
    const bool pd2 = compare_exponents(p + delta, 2.0) > 0;
    const bool r_lt_1 = compare_exponents(r, 1.0) < 0;

    std::vector<PowerLawVerdict> vs;
    for (int s : signs_of(lambda1_signs(c, crit, cs))) {
        PowerLawVerdict v;
        if (m1 == 0) {
            v.time.value = fin(pd2);
            v.time.criterion = "power law at 1: r(p-1)+delta = 1, finite iff p+delta > 2";
        } else if (m1 > 0 && s < 0) {
            v.time.value = fin(pd2);
            v.time.criterion = "power law at 1: r(p-1)+delta > 1, c g(1) < f(1), finite iff p+delta > 2";
        } else if (m1 > 0 && s > 0) {
            v.time.value = fin(r_lt_1);
            v.time.criterion = "power law at 1: r(p-1)+delta > 1, c g(1) > f(1), finite iff r < 1";
        } else if (m1 > 0) {
            v.time.criterion = "power law at 1: r(p-1)+delta > 1, c g(1) = f(1)";
            if (r_lt_1) v.time.value = Finiteness::finite;
            else v.time.detail = "r >= 1 is not covered";
        } else {
            v.time.value = fin(compare_exponents(p + delta, r + 1.0) > 0);
            v.time.criterion = "power law at 1: r(p-1)+delta < 1, finite iff p+delta > r+1";
        }
        v.time.detail += tail;

        const std::string sname = "power law at 1, slope";
        if (v.time.value == Finiteness::infinite) {
            v.slope = slope(0.0, kRuleInfiniteTime);
        } else if (v.time.value == Finiteness::finite) {
            int d1 = compare_exponents(delta, 1.0);
            if (d1 < 0) v.slope = slope(0.0, sname, "delta < 1");
            else if (d1 == 0)
                v.slope = s >= 0 ? slope(0.0, sname, "delta = 1, c g(1) >= f(1)")
                                 : slope(-std::pow(std::abs(l1) / k1, q), sname, "delta = 1, c g(1) < f(1)");
            else if (s > 0) v.slope = slope(0.0, sname, "delta > 1, c g(1) > f(1)");
            else if (s < 0) v.slope = slope(-kInf, sname, "delta > 1, c g(1) < f(1)");
            else v.slope = slope(std::nullopt, sname, "delta > 1, c g(1) = f(1) is not covered");
        } else {
            v.slope = slope(std::nullopt, sname, "alpha undecided");
        }
        vs.push_back(v);
    }
    if (vs.size() == 1) return vs.front();
    std::vector<FinitenessVerdict> ts;
    std::vector<SlopeVerdict> ss;
    for (const auto& v : vs) {
        ts.push_back(v.time);
        ss.push_back(v.slope);
    }
    return PowerLawVerdict{combine(ts), combine(ss)};
}

// -------------------------------------------------------------- numerics

NumericEvidence numeric_evidence(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim) {
    NumericEvidence ev;
    ev.c = sol.c;
    auto guarded = [&](auto fn, EndpointTime& out, const char* name) {
        try {
            out = fn();
        } catch (const Error& e) {
            out = EndpointTime{};
            out.finiteness = Finiteness::unknown;
            out.note = e.what();
            ev.note += std::string(name) + ": " + e.what() + "; ";
        }
    };
    guarded([&] { return time_to_zero(sol, cs, lim); }, ev.beta, "beta");
    guarded([&] { return time_to_one(sol, cs, lim); }, ev.alpha, "alpha");
    try {
        ZField zf(sol, cs, lim);
        ev.slope_0 = numeric_slope(zf.tail(Endpoint::zero), cs);
        ev.slope_1 = numeric_slope(zf.tail(Endpoint::one), cs);
    } catch (const Error& e) {
        ev.note += std::string("slopes: ") + e.what() + "; ";
    }
    return ev;
}

// ----------------------------------------------------------------- merge

namespace {

FinitenessVerdict merge_analytic(const FinitenessVerdict& general, const std::optional<PowerLawVerdict>& pl,
                                 std::vector<std::string>& conflicts, const char* field) {
    if (!pl || pl->time.value == Finiteness::unknown) return general;
    if (general.value == Finiteness::unknown) {
        if (general.open_case) return general;
        return pl->time;
    }
    if (general.value != pl->time.value) {
        conflicts.push_back(std::string(field) + ": general criterion (" + general.criterion + ") says " +
                            to_string(general.value) + ", power-law rule (" + pl->time.criterion + ") says " +
                            to_string(pl->time.value));
        FinitenessVerdict v = unknown_verdict("conflict", conflicts.back());
        return v;
    }
    return general;
}

SlopeVerdict merge_analytic(const SlopeVerdict& general, const std::optional<PowerLawVerdict>& pl,
                            std::vector<std::string>& conflicts, const char* field) {
    if (!pl || !pl->slope.value) return general;
    if (!general.value) return pl->slope;
    if (!same_slope(general.value, pl->slope.value)) {
        conflicts.push_back(std::string(field) + ": general criterion gives " + fmt(*general.value) +
                            ", power-law rule gives " + fmt(*pl->slope.value));
        return slope(std::nullopt, "conflict", conflicts.back());
    }
    return general;
}

Finiteness merge_field(const FinitenessVerdict& analytic, Finiteness numeric, bool have_numeric, FieldEvidence& ev,
                       std::vector<std::string>& conflicts, const char* field) {
    const bool a = analytic.value != Finiteness::unknown;
    const bool n = have_numeric && numeric != Finiteness::unknown;
    if (analytic.criterion == "conflict") {
        ev = {Provenance::conflict, analytic.detail};
        return Finiteness::unknown;
    }
    if (a && n) {
        if (analytic.value == numeric) {
            ev = {Provenance::both_agree, analytic.criterion};
            return analytic.value;
        }
        conflicts.push_back(std::string(field) + ": " + analytic.criterion + " says " + to_string(analytic.value) +
                            ", quadrature says " + to_string(numeric));
        ev = {Provenance::conflict, conflicts.back()};
        return Finiteness::unknown;
    }
    if (a) {
        ev = {Provenance::analytic_criterion, analytic.criterion};
        return analytic.value;
    }
    if (n && !analytic.open_case) {
        ev = {Provenance::numeric_quadrature, "quadrature; analytic: " + analytic.detail};
        return numeric;
    }
    ev = {Provenance::analytic_criterion, analytic.criterion + ": " + analytic.detail};
    return Finiteness::unknown;
}

std::optional<double> merge_slope(const SlopeVerdict& analytic, const std::optional<double>& numeric, bool have_numeric,
                                  FieldEvidence& ev, std::vector<std::string>& conflicts, const char* field) {
    if (analytic.criterion == "conflict") {
        ev = {Provenance::conflict, analytic.detail};
        return std::nullopt;
    }
    const bool n = have_numeric && numeric.has_value();
    if (analytic.value && n) {
        if (same_slope(analytic.value, numeric)) {
            ev = {Provenance::both_agree, analytic.criterion};
            return analytic.value;
        }
        conflicts.push_back(std::string(field) + ": " + analytic.criterion + " gives " + fmt(*analytic.value) +
                            ", tail model gives " + fmt(*numeric));
        ev = {Provenance::conflict, conflicts.back()};
        return std::nullopt;
    }
    if (analytic.value) {
        ev = {Provenance::analytic_criterion, analytic.criterion};
        return analytic.value;
    }
    if (n) {
        ev = {Provenance::numeric_quadrature, "tail model; analytic: " + analytic.detail};
        return numeric;
    }
    ev = {Provenance::analytic_criterion, analytic.criterion + ": " + analytic.detail};
    return std::nullopt;
}

// A negative slope forces a finite time; an infinite time forces slope 0.
void cohere(Finiteness& time, std::optional<double>& slope_v, FieldEvidence& tev, FieldEvidence& sev,
            std::vector<std::string>& conflicts, const char* where) {
    if (slope_v && *slope_v < 0.0) {
        if (time == Finiteness::infinite) {
            conflicts.push_back(std::string(where) + ": negative slope with infinite endpoint time");
            tev = {Provenance::conflict, conflicts.back()};
            sev = {Provenance::conflict, conflicts.back()};
            time = Finiteness::unknown;
            slope_v.reset();
        } else if (time == Finiteness::unknown && tev.provenance != Provenance::conflict) {
            time = Finiteness::finite;
            tev.detail = "forced by the negative slope; " + tev.detail;
        }
    } else if (!slope_v && time == Finiteness::infinite && sev.provenance != Provenance::conflict) {
        slope_v = 0.0;
        sev.detail = std::string(kRuleInfiniteTime) + "; " + sev.detail;
    }
}

} // namespace

WaveClassification classify(double c, const CriticalSpeed& crit, const CoefficientSet& cs, const EndpointLimits& lim,
                            const ReducedSolution* sol) {
    WaveClassification w;
    w.c = c;
    w.critical = crit.is_critical(c);
    w.beta_general = beta_finiteness(c, crit, cs, lim);
    w.alpha_general = alpha_finiteness(c, crit, cs, lim);
    w.slope_0_general = slope_at_zero(c, crit, cs, lim);
    w.slope_1_general = slope_at_one(c, crit, cs, lim);

    // Rules that fix the slope from the time verdict or the speed.
    if (!w.slope_0_general.value) {
        if (!w.critical && lim.ell0.known() && !lim.ell0.is_infinite() &&
            (lim.ell0.value > 0.0 || chain_holds(cs.meta0)))
            w.slope_0_general = slope(0.0, kRuleSupercriticalSlope);
        else if (w.beta_general.value == Finiteness::infinite)
            w.slope_0_general = slope(0.0, kRuleInfiniteTime);
    }
    if (!w.slope_1_general.value) {
        if (w.alpha_general.criterion == kRuleTInfinity && w.alpha_general.value == Finiteness::finite)
            w.slope_1_general = slope(0.0, kRuleTInfinitySlope);
        else if (w.alpha_general.value == Finiteness::infinite)
            w.slope_1_general = slope(0.0, kRuleInfiniteTime);
    }

    w.beta_power_law = power_law_beta(c, crit, cs);
    w.alpha_power_law = power_law_alpha(c, crit, cs);

    FinitenessVerdict beta_a = merge_analytic(w.beta_general, w.beta_power_law, w.conflicts, "beta");
    FinitenessVerdict alpha_a = merge_analytic(w.alpha_general, w.alpha_power_law, w.conflicts, "alpha");
    SlopeVerdict s0_a = merge_analytic(w.slope_0_general, w.beta_power_law, w.conflicts, "slope at 0");
    SlopeVerdict s1_a = merge_analytic(w.slope_1_general, w.alpha_power_law, w.conflicts, "slope at 1");

    const bool have_numeric = sol != nullptr;
    if (sol) w.numeric = numeric_evidence(*sol, cs, lim);
    const NumericEvidence empty;
    const NumericEvidence& ev = w.numeric ? *w.numeric : empty;

    w.beta_finite = merge_field(beta_a, ev.beta.finiteness, have_numeric, w.beta_evidence, w.conflicts, "beta");
    w.alpha_finite = merge_field(alpha_a, ev.alpha.finiteness, have_numeric, w.alpha_evidence, w.conflicts, "alpha");
    w.slope_at_0 = merge_slope(s0_a, ev.slope_0, have_numeric, w.slope_0_evidence, w.conflicts, "slope at 0");
    w.slope_at_1 = merge_slope(s1_a, ev.slope_1, have_numeric, w.slope_1_evidence, w.conflicts, "slope at 1");

    // An open case stays unknown whatever the numerics say.
    if (beta_a.open_case && beta_a.value == Finiteness::unknown) w.beta_finite = Finiteness::unknown;

    cohere(w.beta_finite, w.slope_at_0, w.beta_evidence, w.slope_0_evidence, w.conflicts, "endpoint 0");
    cohere(w.alpha_finite, w.slope_at_1, w.alpha_evidence, w.slope_1_evidence, w.conflicts, "endpoint 1");
    if (beta_a.open_case && w.beta_finite != Finiteness::unknown && beta_a.value == Finiteness::unknown &&
        w.beta_evidence.provenance != Provenance::conflict)
        w.beta_finite = Finiteness::unknown;

    w.type = wave_type(w.slope_at_1, w.slope_at_0);
    return w;
}

WaveClassification classify_with_numerics(double c, const CriticalSpeed& crit, const CoefficientSet& cs,
                                          const EndpointLimits& lim, const IntegrationOptions& opts) {
    const double c_shot = crit.is_critical(c) ? std::max(c, crit.surviving) : c;
    try {
        ReducedSolution sol = solve_from_one(c_shot, cs, lim, opts);
        if (sol.termination == Termination::reached_floor) return classify(c, crit, cs, lim, &sol);
        WaveClassification w = classify(c, crit, cs, lim);
        w.numeric = NumericEvidence{};
        w.numeric->c = c_shot;
        w.numeric->note = std::string("reduced solution did not reach the floor: ") + to_string(sol.termination);
        return w;
    } catch (const Error& e) {
        WaveClassification w = classify(c, crit, cs, lim);
        w.numeric = NumericEvidence{};
        w.numeric->c = c_shot;
        w.numeric->note = std::string("reduced solution failed: ") + e.what();
        return w;
    }
}

} // namespace twave
