#include "twave/coefficients.hpp"
#include "twave/error.hpp"

#include <array>
#include <cmath>

namespace twave {

namespace {

constexpr int kLimitJMin = 8;
constexpr int kLimitJMax = 24;
constexpr double kLimitRelTol = 1e-4;

double aitken(double a, double b, double c) {
    double den = a - 2.0 * b + c;
    if (std::abs(den) <= 1e-14 * (std::abs(a) + std::abs(b) + std::abs(c))) return c;
    return c - (c - b) * (c - b) / den;
}

double sample(const ScalarFn& fn, Endpoint e, int j) {
    return fn(point_at(e, std::ldexp(1.0, -j)));
}

} // namespace

double extrapolate_limit(const ScalarFn& fn, Endpoint e) {
    constexpr int n = kLimitJMax - kLimitJMin + 1;
    std::array<double, n> v{};
    for (int i = 0; i < n; ++i) v[i] = sample(fn, e, kLimitJMin + i);

    double last = v[n - 1];
    if (std::isnan(last)) throw Error(ErrorCode::oscillating_limit, "limit probe produced NaN");
    if (std::isinf(v[n - 1]) && std::isinf(v[n - 2]) && std::isinf(v[n - 3])) return v[n - 1];
    if (v[n - 1] == 0.0 && v[n - 2] == 0.0 && v[n - 3] == 0.0) return 0.0;

    // The tail must keep one sign.
    double sign = last > 0.0 ? 1.0 : -1.0;
    for (int i = n - 6; i < n; ++i) {
        if (!(v[i] * sign > 0.0) || !std::isfinite(v[i]))
            throw Error(ErrorCode::oscillating_limit, "limit probe changes sign or is not finite near the endpoint");
    }

    std::array<double, n> w{};
    for (int i = 0; i < n; ++i) w[i] = std::abs(v[i]);
    auto slope = [&](int i) { return std::log2(w[i] / w[i + 1]); };
    double k_last = slope(n - 2);
    double k_prev = slope(n - 3);

    if (std::abs(k_last) > kExponentMargin) {
        if (std::abs(k_last - k_prev) <= 0.25 * std::abs(k_last) + kExponentMargin)
            return k_last > 0.0 ? 0.0 : sign * kInf;
        throw Error(ErrorCode::oscillating_limit, "log-log slope does not stabilize near the endpoint");
    }

    double a1 = aitken(w[n - 3], w[n - 2], w[n - 1]);
    double a0 = aitken(w[n - 4], w[n - 3], w[n - 2]);
    double scale = std::max(std::abs(a1), 1e-300);
    if (std::isfinite(a1) && std::abs(a1 - a0) <= kLimitRelTol * scale) return sign * a1;
    if (std::abs(w[n - 1] - w[n - 2]) <= kLimitRelTol * w[n - 1]) return sign * w[n - 1];
    throw Error(ErrorCode::oscillating_limit, "successive extrapolants disagree beyond tolerance");
}

namespace {

// Limit of k * x^e as x -> 0+.
double power_limit(double k, double e) {
    int s = compare_exponents(e, 0.0);
    if (s > 0) return 0.0;
    if (s == 0) return k;
    return kInf;
}

Limit numeric_or_unknown(const ScalarFn& fn, Endpoint e) {
    try {
        return Limit::extrapolated(extrapolate_limit(fn, e));
    } catch (const Error&) {
        return Limit::unknown();
    }
}

} // namespace

EndpointLimits endpoint_limits(const CoefficientSet& cs) {
    EndpointLimits out;
    const double q = cs.q();

    if (cs.meta0.complete()) {
        const auto& dm = *cs.meta0.d;
        const auto& rm = *cs.meta0.rho;
        out.ell0 = Limit::analytic(power_limit(rm.constant * std::pow(dm.constant, q), rm.exponent + (dm.exponent - 1.0) * q));
    } else {
        out.ell0 = Limit::extrapolated(extrapolate_limit([&cs](double u) { return cs.h_over_u(u); }, Endpoint::zero));
    }
    if (cs.meta1.complete()) {
        const auto& dm = *cs.meta1.d;
        const auto& rm = *cs.meta1.rho;
        out.ell1 = Limit::analytic(power_limit(rm.constant * std::pow(dm.constant, q), rm.exponent + (dm.exponent - 1.0) * q));
    } else {
        out.ell1 = numeric_or_unknown([&cs](double u) { return cs.h_over_tau(1.0 - u); }, Endpoint::one);
    }
    out.h0 = out.ell0;
    out.h1 = out.ell1;

    if (cs.meta0.d) {
        const auto& dm = *cs.meta0.d;
        out.d_at_0 = Limit::analytic(power_limit(dm.constant, dm.exponent));
        out.ddot_0 = Limit::analytic(power_limit(dm.constant, dm.exponent - 1.0));
    } else {
        out.d_at_0 = numeric_or_unknown([&cs](double u) { return cs.d(u); }, Endpoint::zero);
        out.ddot_0 = numeric_or_unknown([&cs](double u) { return cs.d(u) / u; }, Endpoint::zero);
    }
    if (cs.meta1.d) {
        const auto& dm = *cs.meta1.d;
        out.d_at_1 = Limit::analytic(power_limit(dm.constant, dm.exponent));
        double lim = power_limit(dm.constant, dm.exponent - 1.0);
        out.ddot_1 = Limit::analytic(lim == 0.0 ? 0.0 : -lim);
    } else {
        out.d_at_1 = numeric_or_unknown([&cs](double u) { return cs.d(u); }, Endpoint::one);
        Limit l = numeric_or_unknown([&cs](double u) { return -cs.d(u) / (1.0 - u); }, Endpoint::one);
        if (l.known() && l.value == 0.0) l.value = 0.0;
        out.ddot_1 = l;
    }
    return out;
}

PowerFit power_fit(const ScalarFn& fn, Endpoint e, int j_min, int j_max) {
    if (j_max - j_min < 1) throw Error(ErrorCode::invalid_argument, "power_fit needs at least two probes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (int j = j_min; j <= j_max; ++j) {
        double x = std::ldexp(1.0, -j);
        double y = fn(point_at(e, x));
        if (!std::isfinite(y) || y <= 0.0)
            throw Error(ErrorCode::fit_failed, "function vanishes or is not finite at distance 2^-" + std::to_string(j));
        double lx = std::log(x), ly = std::log(y);
        xs.push_back(lx);
        ys.push_back(ly);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = static_cast<double>(xs.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (icpt + slope * xs[i]);
        ss += r * r;
    }
    return {slope, std::exp(icpt), std::sqrt(ss / n)};
}

double local_exponent(const ScalarFn& fn, Endpoint e, int j_max) {
    double a = sample(fn, e, j_max - 1);
    double b = sample(fn, e, j_max);
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(a / b);
}

IntegralTest integral_test(const ScalarFn& fn, Endpoint e, std::optional<double> analytic_exponent) {
    IntegralTest t;
    if (analytic_exponent) {
        t.analytic = true;
        t.exponent = *analytic_exponent;
        t.verdict = compare_exponents(t.exponent, -1.0) > 0 ? Convergence::convergent : Convergence::divergent;
        t.note = "exponent from power-law descriptors";
        return t;
    }
    double deep = sample(fn, e, 40);
    if (deep == 0.0 && sample(fn, e, 39) == 0.0) {
        t.exponent = kInf;
        t.verdict = Convergence::convergent;
        t.note = "integrand vanishes near the endpoint";
        return t;
    }
    double k = local_exponent(fn, e, 40);
    t.exponent = k;
    if (!std::isfinite(k)) {
        t.note = "integrand not positive and finite on the probe grid";
        return t;
    }
    t.note = "probed exponent";
    if (k > -1.0 + kExponentMargin) {
        t.verdict = Convergence::convergent;
    } else if (k < -1.0 - kExponentMargin) {
        t.verdict = Convergence::divergent;
    } else {
        ScalarFn scaled = [&fn, e](double u) { return distance_to(e, u) * fn(u); };
        try {
            double lim = extrapolate_limit(scaled, e);
            if (lim > 0.0) {
                t.verdict = Convergence::divergent;
                t.note = "borderline exponent, limit comparison with 1/distance";
            } else {
                t.note = "borderline exponent, limit comparison inconclusive";
            }
        } catch (const Error&) {
            t.note = "borderline exponent, limit comparison failed";
        }
    }
    return t;
}

} // namespace twave
