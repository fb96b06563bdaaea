#include "twave/wavespeed.hpp"

#include "twave/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>

namespace twave {

namespace {

// Endpoint-safe integral: tanh_sinh samples within underflow range of the ends,
// where products like u^2 * u^-2 turn into 0 * inf; Gauss-Kronrod stays clear.
double integrate_cell(const ScalarFn& fn, double a, double b) {
    try {
        boost::math::quadrature::tanh_sinh<double> ts;
        double v = ts.integrate(fn, a, b);
        if (std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 15, 1e-12);
}

// Cumulative integrals of fn on the uniform grid i/n, i = 0..n.
std::vector<double> cumulative(const ScalarFn& fn, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
        double piece;
        if (i == 0 || i == n - 1) piece = integrate_cell(fn, a, b);
        else piece = boost::math::quadrature::gauss<double, 15>::integrate(fn, a, b);
        out[static_cast<std::size_t>(i) + 1] = out[static_cast<std::size_t>(i)] + piece;
    }
    return out;
}

double bound_constant(double p) { return p / (p - 1.0) * std::pow(p - 1.0, 1.0 / p); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

} // namespace

AnalyticBounds analytic_bounds(const CoefficientSet& cs, const EndpointLimits& lim, int grid) {
    if (!lim.ell0.known()) throw Error(ErrorCode::oscillating_limit, "ell0 unknown; supply power-law descriptors at 0");
    if (std::isinf(lim.ell0.value))
        throw Error(ErrorCode::no_existence, "ell0 = +inf: no traveling wave exists for any speed");
    AnalyticBounds b;
    b.ell0 = lim.ell0.value;
    const double g0 = cs.g(0.0);
    if (!(g0 >= 1e-8)) throw Error(ErrorCode::invalid_argument, "g(0) below 1e-8: " + fmt(g0));

    auto G = cumulative([&](double s) { return cs.g(s); }, grid);
    auto F = cumulative([&](double s) { return cs.f(s); }, grid);
    auto L = cumulative([&](double s) { return cs.h_over_u(s); }, grid);

    b.G0 = g0;
    b.F0 = cs.f(0.0);
    b.L0 = b.ell0;
    for (int i = 1; i <= grid; ++i) {
        double u = static_cast<double>(i) / grid;
        auto k = static_cast<std::size_t>(i);
        b.G0 = std::min(b.G0, G[k] / u);
        b.F0 = std::max(b.F0, F[k] / u);
        if (std::isfinite(L[k])) b.L0 = std::max(b.L0, L[k] / u);
    }
    if (!(b.G0 >= 1e-8)) throw Error(ErrorCode::invalid_argument, "G0 below 1e-8: " + fmt(b.G0));

    const double P = bound_constant(cs.p);
    const double pc = cs.p_conj();
    b.lower = cs.f(0.0) / g0 + P * std::pow(b.ell0, 1.0 / pc) / g0;
    b.upper = b.F0 / b.G0 + P * std::pow(b.L0, 1.0 / pc) / b.G0;
    return b;
}

ShotOutcome shoot(double c, const CoefficientSet& cs, const EndpointLimits& lim, const IntegrationOptions& opts,
                  double eps) {
    ShotOutcome out;
    out.c = c;
    Eta0Roots roots = eta0_roots(c, lim, cs);
    if (!roots.exist) {
        out.reason = "eta0 has no roots";
        return out;
    }
    out.r0_plus = roots.plus;
    StartPoint st = startup_at_one(c, cs, lim, eps);
    ReducedSolution sol = integrate_reduced(c, cs, st, Direction::toward_zero, opts);
    const auto& last = sol.samples.back();
    out.a_floor = last.z / last.u;
    switch (sol.termination) {
    case Termination::bound_exceeded:
        out.reason = "z exceeded M u at u = " + fmt(last.u);
        return out;
    case Termination::touchdown:
        out.reason = "touchdown at u = " + fmt(*sol.touchdown);
        return out;
    default: break;
    }
    double scale = std::max(std::abs(cs.lambda(c, 0.0)), 1e-12);
    if (out.a_floor > roots.plus * (1.0 + 1e-3) + 1e-3 * scale) {
        out.reason = "z/u at the floor exceeds the larger eta0 root";
        return out;
    }
    out.above = true;
    out.reason = "reached the floor below the larger eta0 root";
    return out;
}

const char* to_string(SignAtZero s) {
    switch (s) {
    case SignAtZero::positive: return "positive";
    case SignAtZero::zero: return "zero";
    case SignAtZero::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(StimaVerdict v) {
    switch (v) {
    case StimaVerdict::proves_greater: return "ProvesGreater";
    case StimaVerdict::proves_less_eq: return "ProvesLessEq";
    case StimaVerdict::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

StimaResult stima_test(const CoefficientSet& cs, double k, int grid_size) {
    StimaResult res;
    res.k = k;
    const double p = cs.p;
    const double P = std::pow(p, p) / std::pow(p - 1.0, p - 1.0);
    auto phi = [&](double u) { return k * cs.g(u) - cs.f(u); };
    double scale = 1.0 + std::abs(k * cs.g(0.0)) + std::abs(cs.f(0.0));

    // (a) f >= k g on probes approaching 0.
    bool a_holds = phi(0.0) <= 1e-14 * scale;
    for (int j = 12; j <= 40 && a_holds; ++j) a_holds = phi(std::ldexp(1.0, -j)) <= 1e-14 * scale;
    if (a_holds) {
        res.verdict = StimaVerdict::proves_greater;
        res.clause = 'a';
        res.detail = "f >= k g at u = 0 and u = 2^-j, j = 12..40";
        return res;
    }

    auto integral = [&](double u) {
        return boost::math::quadrature::gauss<double, 20>::integrate(phi, 0.0, u);
    };
    auto lhs = [&](double u) {
        double ph = phi(u);
        return std::pow(std::max(ph, 0.0), p - 1.0) * integral(u);
    };
    auto rhs = [&](double u) { return cs.d(u) * std::pow(cs.rho(u), p - 1.0); };

    // (b) k g >= f and the integral inequality on the whole grid.
    bool b_holds = true;
    double worst_u = 0.0, worst_ratio = kInf;
    for (double u : clustered_grid(grid_size)) {
        double ph = phi(u);
        if (ph < -1e-14 * scale) {
            b_holds = false;
            worst_u = u;
            break;
        }
        double l = lhs(u), r = P * rhs(u);
        if (l < r * (1.0 - 1e-12)) {
            b_holds = false;
            if (r > 0 && l / r < worst_ratio) {
                worst_ratio = l / r;
                worst_u = u;
            }
        }
    }
    if (b_holds) {
        res.verdict = StimaVerdict::proves_less_eq;
        res.clause = 'b';
        res.detail = "k g >= f and the integral inequality hold on " + std::to_string(grid_size - 1) + " grid points";
        return res;
    }

    // (c) near 0: k g >= f and lhs <= ell rhs with ell below P.
    bool c_sign = true;
    double ell = 0.0;
    for (int j = 12; j <= 40; ++j) {
        double u = std::ldexp(1.0, -j);
        if (phi(u) < -1e-14 * scale) {
            c_sign = false;
            break;
        }
        double r = rhs(u);
        double ratio = r > 0.0 ? lhs(u) / r : kInf;
        ell = std::max(ell, ratio);
    }
    if (c_sign && ell < P * (1.0 - 1e-3)) {
        res.verdict = StimaVerdict::proves_greater;
        res.clause = 'c';
        res.detail = "near-zero ratio bound " + fmt(ell) + " < " + fmt(P);
        return res;
    }
    std::ostringstream os;
    os << "(b) fails near u = " << fmt(worst_u) << "; (c) ";
    if (!c_sign) os << "fails: k g < f near 0";
    else os << "ratio bound " << fmt(ell) << " not below " << fmt(P);
    res.detail = os.str();
    return res;
}

SignAtZero sign_at_zero(const CoefficientSet& cs, const EndpointLimits& lim, const WaveSpeedEstimate& est,
                        std::string* provenance) {
    auto set = [&](const std::string& s) {
        if (provenance) *provenance = s;
    };
    if (lim.ell0.is_positive_finite()) {
        set("analytic lower bound with ell0 > 0");
        return SignAtZero::positive;
    }
    const double g0 = cs.g(0.0);
    StimaResult st = stima_test(cs, cs.f(0.0) / g0);
    if (st.verdict == StimaVerdict::proves_less_eq) {
        set("sign test (b) at k = f(0)/g(0), grid-certified");
        return SignAtZero::zero;
    }
    if (st.verdict == StimaVerdict::proves_greater) {
        set(std::string("sign test (") + st.clause + ") at k = f(0)/g(0), grid-certified");
        return SignAtZero::positive;
    }
    double margin = est.cstar * g0 - cs.f(0.0);
    if (margin > 10.0 * est.tol) {
        set("numeric margin c* g(0) - f(0) = " + fmt(margin));
        return SignAtZero::positive;
    }
    set("sign tests inconclusive and numeric margin below 10 tol");
    return SignAtZero::unknown;
}

WaveSpeedEstimate cstar(const CoefficientSet& cs, const EndpointLimits& lim, const CStarOptions& opts) {
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
    WaveSpeedEstimate est;
    est.tol = opts.tol;
    est.bounds = analytic_bounds(cs, lim);

    auto run = [&](double c) {
        ++est.shots;
        return shoot(c, cs, lim, opts.integration, opts.eps);
    };

    double lo = est.bounds.lower;
    double hi = std::max(est.bounds.upper, lo);
    ShotOutcome at_lo = run(lo);
    if (at_lo.above) {
        // The threshold cannot lie below the analytic lower bound.
        est.at_lower_bound = true;
        hi = lo;
    } else {
        ShotOutcome at_hi = run(hi);
        double width = std::max(hi - lo, 1e-3 * (1.0 + std::abs(lo)));
        while (!at_hi.above) {
            if (++est.expansions > opts.max_expansions)
                throw Error(ErrorCode::bracket_failure, "no surviving shot found above the analytic upper bound");
            lo = hi;
            width *= 2.0;
            hi = lo + width;
            at_hi = run(hi);
        }
        // Pre-scan for a single below -> above step; anything else breaks the monotone assumption.
        std::vector<std::pair<double, bool>> scan;
        for (int i = 1; i <= opts.scan_points; ++i) {
            double c = lo + (hi - lo) * i / (opts.scan_points + 1);
            scan.emplace_back(c, run(c).above);
        }
        double new_lo = lo, new_hi = hi;
        bool seen_above = false;
        for (const auto& [c, above] : scan) {
            if (above) {
                if (!seen_above) new_hi = c;
                seen_above = true;
            } else {
                if (seen_above)
                    throw Error(ErrorCode::bracket_failure,
                                "shooting outcome is not monotone in c: below threshold at c = " + fmt(c) +
                                    " after a surviving shot");
                new_lo = c;
            }
        }
        lo = new_lo;
        hi = new_hi;
        double target = opts.refine ? opts.refine_width * (1.0 + std::abs(hi)) : opts.tol;
        target = std::min(target, opts.tol);
        while (hi - lo > target) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            ++est.iterations;
            if (run(mid).above) hi = mid;
            else lo = mid;
        }
    }
    est.bracket_lo = lo;
    est.bracket_hi = hi;
    est.cstar = 0.5 * (lo + hi);
    est.half_width = 0.5 * (hi - lo);

    // Boundary slope at the surviving endpoint.
    ReducedSolution sol = solve_from_one(hi, cs, lim, opts.integration, opts.eps);
    est.slope_0 = sol.z_slope_0;
    est.roots = eta0_roots(hi, lim, cs);
    if (est.slope_0 && est.roots.exist) {
        double a = est.slope_0->value;
        est.slope_branch = std::abs(a - est.roots.plus) <= std::abs(a - est.roots.minus) ? "r0_plus" : "r0_minus";
    }

    est.mean_g = integrate_cell([&](double u) { return cs.g(u); }, 0.0, 1.0);
    est.mean_f = integrate_cell([&](double u) { return cs.f(u); }, 0.0, 1.0);
    est.sign_at_zero = sign_at_zero(cs, lim, est, &est.sign_provenance);
    return est;
}

WaveSpeedEstimate cstar(const CoefficientSet& cs, double tol) {
    CStarOptions opts;
    opts.tol = tol;
    return cstar(cs, endpoint_limits(cs), opts);
}

} // namespace twave
