#include "twave/coefficients.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace twave {

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<double> clustered_grid(int n) {
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
    for (int i = 1; i < n; ++i) nodes.push_back(0.5 * (1.0 - std::cos(std::numbers::pi * i / n)));
    return nodes;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Scans the grid for points where pred fails; records the first and the worst.
template <class Fn, class Pred>
HypothesisCheck scan(const std::string& name, const std::vector<double>& grid, Fn value, Pred ok) {
    HypothesisCheck chk;
    chk.name = name;
    double worst_u = 0, worst_v = kInf, last_bad = 0;
    int bad = 0;
    for (double u : grid) {
        double v = value(u);
        if (!ok(v)) {
            if (!chk.first_violation) chk.first_violation = u;
            if (!(v >= worst_v)) {
                worst_v = v;
                worst_u = u;
            }
            last_bad = u;
            ++bad;
        }
    }
    chk.pass = bad == 0;
    if (!chk.pass)
        chk.detail = std::to_string(bad) + " grid points violate on [" + fmt(*chk.first_violation) + ", " + fmt(last_bad) +
                     "], worst at u=" + fmt(worst_u);
    return chk;
}

HypothesisCheck endpoint_zero(const std::string& name, double u, double value, double scale) {
    HypothesisCheck chk;
    chk.name = name;
    chk.pass = std::isfinite(value) && std::abs(value) <= 1e-12 * (1.0 + scale);
    if (!chk.pass) {
        chk.first_violation = u;
        chk.detail = "value " + fmt(value);
    }
    return chk;
}

} // namespace

ValidationReport validate_hypotheses(const CoefficientSet& cs, int grid_size) {
    ValidationReport rep;
    rep.grid_size = grid_size;
    if (grid_size < 16) grid_size = 16;
    const auto grid = clustered_grid(grid_size);

    HypothesisCheck pchk;
    pchk.name = "p > 1";
    pchk.pass = cs.p > 1.0 && std::isfinite(cs.p);
    if (!pchk.pass) pchk.detail = "p = " + fmt(cs.p);
    rep.checks.push_back(pchk);

    auto safe = [](const Coefficient& c) {
        return [&c](double u) {
            try {
                return c(u);
            } catch (...) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
    };
    auto rho = safe(cs.rho);
    auto g = safe(cs.g);
    auto d = safe(cs.d);

    double rho_scale = 0;
    for (double u : grid) {
        double v = rho(u);
        if (std::isfinite(v)) rho_scale = std::max(rho_scale, std::abs(v));
    }
    rep.checks.push_back(endpoint_zero("rho(0) = 0", 0.0, rho(0.0), rho_scale));
    rep.checks.push_back(endpoint_zero("rho(1) = 0", 1.0, rho(1.0), rho_scale));
    rep.checks.push_back(scan("rho > 0 on (0,1)", grid, rho, [](double v) { return v > 0.0; }));

    HypothesisCheck g0;
    g0.name = "g(0) > 0";
    double gz = g(0.0);
    g0.pass = gz > 0.0;
    if (!g0.pass) {
        g0.first_violation = 0.0;
        g0.detail = "g(0) = " + fmt(gz);
    }
    rep.checks.push_back(g0);

    // Each node is integrated from 0 independently so that the value at a
    // shared node does not depend on the grid size.
    auto running_g = [&g](double u) {
        try {
            return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, u, 8, 1e-12);
        } catch (...) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    rep.checks.push_back(scan("integral of g over (0,u) > 0", grid, running_g, [](double v) { return v > 0.0; }));

    rep.checks.push_back(scan("d > 0 on (0,1)", grid, d, [](double v) { return v > 0.0; }));

    // Integrability of h = d^q rho near both endpoints plus a global quadrature.
    HypothesisCheck integ;
    integ.name = "rho d^(1/(p-1)) integrable";
    if (pchk.pass) {
        const double q = cs.q();
        auto h = [&](double u) {
            double dv = d(u), rv = rho(u);
            return std::pow(std::abs(dv), q) * std::abs(rv);
        };
        std::optional<double> e0, e1;
        if (cs.meta0.complete()) e0 = cs.meta0.rho->exponent + cs.meta0.d->exponent * q;
        if (cs.meta1.complete()) e1 = cs.meta1.rho->exponent + cs.meta1.d->exponent * q;
        IntegralTest t0 = integral_test(h, Endpoint::zero, e0);
        IntegralTest t1 = integral_test(h, Endpoint::one, e1);
        std::string detail;
        if (t0.verdict != Convergence::convergent) {
            integ.pass = false;
            integ.first_violation = 0.0;
            detail += "near 0: " + std::string(to_string(t0.verdict)) + " (exponent " + fmt(t0.exponent) + ", " + t0.note + "); ";
        }
        if (t1.verdict != Convergence::convergent) {
            integ.pass = false;
            if (!integ.first_violation) integ.first_violation = 1.0;
            detail += "near 1: " + std::string(to_string(t1.verdict)) + " (exponent " + fmt(t1.exponent) + ", " + t1.note + "); ";
        }
        if (integ.pass) {
            double val = kInf;
            try {
                boost::math::quadrature::tanh_sinh<double> ts;
                val = ts.integrate(h, 0.0, 1.0);
            } catch (...) {
            }
            if (!std::isfinite(val)) {
                integ.pass = false;
                detail = "quadrature did not converge";
            } else {
                detail = "integral = " + fmt(val);
            }
        }
        integ.detail = detail;
    } else {
        integ.pass = false;
        integ.detail = "skipped: p <= 1";
    }
    rep.checks.push_back(integ);
    return rep;
}

} // namespace twave
