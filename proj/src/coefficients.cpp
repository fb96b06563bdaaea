#include "twave/coefficients.hpp"

#include <charconv>
#include <cmath>

namespace twave {

int compare_exponents(double a, double b) {
    if (std::abs(a - b) <= kExponentTie * (1.0 + std::abs(a) + std::abs(b))) return 0;
    return a < b ? -1 : 1;
}

Coefficient Coefficient::from_expression(const std::string& src) {
    Expression e = Expression::parse(src);
    return Coefficient([e](double u) { return e(u); }, src);
}

Coefficient Coefficient::constant(double v) {
    Expression e = Expression::constant(v);
    return Coefficient([v](double) { return v; }, e.source());
}

CoefficientSet CoefficientSet::from_expressions(double p, const std::string& f, const std::string& g,
                                                const std::string& d, const std::string& rho) {
    CoefficientSet cs;
    cs.p = p;
    cs.f = Coefficient::from_expression(f);
    cs.g = Coefficient::from_expression(g);
    cs.d = Coefficient::from_expression(d);
    cs.rho = Coefficient::from_expression(rho);
    return cs;
}

double CoefficientSet::h(double u) const {
    double dv = d(u);
    return std::pow(dv, q()) * rho(u);
}

double CoefficientSet::h_over_u(double u) const {
    return rho(u) * std::pow(d(u) / u, q());
}

double CoefficientSet::h_over_tau(double tau) const {
    double u = 1.0 - tau;
    return rho(u) * std::pow(d(u) / tau, q());
}

CoefficientSet CoefficientSet::black_box() const {
    CoefficientSet out = *this;
    out.meta0.d.reset();
    out.meta0.rho.reset();
    out.meta1.d.reset();
    out.meta1.rho.reset();
    return out;
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string symmetric_power(double k, double e) {
    std::string s = fmt_num(k);
    if (e == 0.0) return s;
    std::string ex = fmt_num(e);
    return s + "*u^" + ex + "*(1-u)^" + ex;
}

} // namespace

CoefficientSet symmetric_power_instance(double p, double delta, double r, double k1, double k2) {
    CoefficientSet cs = CoefficientSet::from_expressions(p, "0", "1", symmetric_power(k1, delta), symmetric_power(k2, r));
    cs.meta0.d = PowerLawMeta{k1, delta, Endpoint::zero};
    cs.meta0.rho = PowerLawMeta{k2, r, Endpoint::zero};
    cs.meta1.d = PowerLawMeta{k1, delta, Endpoint::one};
    cs.meta1.rho = PowerLawMeta{k2, r, Endpoint::one};
    return cs;
}

bool admissible_at_zero(double p, double delta, double r) {
    return compare_exponents(r, (1.0 - delta) / (p - 1.0)) >= 0;
}

bool admissible_at_one(double p, double delta, double r) {
    return compare_exponents(r * (p - 1.0) + delta + p, 1.0) > 0;
}

const char* to_string(Confidence c) {
    switch (c) {
    case Confidence::analytic: return "analytic";
    case Confidence::extrapolated: return "extrapolated";
    case Confidence::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(Convergence c) {
    switch (c) {
    case Convergence::convergent: return "convergent";
    case Convergence::divergent: return "divergent";
    case Convergence::undecided: return "undecided";
    }
    return "undecided";
}

} // namespace twave
