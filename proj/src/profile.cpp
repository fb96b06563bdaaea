#include "twave/profile.hpp"

#include "twave/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace twave {

const char* to_string(Finiteness f) {
    switch (f) {
    case Finiteness::finite: return "finite";
    case Finiteness::infinite: return "infinite";
    case Finiteness::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(TailKind k) {
    switch (k) {
    case TailKind::linear: return "linear";
    case TailKind::slow_manifold: return "slow-manifold";
    case TailKind::power: return "power";
    }
    return "linear";
}

namespace {

// Relative mismatch allowed between the tail model integrand and the
// integrand at the deepest sample before the tail is declared undecidable.
constexpr double kTailMismatch = 0.25;

double tail_slow_lambda(const CoefficientSet& cs, double c, Endpoint e) {
    return cs.lambda(c, e == Endpoint::zero ? 0.0 : 1.0);
}

// Slow manifold: (d/z)^q ~ lambda/rho, z ~ d rho^(p-1) / lambda^(p-1).
void make_slow_manifold(TailModel& t, const CoefficientSet& cs, double c, Endpoint e,
                        const std::optional<PowerLawMeta>& rho_meta) {
    t.kind = TailKind::slow_manifold;
    t.coefficient = tail_slow_lambda(cs, c, e);
    const double p = cs.p;
    const CoefficientSet* pcs = &cs;
    t.z_model = [pcs, c, e, p](double x) {
        double u = point_at(e, x);
        double lam = pcs->lambda(c, u);
        return pcs->d(u) * std::pow(pcs->rho(u), p - 1.0) / std::pow(lam, p - 1.0);
    };
    t.integrand = [pcs, c, e](double x) {
        double u = point_at(e, x);
        return pcs->lambda(c, u) / pcs->rho(u);
    };
    if (rho_meta) t.analytic_exponent = -rho_meta->exponent;
}

void make_linear(TailModel& t, const CoefficientSet& cs, Endpoint e, double m, const std::optional<PowerLawMeta>& d_meta) {
    t.kind = TailKind::linear;
    t.coefficient = m;
    const double q = cs.q();
    const CoefficientSet* pcs = &cs;
    t.z_model = [m](double x) { return m * x; };
    t.integrand = [pcs, e, m, q](double x) { return std::pow(pcs->d(point_at(e, x)) / (m * x), q); };
    if (d_meta) t.analytic_exponent = q * (d_meta->exponent - 1.0);
}

// x^e integrated from 0 to x0 given the integrand value there.
double power_tail(double value_at_x0, double x0, double exponent) { return value_at_x0 * x0 / (exponent + 1.0); }

// Quadrature of fn(x) over [x0, x1] in the variable log x.
double log_quadrature(const std::function<double(double)>& fn, double x0, double x1) {
    if (!(x1 > x0)) return 0.0;
    auto g = [&](double s) {
        double x = std::exp(s);
        return fn(x) * x;
    };
    double a = std::log(x0), b = std::log(x1);
    // Split into unit pieces in log x so each panel sees a mild variation.
    int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
        double lo = a + (b - a) * i / pieces, hi = a + (b - a) * (i + 1) / pieces;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 10, 1e-12);
    }
    return total;
}

} // namespace

TailModel tail_model_at_zero(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim) {
    TailModel t;
    t.endpoint = Endpoint::zero;
    const double c = sol.c;
    const double lam0 = cs.lambda(c, 0.0);
    const double scale = std::max(std::abs(lam0), 1e-12);
    std::optional<BoundarySlope> slope = sol.z_slope_0;
    if (!slope) slope = measure_slope_at_zero(sol, scale);
    const bool h0_positive = lim.h0.known() && lim.h0.value > 0.0;
    const bool slope_positive = slope && slope->value > 1e-2 * scale;
    if (h0_positive || slope_positive) {
        double m = slope && slope->value > 0.0 ? slope->value : sol.z_at(sol.u_min()) / sol.u_min();
        make_linear(t, cs, Endpoint::zero, m, cs.meta0.d);
        return t;
    }
    if (lam0 > 1e-8 * (1.0 + std::abs(c))) {
        make_slow_manifold(t, cs, c, Endpoint::zero, cs.meta0.rho);
        return t;
    }
    throw Error(ErrorCode::undecidable_tail, "z'(0+) = 0 with c g(0) - f(0) = 0: no tail model at 0");
}

TailModel tail_model_at_one(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits&) {
    TailModel t;
    t.endpoint = Endpoint::one;
    const StartPoint& st = sol.start;
    const double q = cs.q();
    switch (st.kind) {
    case SeedKind::linear:
        make_linear(t, cs, Endpoint::one, st.coefficient, cs.meta1.d);
        return t;
    case SeedKind::power: {
        t.kind = TailKind::power;
        t.coefficient = st.coefficient;
        t.sigma = st.sigma;
        const double K = st.coefficient, sigma = st.sigma;
        const CoefficientSet* pcs = &cs;
        t.z_model = [K, sigma](double x) { return K * std::pow(x, sigma); };
        t.integrand = [pcs, K, sigma, q](double x) {
            return std::pow(pcs->d(1.0 - x) / (K * std::pow(x, sigma)), q);
        };
        if (cs.meta1.d) t.analytic_exponent = q * (cs.meta1.d->exponent - sigma);
        return t;
    }
    case SeedKind::implicit_step:
        if (cs.lambda(sol.c, 1.0) > 1e-8 * (1.0 + std::abs(sol.c))) {
            make_slow_manifold(t, cs, sol.c, Endpoint::one, cs.meta1.rho);
            return t;
        }
        break;
    }
    throw Error(ErrorCode::undecidable_tail, "z'(1-) = 0 with c g(1) - f(1) = 0: no tail model at 1");
}

// ---------------------------------------------------------------- ZField

ZField::ZField(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim)
    : sol_(&sol), cs_(&cs), tail0_(tail_model_at_zero(sol, cs, lim)), tail1_(tail_model_at_one(sol, cs, lim)) {
    double x0 = sol.u_min();
    double m0 = tail0_.z_model(x0);
    scale0_ = m0 > 0.0 ? sol.z_at(x0) / m0 : 1.0;
    double x1 = 1.0 - sol.u_max();
    double m1 = tail1_.z_model(x1);
    scale1_ = m1 > 0.0 ? sol.z_at(sol.u_max()) / m1 : 1.0;
}

double ZField::at_distance(Endpoint e, double dist) const {
    if (e == Endpoint::zero) {
        if (dist < sol_->u_min()) return scale0_ * tail0_.z_model(dist);
        return sol_->z_at(std::min(dist, sol_->u_max()));
    }
    double x1 = 1.0 - sol_->u_max();
    if (dist < x1) return scale1_ * tail1_.z_model(dist);
    return sol_->z_at(std::max(1.0 - dist, sol_->u_min()));
}

double ZField::operator()(double u) const {
    if (u > 0.5) return at_distance(Endpoint::one, 1.0 - u);
    return at_distance(Endpoint::zero, u);
}

// ---------------------------------------------------------------- endpoint times

namespace {

EndpointTime endpoint_time(const ReducedSolution& sol, const CoefficientSet& cs, const TailModel& tail) {
    const Endpoint e = tail.endpoint;
    const double q = cs.q();
    EndpointTime out;
    out.tail_kind = tail.kind;

    const double x_edge = e == Endpoint::zero ? sol.u_min() : 1.0 - sol.u_max();
    auto integrand = [&](double x) {
        double u = point_at(e, x);
        return std::pow(cs.d(u) / sol.z_at(u), q);
    };
    const double edge_value = integrand(x_edge);
    const double model_value = tail.integrand(x_edge);
    if (!(std::isfinite(edge_value) && edge_value > 0.0 && std::isfinite(model_value) && model_value > 0.0))
        throw Error(ErrorCode::undecidable_tail, "integrand is not positive and finite at the deepest sample");
    const double mismatch = std::abs(edge_value / model_value - 1.0);
    if (mismatch > kTailMismatch) {
        std::ostringstream os;
        os << to_string(tail.kind) << " tail model disagrees with the samples by " << mismatch * 100.0
           << "% at distance " << x_edge;
        throw Error(ErrorCode::undecidable_tail, os.str());
    }

    // Tail functions take the distance; the convergence test probes in u.
    auto in_u = [&](double u) { return tail.integrand(distance_to(e, u)); };
    IntegralTest test = integral_test(in_u, e, tail.analytic_exponent);
    out.tail_exponent = test.exponent;
    if (test.verdict == Convergence::undecided) {
        std::ostringstream os;
        os << "tail exponent " << test.exponent << " within margin of -1";
        throw Error(ErrorCode::undecidable_tail, os.str());
    }
    out.bulk = log_quadrature(integrand, x_edge, 0.5);
    std::ostringstream note;
    note << to_string(tail.kind) << " tail, exponent " << test.exponent << (test.analytic ? " (descriptors)" : " (probed)");
    out.note = note.str();
    if (test.verdict == Convergence::divergent) {
        out.finiteness = Finiteness::infinite;
        out.tail = kInf;
        out.value = kInf;
        return out;
    }
    out.finiteness = Finiteness::finite;
    out.tail = power_tail(edge_value, x_edge, test.exponent);
    out.value = out.bulk + out.tail;
    return out;
}

} // namespace

EndpointTime time_to_zero(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim) {
    return endpoint_time(sol, cs, tail_model_at_zero(sol, cs, lim));
}

EndpointTime time_to_zero(const ReducedSolution& sol, const CoefficientSet& cs) {
    return time_to_zero(sol, cs, endpoint_limits(cs));
}

EndpointTime time_to_one(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim) {
    EndpointTime t = endpoint_time(sol, cs, tail_model_at_one(sol, cs, lim));
    t.value = -t.value;
    return t;
}

EndpointTime time_to_one(const ReducedSolution& sol, const CoefficientSet& cs) {
    return time_to_one(sol, cs, endpoint_limits(cs));
}

std::optional<double> numeric_slope(const TailModel& tail, const CoefficientSet& cs) {
    const double q = cs.q();
    const Endpoint e = tail.endpoint;
    auto ratio = [&](double u) { return std::pow(tail.z_model(distance_to(e, u)) / cs.d(u), q); };
    try {
        double v = extrapolate_limit(ratio, e);
        if (std::isnan(v)) return std::nullopt;
        // Below this the ratio is indistinguishable from a vanishing limit.
        if (std::abs(v) < 1e-9) return 0.0;
        return -v;
    } catch (const Error&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------- profile

void WaveProfile::write_csv(std::ostream& os) const {
    os << "t,u,du_dt,flux\n";
    os << std::setprecision(17);
    for (const auto& s : samples) os << s.t << ',' << s.u << ',' << s.du_dt << ',' << s.flux << '\n';
}

WaveProfile WaveProfile::shifted(double t0) const {
    WaveProfile w = *this;
    for (auto& s : w.samples) s.t += t0;
    w.alpha += t0;
    w.beta += t0;
    return w;
}

double WaveProfile::u_at(double t) const {
    if (samples.empty()) throw Error(ErrorCode::invalid_argument, "empty profile");
    if (t <= samples.front().t) return samples.front().u;
    if (t >= samples.back().t) return samples.back().u;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const ProfileSample& s, double v) { return s.t < v; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    double w = (t - a.t) / (b.t - a.t);
    return a.u + w * (b.u - a.u);
}

namespace {

using State = std::array<double, 1>;

struct Branch {
    std::vector<ProfileSample> samples;  // in integration order
    bool arrived = false;
    bool clipped_precision = false;
};

// Integrates the log distance y = log dist to the endpoint e in the time
// variable s >= 0 (s = t forward, s = -t backward):
//   dy/ds = -(z/d)^q / dist.
// Output every dt in s; stops at dist <= dist_stop when arrival is allowed.
Branch run_branch(const ZField& zf, const CoefficientSet& cs, Endpoint e, double dist0, double s_end, double dt,
                  double rtol, bool allow_arrival, double dist_stop, double s_limit) {
    // Near 1 a distance below this is lost when u is stored as a double.
    const double dist_floor = e == Endpoint::one ? 1e-13 : 1e-300;
    namespace ode = boost::numeric::odeint;
    const double q = cs.q();
    auto speed = [&](double dist) {
        double u = point_at(e, dist);
        return std::pow(zf.at_distance(e, dist) / cs.d(u), q);
    };
    auto sys = [&](const State& y, State& dy, double) {
        double dist = std::exp(y[0]);
        dy[0] = -speed(dist) / dist;
    };
    auto make_sample = [&](double s, double dist) {
        ProfileSample p;
        double u = point_at(e, dist);
        double v = speed(dist);
        p.t = e == Endpoint::zero ? s : -s;
        p.u = u;
        p.du_dt = -v;
        p.flux = cs.d(u) * std::pow(v, cs.p - 1.0);
        return p;
    };

    Branch br;
    auto stepper = ode::make_dense_output(1e-14, rtol, ode::runge_kutta_dopri5<State>());
    State y{std::log(dist0)};
    stepper.initialize(y, 0.0, std::min(dt, 1e-3));
    br.samples.push_back(make_sample(0.0, dist0));
    // Besides the uniform time grid, a sample is taken each time log dist
    // drops by level_step, so fast approaches stay resolved for finite
    // differences. Levels are anchored at the stop distance.
    constexpr double level_step = 0.05;
    const double y_stop = std::log(dist_stop);
    double next_level = y_stop + level_step * std::floor((y[0] - y_stop) / level_step);
    if (next_level >= y[0]) next_level -= level_step;
    const double s_cap = s_end + 1e-12 * std::max(1.0, s_end);
    long k = 1;
    std::size_t steps = 0;
    std::vector<double> times;
    while (k * dt <= s_cap) {
        auto [s0, s1] = stepper.do_step(sys);
        if (++steps > 10000000) throw Error(ErrorCode::step_failure, "profile step budget exhausted");
        State ys = stepper.current_state();
        if (!std::isfinite(ys[0])) throw Error(ErrorCode::step_failure, "non-finite profile state");
        const bool crossed = allow_arrival && ys[0] <= y_stop;
        const double s_top = std::min(s1, s_cap);
        times.clear();
        while (k * dt <= s_top) times.push_back(k++ * dt);
        while (ys[0] <= next_level && (!allow_arrival || next_level >= y_stop - 0.5 * level_step)) {
            double lo = s0, hi = s1;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                State ym;
                stepper.calc_state(mid, ym);
                (ym[0] <= next_level ? hi : lo) = mid;
            }
            if (hi <= s_cap) times.push_back(hi);
            next_level -= level_step;
        }
        std::sort(times.begin(), times.end());
        double s_cross = kInf;
        if (crossed) {
            // The last level crossed is y_stop itself.
            double lo = s0, hi = s1;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                State ym;
                stepper.calc_state(mid, ym);
                (ym[0] <= y_stop ? hi : lo) = mid;
            }
            s_cross = hi;
        }
        double last = br.samples.empty() ? -1.0 : std::abs(br.samples.back().t);
        for (double s : times) {
            if (s > s_cross || s <= last) continue;
            State yo;
            stepper.calc_state(s, yo);
            ProfileSample smp = make_sample(s, std::exp(yo[0]));
            // Near 1 nearby distances can round to the same u; keep u strictly monotone.
            if (!br.samples.empty() && smp.u == br.samples.back().u) continue;
            br.samples.push_back(smp);
            last = s;
        }
        if (crossed) {
            if (last < s_cross) br.samples.push_back(make_sample(s_cross, dist_stop));
            br.arrived = true;
            break;
        }
        if (std::exp(ys[0]) < dist_floor) {
            // The state is no longer resolved in u; clip here.
            br.clipped_precision = true;
            break;
        }
        if (allow_arrival && s1 > s_limit) {
            std::ostringstream os;
            os << "integration passed the predicted arrival time " << s_limit << " at distance "
               << std::exp(ys[0]) << " from u = " << (e == Endpoint::zero ? 0 : 1);
            throw Error(ErrorCode::inconsistent_endpoint, os.str());
        }
        if (s1 >= s_end) break;
    }
    return br;
}

} // namespace

WaveProfile reconstruct(const ReducedSolution& sol, const CoefficientSet& cs, const EndpointLimits& lim,
                        const ReconstructOptions& opts) {
    if (!(opts.t_min <= 0.0 && opts.t_max >= 0.0 && opts.t_max > opts.t_min))
        throw Error(ErrorCode::invalid_argument, "t_window must contain the anchor time 0");
    if (!(opts.output_dt > 0.0)) throw Error(ErrorCode::invalid_argument, "output_dt must be positive");
    if (!(opts.anchor_u > sol.u_min() && opts.anchor_u < sol.u_max()))
        throw Error(ErrorCode::invalid_argument, "anchor u must lie inside the sampled range");

    WaveProfile w;
    w.c = sol.c;
    w.anchor_u = opts.anchor_u;
    ZField zf(sol, cs, lim);

    // Endpoint times by quadrature are measured from u = 1/2; moving the
    // anchor shifts both by the time spent between the anchor and 1/2.
    double shift = 0.0;
    if (opts.anchor_u != 0.5) {
        auto g = [&](double u) { return std::pow(cs.d(u) / zf(u), cs.q()); };
        double lo = std::min(opts.anchor_u, 0.5), hi = std::max(opts.anchor_u, 0.5);
        double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 12, 1e-13);
        shift = opts.anchor_u < 0.5 ? I : -I;
    }
    try {
        EndpointTime b = time_to_zero(sol, cs, lim);
        w.beta_finite = b.finiteness;
        w.beta = b.value - shift;
        w.beta_note = b.note;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::undecidable_tail) throw;
        w.beta_undecided = true;
        w.beta_note = e.what();
    }
    try {
        EndpointTime a = time_to_one(sol, cs, lim);
        w.alpha_finite = a.finiteness;
        w.alpha = a.value - shift;
        w.alpha_note = a.note;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::undecidable_tail) throw;
        w.alpha_undecided = true;
        w.alpha_note = e.what();
    }

    const bool beta_finite = w.beta_finite == Finiteness::finite;
    const bool alpha_finite = w.alpha_finite == Finiteness::finite;
    // Slack on the predicted arrival before declaring a stall.
    auto limit = [](double T) { return T * (1.0 + 1e-3) + 1e-3; };

    Branch fwd = run_branch(zf, cs, Endpoint::zero, opts.anchor_u, opts.t_max, opts.output_dt, opts.rtol, beta_finite,
                            sol.u_min(), beta_finite ? limit(w.beta) : kInf);
    Branch bwd = run_branch(zf, cs, Endpoint::one, 1.0 - opts.anchor_u, -opts.t_min, opts.output_dt, opts.rtol,
                            alpha_finite, 1.0 - sol.u_max(), alpha_finite ? limit(-w.alpha) : kInf);
    w.reached_zero = fwd.arrived;
    w.reached_one = bwd.arrived;
    w.clipped_near_one = bwd.clipped_precision;

    w.samples.reserve(fwd.samples.size() + bwd.samples.size());
    for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) w.samples.push_back(*it);
    for (std::size_t i = 1; i < fwd.samples.size(); ++i) w.samples.push_back(fwd.samples[i]);
    return w;
}

// ---------------------------------------------------------------- verification

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ProfileCheck& c) { return c.pass; });
}

const ProfileCheck* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

VerificationReport verify_profile(const WaveProfile& profile, const CoefficientSet& cs, double c,
                                  const VerifyOptions& opts) {
    VerificationReport rep;
    const auto& S = profile.samples;
    const std::size_t n = S.size();
    if (n < 64) throw Error(ErrorCode::invalid_argument, "verify_profile needs at least 64 samples");

    constexpr int grid = 4096;
    for (int i = 1; i < grid; ++i) rep.max_rho = std::max(rep.max_rho, cs.rho(static_cast<double>(i) / grid));

    // Flux recomputed from the state and slope of each sample.
    std::vector<double> psi(n), ts(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = S[i].t;
        psi[i] = cs.d(S[i].u) * std::pow(std::abs(S[i].du_dt), cs.p - 1.0);
    }

    ProfileCheck res{"residual", true, 0.0, opts.residual_tol, ""};
    std::size_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= 2 ? i - 2 : 0;
        lo = std::min(lo, n - 5);
        std::vector<double> xs(ts.begin() + lo, ts.begin() + lo + 5);
        auto wts = fd_weights(ts[i], xs, 1);
        double dpsi = 0.0;
        for (int k = 0; k < 5; ++k) dpsi += wts[k] * psi[lo + k];
        double r = dpsi - cs.lambda(c, S[i].u) * S[i].du_dt - cs.rho(S[i].u);
        double rel = std::abs(r) / rep.max_rho;
        if (!(rel <= res.value)) {
            res.value = std::isnan(rel) ? kInf : rel;
            worst = i;
        }
    }
    res.pass = res.value <= opts.residual_tol;
    {
        std::ostringstream os;
        os << "max |psi' - (c g - f) u' - rho| / max rho at t = " << S[worst].t << " (u = " << S[worst].u << ")";
        res.detail = os.str();
    }
    rep.checks.push_back(res);

    ProfileCheck mono{"monotone", true, 0.0, 0.0, ""};
    std::size_t violations = 0;
    std::optional<double> first;
    for (std::size_t i = 0; i < n; ++i) {
        bool bad = !(S[i].du_dt < 0.0) || (i + 1 < n && !(S[i + 1].u < S[i].u));
        if (bad) {
            ++violations;
            if (!first) first = S[i].t;
        }
    }
    mono.value = static_cast<double>(violations);
    mono.pass = violations == 0;
    mono.detail = first ? "first violation at t = " + std::to_string(*first) : "u strictly decreasing, u' < 0";
    rep.checks.push_back(mono);

    ProfileCheck flux{"flux at extremes", true, 0.0, opts.flux_tol, ""};
    flux.value = std::max(psi.front(), psi.back());
    flux.pass = flux.value <= opts.flux_tol;
    {
        std::ostringstream os;
        os << "flux " << psi.front() << " at t = " << S.front().t << ", " << psi.back() << " at t = " << S.back().t;
        flux.detail = os.str();
    }
    rep.checks.push_back(flux);

    ProfileCheck bnd{"boundary values", true, 0.0, opts.boundary_tol, ""};
    bnd.value = std::max(1.0 - S.front().u, S.back().u);
    bnd.pass = bnd.value <= opts.boundary_tol;
    {
        std::ostringstream os;
        os << "u = " << S.front().u << " at t = " << S.front().t << ", u = " << S.back().u << " at t = " << S.back().t;
        bnd.detail = os.str();
    }
    rep.checks.push_back(bnd);

    ProfileCheck anchor{"anchor", true, 0.0, 1e-12, ""};
    auto at0 = std::find_if(S.begin(), S.end(), [](const ProfileSample& s) { return s.t == 0.0; });
    anchor.value = at0 == S.end() ? kInf : std::abs(at0->u - profile.anchor_u);
    anchor.pass = anchor.value <= anchor.threshold;
    anchor.detail = "u(0) equals the anchor value";
    rep.checks.push_back(anchor);
    return rep;
}

} // namespace twave
