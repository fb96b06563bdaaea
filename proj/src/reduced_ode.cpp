#include "twave/reduced_ode.hpp"

#include "twave/error.hpp"

#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <memory>
#include <mutex>

namespace twave {

namespace {

double conj(double p) { return p / (p - 1.0); }

template <class Fn>
double toms748_root(Fn fn, double a, double b) {
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(fn, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

} // namespace

double eta0(double t, double lambda0, double h0, double p) {
    double q = 1.0 / (p - 1.0);
    return std::pow(t, conj(p)) - lambda0 * std::pow(t, q) + h0;
}

double eta1(double t, double lambda1, double h1, double p) {
    double q = 1.0 / (p - 1.0);
    return std::pow(t, conj(p)) + lambda1 * std::pow(t, q) - h1;
}

Eta0Roots eta0_roots(double lambda0, double h0, double p) {
    if (std::isinf(h0)) throw Error(ErrorCode::infinite_h0, "h0 = +inf: no traveling wave exists for any speed");
    Eta0Roots r;
    if (h0 == 0.0) {
        r.exist = true;
        r.minus = 0.0;
        r.plus = std::max(lambda0, 0.0);
        return r;
    }
    if (lambda0 <= 0.0) return r;
    const double tm = lambda0 / p;
    const double depth = (p - 1.0) * std::pow(tm, conj(p));
    const double minval = h0 - depth;
    if (minval > 1e-14 * depth) return r;
    r.exist = true;
    if (minval >= -1e-14 * depth) {
        r.minus = r.plus = tm;
        return r;
    }
    auto fn = [&](double t) { return eta0(t, lambda0, h0, p); };
    r.minus = toms748_root(fn, 0.0, tm);
    r.plus = toms748_root(fn, tm, lambda0);
    return r;
}

Eta0Roots eta0_roots(double c, const EndpointLimits& lim, const CoefficientSet& cs) {
    if (!lim.h0.known()) throw Error(ErrorCode::oscillating_limit, "h0 unknown");
    return eta0_roots(cs.lambda(c, 0.0), lim.h0.value, cs.p);
}

SlopeAtOne eta1_root(double lambda1, double h1, double p) {
    SlopeAtOne s;
    if (std::isinf(h1)) {
        s.differentiable = false;
        s.magnitude = kInf;
        return s;
    }
    if (h1 == 0.0) {
        s.magnitude = std::abs(std::min(0.0, lambda1));
        return s;
    }
    auto fn = [&](double t) { return eta1(t, lambda1, h1, p); };
    double hi = 1.0;
    while (fn(hi) < 0.0) hi *= 2.0;
    s.magnitude = toms748_root(fn, 0.0, hi);
    return s;
}

SlopeAtOne eta1_root(double c, const EndpointLimits& lim, const CoefficientSet& cs) {
    if (!lim.h1.known()) throw Error(ErrorCode::oscillating_limit, "h1 unknown; supply power-law descriptors at 1");
    return eta1_root(cs.lambda(c, 1.0), lim.h1.value, cs.p);
}

const char* to_string(SeedKind k) {
    switch (k) {
    case SeedKind::linear: return "linear";
    case SeedKind::implicit_step: return "implicit-step";
    case SeedKind::power: return "power";
    }
    return "linear";
}

const char* to_string(Termination t) {
    switch (t) {
    case Termination::reached_floor: return "reached-floor";
    case Termination::touchdown: return "touchdown";
    case Termination::bound_exceeded: return "bound-exceeded";
    case Termination::reached_one: return "reached-one";
    }
    return "reached-floor";
}

StartPoint startup_at_one(double c, const CoefficientSet& cs, const EndpointLimits& lim, double eps) {
    if (!(eps > 0.0) || eps > 1e-3) throw Error(ErrorCode::invalid_argument, "startup eps must lie in (0, 1e-3]");
    StartPoint s;
    s.eps = eps;
    s.u = 1.0 - eps;
    const double p = cs.p, q = cs.q();

    if (!lim.h1.known() || std::isinf(lim.h1.value)) {
        if (!cs.meta1.complete())
            throw Error(ErrorCode::no_asymptotics,
                        "h1 is infinite or unknown and no power-law descriptors are available at u = 1");
        const auto& dm = *cs.meta1.d;
        const auto& rm = *cs.meta1.rho;
        double lam = rm.exponent + dm.exponent * q;
        double cbar = rm.constant * std::pow(dm.constant, q);
        if (compare_exponents(lam, q) < 0) {
            double sigma = (lam + 1.0) * (p - 1.0) / p;
            double K = std::pow(cbar / sigma, (p - 1.0) / p);
            s.kind = SeedKind::power;
            s.sigma = sigma;
            s.coefficient = K;
            s.z = K * std::pow(eps, sigma);
            return s;
        }
        // Descriptors say h1 is finite after all; fall through with the analytic ell1.
        EndpointLimits fixed = lim;
        fixed.h1 = endpoint_limits(cs).h1;
        return startup_at_one(c, cs, fixed, eps);
    }

    SlopeAtOne r1 = eta1_root(c, lim, cs);
    if (r1.magnitude > 0.0) {
        s.kind = SeedKind::linear;
        s.coefficient = r1.magnitude;
        s.z = r1.magnitude * eps;
        return s;
    }

    // Zero slope at 1: one backward Euler step z = eps (h z^-q - lambda).
    const double u = s.u;
    const double h = cs.h(u);
    const double lam = cs.lambda(c, u);
    if (!(h > 0.0)) throw Error(ErrorCode::no_asymptotics, "zero-slope seed needs h > 0 at 1 - eps");
    auto G = [&](double lz) {
        double z = std::exp(lz);
        return z - eps * (h * std::pow(z, -q) - lam);
    };
    // G is increasing in log z; walk outward by decades to bracket the root.
    double lo = 0.0, hi = 0.0;
    if (G(0.0) > 0.0) {
        lo = -std::log(10.0);
        while (G(lo) > 0.0) {
            lo -= std::log(10.0);
            if (lo < -700.0) throw Error(ErrorCode::no_asymptotics, "implicit seed root not bracketed");
        }
        hi = lo + std::log(10.0);
    } else {
        hi = std::log(10.0);
        while (G(hi) < 0.0) hi += std::log(10.0);
        lo = hi - std::log(10.0);
    }
    s.kind = SeedKind::implicit_step;
    s.z = std::exp(toms748_root(G, lo, hi));
    s.coefficient = s.z / eps;
    return s;
}

double linear_bound(double c, const CoefficientSet& cs) {
    constexpr int n = 4096;
    double m = std::max(std::abs(cs.lambda(c, 0.0)), std::abs(cs.lambda(c, 1.0)));
    for (int i = 1; i < n; ++i) {
        double u = static_cast<double>(i) / n;
        m = std::max(m, std::abs(cs.lambda(c, u)));
    }
    return m;
}

// ---------------------------------------------------------------- integrator

namespace {

enum class DriveEnd { reached, stopped };
enum class StepAction { proceed, stop, restart };

inline StepAction as_action(bool keep_going) { return keep_going ? StepAction::proceed : StepAction::stop; }
inline StepAction as_action(StepAction a) { return a; }

struct GslDeleter {
    void operator()(gsl_odeiv2_step* s) const { gsl_odeiv2_step_free(s); }
    void operator()(gsl_odeiv2_control* c) const { gsl_odeiv2_control_free(c); }
    void operator()(gsl_odeiv2_evolve* e) const { gsl_odeiv2_evolve_free(e); }
};

template <class F, class Jac>
struct DriveContext {
    F& rhs;
    Jac& jac;
    std::exception_ptr error;
};

template <class Ctx>
int gsl_rhs(double t, const double y[], double f[], void* params) {
    auto* ctx = static_cast<Ctx*>(params);
    try {
        f[0] = ctx->rhs(t, y[0]);
    } catch (...) {
        ctx->error = std::current_exception();
        return GSL_EBADFUNC;
    }
    return std::isfinite(f[0]) ? GSL_SUCCESS : GSL_EBADFUNC;
}

template <class Ctx>
int gsl_jac(double t, const double y[], double* dfdy, double dfdt[], void* params) {
    auto* ctx = static_cast<Ctx*>(params);
    try {
        dfdy[0] = ctx->jac(t, y[0]);
        double dt = 1e-6 * std::max(std::abs(t), 1e-3);
        dfdt[0] = (ctx->rhs(t + dt, y[0]) - ctx->rhs(t - dt, y[0])) / (2.0 * dt);
    } catch (...) {
        ctx->error = std::current_exception();
        return GSL_EBADFUNC;
    }
    return GSL_SUCCESS;
}

// Scalar stiff integration of x' = F(t, x) on [t0, t1] with the implicit
// Bulirsch-Stoer stepper. obs(t, x) runs after each accepted step and
// returns false to stop. max_dt(t) bounds the step taken from t.
template <class F, class Jac, class MaxDt, class Obs>
DriveEnd drive(F rhs, Jac jac, double t0, double t1, double x0, double dt0, MaxDt max_dt, double atol,
               double rtol, std::size_t max_steps, Obs obs) {
    static std::once_flag quiet;
    std::call_once(quiet, [] { gsl_set_error_handler_off(); });

    using Ctx = DriveContext<F, Jac>;
    Ctx ctx{rhs, jac, nullptr};
    gsl_odeiv2_system sys{&gsl_rhs<Ctx>, &gsl_jac<Ctx>, 1, &ctx};
    std::unique_ptr<gsl_odeiv2_step, GslDeleter> step(gsl_odeiv2_step_alloc(gsl_odeiv2_step_bsimp, 1));
    std::unique_ptr<gsl_odeiv2_control, GslDeleter> ctrl(gsl_odeiv2_control_y_new(atol, rtol));
    std::unique_ptr<gsl_odeiv2_evolve, GslDeleter> evo(gsl_odeiv2_evolve_alloc(1));

    double x[1] = {x0};
    double t = t0;
    double h = std::min(dt0, max_dt(t0));
    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > max_steps) throw Error(ErrorCode::step_failure, "step budget exhausted");
        h = std::min(h, max_dt(t));
        int status = gsl_odeiv2_evolve_apply(evo.get(), ctrl.get(), step.get(), &sys, &t, t1, &h, x);
        if (ctx.error) std::rethrow_exception(ctx.error);
        if (status != GSL_SUCCESS)
            throw Error(ErrorCode::step_failure, std::string("integrator failure: ") + gsl_strerror(status) +
                                                     " at t = " + std::to_string(t));
        if (!std::isfinite(x[0])) throw Error(ErrorCode::step_failure, "non-finite state");
        if (!(h > 1e-15 * std::max(1.0, std::abs(t))))
            throw Error(ErrorCode::step_failure, "step size underflow at t = " + std::to_string(t));
        StepAction act = as_action(obs(t, x[0]));
        if (act == StepAction::stop) return DriveEnd::stopped;
        if (act == StepAction::restart) {
            gsl_odeiv2_evolve_reset(evo.get());
            gsl_odeiv2_step_reset(step.get());
            h = std::min(dt0, max_dt(t));
        }
    }
    return DriveEnd::reached;
}

} // namespace

ReducedSolution integrate_reduced(double c, const CoefficientSet& cs, const StartPoint& start, Direction dir,
                                  const IntegrationOptions& opts) {
    if (!(start.z > 0.0)) throw Error(ErrorCode::invalid_argument, "start z must be positive");
    if (!(start.u > 0.0 && start.u < 1.0)) throw Error(ErrorCode::invalid_argument, "start u must lie in (0,1)");

    ReducedSolution sol;
    sol.c = c;
    sol.M = linear_bound(c, cs);
    sol.u_floor = opts.u_floor;
    sol.direction = dir;
    sol.start = start;

    const double p = cs.p, q = cs.q(), pc = cs.p_conj();
    const double M = sol.M;
    const double bound = M * (1.0 + opts.bound_slack);
    const double z_floor = opts.z_floor * std::max(1.0, M);

    auto dz_of = [&](double u, double z) { return cs.lambda(c, u) - cs.h(u) * std::pow(z, -q); };
    auto push = [&](double u, double z) {
        sol.samples.push_back({u, z, dz_of(u, z), std::abs(cs.lambda(c, u)) + cs.h(u) * std::pow(z, -q)});
    };
    push(start.u, start.z);

    // w = z^(p') removes the z^-q singularity: dw/du = p'(lambda w^(1/p) - h).
    auto wz = [&](double w) { return std::pow(std::max(w, 0.0), 1.0 / pc); };

    if (dir == Direction::toward_one) {
        const double u_end = 1.0 - opts.u_floor;
        double w0 = std::pow(start.z, pc);
        double prev_u = start.u, prev_w = w0;
        auto rhs = [&](double u, double w) { return pc * (cs.lambda(c, u) * std::pow(std::max(w, 0.0), 1.0 / p) - cs.h(u)); };
        auto jac = [&](double u, double w) {
            return cs.lambda(c, u) / (p - 1.0) * std::pow(std::max(w, 1e-300), 1.0 / p - 1.0);
        };
        bool stopped = false;
        auto obs = [&](double u, double w) {
            if (w <= 0.0 || wz(w) <= z_floor) {
                double ut = prev_u + (u - prev_u) * prev_w / (prev_w - w);
                sol.touchdown = ut;
                sol.samples.push_back({ut, 0.0, -kInf, kInf});
                sol.termination = Termination::touchdown;
                stopped = true;
                return false;
            }
            double z = wz(w);
            if (z > bound * u) {
                push(u, z);
                sol.termination = Termination::bound_exceeded;
                stopped = true;
                return false;
            }
            push(u, z);
            prev_u = u;
            prev_w = w;
            return true;
        };
        double span = u_end - start.u;
        // Steps stay a bounded fraction of 1 - u so the samples resolve log(1-u).
        auto max_dt = [&](double u) { return std::min(opts.max_step_tau, 0.05 * (1.0 - u)); };
        drive(rhs, jac, start.u, u_end, w0, span * 1e-3, max_dt, 1e-6 * opts.rtol * w0, opts.rtol,
              opts.max_steps, obs);
        if (!stopped) sol.termination = Termination::reached_one;
        return sol;
    }

    // Toward 0, phase 1: tau = 1 - u up to 1/2, state w.
    bool stopped = false;
    double u_half_z = start.z;
    double tau0 = 1.0 - start.u;
    if (tau0 < 0.5) {
        double w0 = std::pow(start.z, pc);
        auto rhs = [&](double tau, double w) {
            double u = 1.0 - tau;
            return pc * (cs.h(u) - cs.lambda(c, u) * std::pow(std::max(w, 0.0), 1.0 / p));
        };
        auto jac = [&](double tau, double w) {
            double u = 1.0 - tau;
            return -cs.lambda(c, u) / (p - 1.0) * std::pow(std::max(w, 1e-300), 1.0 / p - 1.0);
        };
        auto obs = [&](double tau, double w) {
            double u = 1.0 - tau;
            double z = wz(w);
            // Above u = 1/2 a small z is legitimate near a degenerate end at 1;
            // only an exact zero counts as touchdown.
            if (!(w > 0.0)) {
                sol.touchdown = u;
                sol.samples.push_back({u, 0.0, -kInf, kInf});
                sol.termination = Termination::touchdown;
                stopped = true;
                return false;
            }
            push(u, z);
            if (z > bound * u) {
                sol.termination = Termination::bound_exceeded;
                stopped = true;
                return false;
            }
            u_half_z = z;
            return true;
        };
        auto max_dt = [&](double tau) { return std::min(opts.max_step_tau, 0.05 * tau); };
        drive(rhs, jac, tau0, 0.5, w0, tau0 * 0.1, max_dt, 1e-6 * opts.rtol * w0, opts.rtol,
              opts.max_steps, obs);
        if (stopped) return sol;
    }

    // Phase 2: sigma = -log u, state b = log(z/u):
    //   db/dsigma = 1 + H e^(-(q+1) b) - lambda e^(-b),  H = rho (d/u)^q.
    // The log keeps relative accuracy on the slow manifold where z/u -> 0.
    double u_start2 = std::min(0.5, start.u);
    double s0 = -std::log(u_start2);
    double s1 = -std::log(opts.u_floor);
    double b0 = std::log((tau0 < 0.5 ? u_half_z : start.z) / u_start2);
    constexpr double cap = 1e200;
    auto expterm = [&](double coef, double expo) {
        if (coef == 0.0) return 0.0;
        double v = coef * std::exp(expo);
        if (!std::isfinite(v)) return coef > 0.0 ? cap : -cap;
        return std::clamp(v, -cap, cap);
    };
    auto rhs = [&](double s, double b) {
        double u = std::exp(-s);
        return 1.0 + expterm(cs.h_over_u(u), -(q + 1.0) * b) - expterm(cs.lambda(c, u), -b);
    };
    auto jac = [&](double s, double b) {
        double u = std::exp(-s);
        return -(q + 1.0) * expterm(cs.h_over_u(u), -(q + 1.0) * b) + expterm(cs.lambda(c, u), -b);
    };
    // Just above c* the trajectory may leave the larger root and fall onto the
    // slow manifold in a jump that is nearly instantaneous in sigma. Once the
    // fall rate passes this threshold the state is moved to the smaller root
    // of a^(p') - lambda a^q + H at the current u.
    constexpr double fall_rate = 1e3;
    auto slow_root = [&](double s, double b) {
        double u = std::exp(-s);
        double H = std::max(cs.h_over_u(u), 1e-300);
        double lam = cs.lambda(c, u);
        auto eta = [&](double lb) {
            // eta_u(a) / a^q in log form keeps the bracket finite.
            return std::exp(lb) + H * std::exp(-q * lb) - lam;
        };
        double lo = b - 1.0;
        while (eta(lo) < 0.0 && lo > -1400.0) lo -= 8.0;
        return toms748_root(eta, lo, b);
    };
    const double log_bound = std::log(bound);
    auto obs = [&](double s, double& b) {
        double u = std::exp(-s);
        double z = std::exp(b) * u;
        if (!(z > 1e-290)) {
            push(u, z);
            sol.termination = Termination::reached_floor;
            stopped = true;
            return StepAction::stop;
        }
        if (rhs(s, b) < -fall_rate) {
            b = slow_root(s, b);
            push(u, std::exp(b) * u);
            return StepAction::restart;
        }
        push(u, z);
        if (b > log_bound) {
            sol.termination = Termination::bound_exceeded;
            stopped = true;
            return StepAction::stop;
        }
        return StepAction::proceed;
    };
    if (s1 > s0)
        drive(rhs, jac, s0, s1, b0, 1e-3, [&](double) { return opts.max_step_sigma; }, 1e-12, opts.rtol, opts.max_steps, obs);
    if (!stopped) sol.termination = Termination::reached_floor;
    return sol;
}

std::optional<BoundarySlope> measure_slope_at_zero(const ReducedSolution& sol, double scale) {
    if (sol.termination != Termination::reached_floor) return std::nullopt;
    // z/u on the geometric grid u = 2^-j inside the sampled range.
    std::vector<double> a, us;
    for (int j = 2;; ++j) {
        double u = std::ldexp(1.0, -j);
        if (u < sol.u_min()) break;
        a.push_back(sol.z_at(u) / u);
        us.push_back(u);
    }
    if (a.size() < 5) {
        if (a.empty()) return std::nullopt;
        return BoundarySlope{a.back(), false, us.back()};
    }
    // Aitken extrapolants remove the leading power correction in u; pick the
    // window where consecutive extrapolants agree best.
    auto aitken = [](double x, double y, double z) {
        double den = x - 2.0 * y + z;
        if (std::abs(den) <= 1e-13 * (std::abs(x) + std::abs(y) + std::abs(z))) return z;
        return z - (z - y) * (z - y) / den;
    };
    std::vector<double> A;
    for (std::size_t j = 0; j + 2 < a.size(); ++j) A.push_back(aitken(a[j], a[j + 1], a[j + 2]));
    std::size_t best = 1;
    double best_gap = kInf;
    for (std::size_t j = 1; j < A.size(); ++j) {
        double gap = std::abs(A[j] - A[j - 1]);
        if (gap <= best_gap) {
            best_gap = gap;
            best = j;
        }
    }
    BoundarySlope out;
    out.value = std::max(A[best], 0.0);
    out.u = us[best + 2];
    out.converged = best_gap <= 1e-4 * std::max(scale, out.value);
    return out;
}

ReducedSolution solve_from_one(double c, const CoefficientSet& cs, const EndpointLimits& lim,
                               const IntegrationOptions& opts, double eps) {
    StartPoint st = startup_at_one(c, cs, lim, eps);
    ReducedSolution sol = integrate_reduced(c, cs, st, Direction::toward_zero, opts);
    sol.z_slope_1 = lim.h1.known() ? eta1_root(c, lim, cs) : SlopeAtOne{false, kInf};
    if (st.kind == SeedKind::power) sol.z_slope_1 = SlopeAtOne{false, kInf};
    double scale = std::max(std::abs(cs.lambda(c, 0.0)), 1e-12);
    sol.z_slope_0 = measure_slope_at_zero(sol, scale);
    return sol;
}

double ReducedSolution::u_min() const {
    return direction == Direction::toward_zero ? samples.back().u : samples.front().u;
}

double ReducedSolution::u_max() const {
    return direction == Direction::toward_zero ? samples.front().u : samples.back().u;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
    // Fornberg's recursion for weights of all orders up to m; returns order m.
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

struct ReducedSolution::Interp {
    // Samples in increasing x = log(u/(1-u)), with y = log z and dy/dx.
    std::vector<double> x, y, dy, z;
};

const ReducedSolution::Interp& ReducedSolution::interp() const {
    std::call_once(*interp_once_, [this] {
        auto I = std::make_shared<Interp>();
        const std::size_t n = samples.size();
        I->x.resize(n);
        I->y.resize(n);
        I->z.resize(n);
        I->dy.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            // Integration order may be decreasing in u; store increasing.
            const auto& s = samples[direction == Direction::toward_zero ? n - 1 - i : i];
            I->x[i] = std::log(s.u) - std::log1p(-s.u);
            I->z[i] = s.z;
            I->y[i] = s.z > 0.0 ? std::log(s.z) : -kInf;
        }
        const std::size_t m = std::min<std::size_t>(5, n);
        std::vector<double> xs(m);
        for (std::size_t i = 0; i < n && m >= 2; ++i) {
            const auto& s = samples[direction == Direction::toward_zero ? n - 1 - i : i];
            if (s.z > 0.0 && std::isfinite(s.dz) && std::abs(s.dz) > 1e-4 * s.dz_scale) {
                I->dy[i] = s.dz * s.u * (1.0 - s.u) / s.z;
                continue;
            }
            std::size_t lo = i >= m / 2 ? i - m / 2 : 0;
            lo = std::min(lo, n - m);
            bool ok = true;
            for (std::size_t k = 0; k < m; ++k) {
                xs[k] = I->x[lo + k];
                ok = ok && std::isfinite(I->y[lo + k]);
            }
            if (!ok) continue;
            auto w = fd_weights(I->x[i], xs, 1);
            double d = 0.0;
            for (std::size_t k = 0; k < m; ++k) d += w[k] * I->y[lo + k];
            I->dy[i] = d;
        }
        interp_ = std::move(I);
    });
    return *interp_;
}

double ReducedSolution::z_at(double u) const {
    const std::size_t n = samples.size();
    if (n == 1) return samples[0].z;
    const Interp& I = interp();
    if (u <= 0.0) return I.z.front();
    if (u >= 1.0) return I.z.back();
    const double x = std::log(u) - std::log1p(-u);
    if (x <= I.x.front()) return I.z.front();
    if (x >= I.x.back()) return I.z.back();
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(I.x.begin(), I.x.end(), x) - I.x.begin());
    std::size_t lo = hi - 1;
    if (x == I.x[lo]) return I.z[lo];
    double hlen = I.x[hi] - I.x[lo];
    double s = (x - I.x[lo]) / hlen;
    if (!(std::isfinite(I.y[lo]) && std::isfinite(I.y[hi]))) return I.z[lo] + s * (I.z[hi] - I.z[lo]);
    double s2 = s * s, s3 = s2 * s;
    double y = (2 * s3 - 3 * s2 + 1) * I.y[lo] + (s3 - 2 * s2 + s) * hlen * I.dy[lo] + (-2 * s3 + 3 * s2) * I.y[hi] +
               (s3 - s2) * hlen * I.dy[hi];
    return std::exp(y);
}

void ReducedSolution::write_csv(std::ostream& os) const {
    os << "u,z,dz\n" << std::setprecision(17);
    for (const auto& s : samples) os << s.u << ',' << s.z << ',' << s.dz << '\n';
}

ComparisonResult check_comparison(const ScalarFn& candidate, const ReducedSolution& sol, const CoefficientSet& cs,
                                  double u_a, double u_b, ComparisonKind kind) {
    ComparisonResult r;
    const double q = cs.q();
    const double c = sol.c;
    const double sign = kind == ComparisonKind::lower ? 1.0 : -1.0;
    // Differential inequality on a uniform probe grid of the window.
    bool ineq = true;
    constexpr int n = 400;
    for (int i = 0; i <= n; ++i) {
        double u = u_a + (u_b - u_a) * i / n;
        double hstep = 1e-6 * std::max(1e-3, std::min(u - u_a, u_b - u) + 1e-3);
        double y = candidate(u);
        double dy = (candidate(std::min(u + hstep, 1.0)) - candidate(std::max(u - hstep, 0.0))) /
                    (std::min(u + hstep, 1.0) - std::max(u - hstep, 0.0));
        double rhs = cs.lambda(c, u) - cs.h(u) * std::pow(y, -q);
        double tol = 1e-7 * (1.0 + std::abs(rhs));
        if (sign * (dy - rhs) > tol) ineq = false;
    }
    double zb = sol.z_at(u_b);
    bool anchored = sign * (candidate(u_b) - zb) >= -1e-9 * (1.0 + std::abs(zb));
    r.premise = ineq && anchored;
    r.conclusion = true;
    r.worst_gap = kInf;
    for (const auto& s : sol.samples) {
        if (s.u < u_a || s.u > u_b || !(s.z > 0.0)) continue;
        double gap = sign * (candidate(s.u) - s.z);
        r.worst_gap = std::min(r.worst_gap, gap);
        if (gap < -1e-8 * (1.0 + s.z)) r.conclusion = false;
    }
    return r;
}

} // namespace twave
