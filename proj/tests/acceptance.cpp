// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "twave/classification.hpp"
#include "twave/error.hpp"
#include "twave/profile.hpp"
#include "twave/wavespeed.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

using namespace twave;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt2(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string describe(const CoefficientSet& cs) {
    return fmt("p=%g", cs.p) + " f=" + cs.f.label + " g=" + cs.g.label + " d=" + cs.d.label + " rho=" + cs.rho.label;
}

CoefficientSet fisher() { return CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)"); }

CoefficientSet degenerate_fisher() {
    auto cs = CoefficientSet::from_expressions(2.0, "0", "1", "u", "u*(1-u)");
    cs.meta0.d = PowerLawMeta{1.0, 1.0, Endpoint::zero};
    cs.meta0.rho = PowerLawMeta{1.0, 1.0, Endpoint::zero};
    cs.meta1.d = PowerLawMeta{1.0, 0.0, Endpoint::one};
    cs.meta1.rho = PowerLawMeta{1.0, 1.0, Endpoint::one};
    return cs;
}

struct PowerPoint {
    double p, delta, r;
};

std::vector<PowerPoint> admissible_grid() {
    std::vector<PowerPoint> out;
    for (double p : {1.5, 2.0, 3.0})
        for (double d : {0.0, 0.5, 1.0, 2.0})
            for (double r : {0.5, 1.0, 1.5})
                if (admissible_at_zero(p, d, r) && admissible_at_one(p, d, r)) out.push_back({p, d, r});
    return out;
}

// Runs fn(i) for i in [0, n) on a small pool; results land in caller slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

bool is_classical_front(const WaveClassification& w) {
    return w.type == WaveType::classical && w.alpha_finite == Finiteness::infinite &&
           w.beta_finite == Finiteness::infinite;
}

Outcome fisher_anchor() {
    Outcome o;
    auto t0 = Clock::now();
    auto cs = fisher();
    EndpointLimits lim = endpoint_limits(cs);
    AnalyticBounds b = analytic_bounds(cs, lim);
    o.require(std::abs(b.lower - 2.0) <= 1e-6 && std::abs(b.upper - 2.0) <= 1e-6,
              fmt2("bounds (%.9g, %.9g)", b.lower, b.upper));
    WaveSpeedEstimate est = cstar(cs, lim);
    o.require(std::abs(est.cstar - 2.0) <= 1e-3, fmt("c* = %.9g", est.cstar));
    CriticalSpeed crit = CriticalSpeed::from(est);
    for (double c : {2.0, 3.0}) {
        WaveClassification w = classify_with_numerics(c, crit, cs, lim);
        o.require(is_classical_front(w), fmt("c = %g not classical with infinite alpha, beta", c));
        o.require(!w.has_conflict(), fmt("c = %g has conflicts", c));
    }
    double dt = seconds_since(t0);
    o.require(dt < 5.0, fmt("runtime %.2f s", dt));
    o.detail = fmt2("c* = %.9f, %.2f s", est.cstar, dt);
    return o;
}

Outcome degenerate_anchor() {
    Outcome o;
    auto t0 = Clock::now();
    auto cs = degenerate_fisher();
    EndpointLimits lim = endpoint_limits(cs);
    WaveSpeedEstimate est = cstar(cs, lim);
    o.require(est.cstar >= 0.70 && est.cstar <= 0.715, fmt("c* = %.9g", est.cstar));
    CriticalSpeed crit = CriticalSpeed::from(est);

    WaveClassification at = classify_with_numerics(est.cstar, crit, cs, lim);
    o.require(at.type == WaveType::sharp_I, std::string("type at c* = ") + to_string(at.type));
    o.require(at.beta_finite == Finiteness::finite, "beta at c* not finite");
    double slope = std::nan("");
    if (at.numeric && at.numeric->slope_0) slope = *at.numeric->slope_0;
    o.require(std::abs(slope + est.cstar) <= 0.02 * est.cstar, fmt("measured terminal slope %.6g", slope));

    WaveClassification above = classify_with_numerics(est.cstar + 0.5, crit, cs, lim);
    o.require(above.type == WaveType::classical, std::string("type above c* = ") + to_string(above.type));
    o.require(above.beta_finite == Finiteness::infinite, "beta above c* not infinite");
    o.require(!at.has_conflict() && !above.has_conflict(), "conflicts");
    double dt = seconds_since(t0);
    o.require(dt < 10.0, fmt("runtime %.2f s", dt));
    o.detail = fmt2("c* = %.9f, terminal slope %.6f", est.cstar, slope) + fmt(", %.2f s", dt);
    return o;
}

Outcome bracket_containment() {
    Outcome o;
    std::vector<CoefficientSet> inst;
    auto grid = admissible_grid();
    const double scales[][2] = {{1.0, 1.0}, {2.0, 1.0}, {1.0, 3.0}, {0.5, 2.0}};
    for (std::size_t i = 0; inst.size() < 20; ++i) {
        const auto& pt = grid[i % grid.size()];
        const auto& k = scales[(i / grid.size() + i) % 4];
        inst.push_back(symmetric_power_instance(pt.p, pt.delta, pt.r, k[0], k[1]));
    }
    std::vector<std::string> errs(inst.size());
    parallel_for(inst.size(), [&](std::size_t i) {
        try {
            EndpointLimits lim = endpoint_limits(inst[i]);
            CStarOptions opts;
            opts.refine = false;
            WaveSpeedEstimate est = cstar(inst[i], lim, opts);
            const auto& b = est.bounds;
            if (!(b.lower <= est.cstar + 1e-3 && est.cstar + 1e-3 <= b.upper + 2e-3))
                errs[i] = describe(inst[i]) + fmt(": c* %.6g outside", est.cstar) +
                          fmt2(" [%.6g, %.6g]", b.lower, b.upper);
        } catch (const std::exception& e) {
            errs[i] = describe(inst[i]) + ": " + e.what();
        }
    });
    for (const auto& e : errs) o.require(e.empty(), e);
    o.detail = std::to_string(inst.size()) + " instances, " + std::to_string(o.failures.size()) + " violations";
    return o;
}

struct GridTally {
    int compared = 0, conflicts = 0, disagreements = 0, open_cases = 0, guessed_open = 0;
    std::vector<std::string> notes;
};

void compare(GridTally& t, const std::string& where, const char* field, Finiteness a, Finiteness b) {
    if (a == Finiteness::unknown || b == Finiteness::unknown) return;
    ++t.compared;
    if (a != b) {
        ++t.disagreements;
        t.notes.push_back(where + " " + field + ": " + to_string(a) + " vs " + to_string(b));
    }
}

Outcome oracle_agreement() {
    Outcome o;
    auto grid = admissible_grid();
    o.require(grid.size() >= 30, "grid has fewer than 30 admissible points");
    std::vector<GridTally> tallies(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto& pt = grid[i];
        GridTally& t = tallies[i];
        std::string where = fmt2("p=%g delta=%g", pt.p, pt.delta) + fmt(" r=%g", pt.r);
        try {
            CoefficientSet cs = symmetric_power_instance(pt.p, pt.delta, pt.r);
            CoefficientSet bb = cs.black_box();
            bb.meta0.chain_asserted = bb.meta1.chain_asserted = true;
            EndpointLimits lim = endpoint_limits(cs);
            WaveSpeedEstimate est = cstar(cs, lim);
            CriticalSpeed crit = CriticalSpeed::from(est);
            for (double c : {est.cstar, est.cstar + 0.5}) {
                std::string at = where + fmt(" c=%.6g", c);
                WaveClassification w = classify_with_numerics(c, crit, cs, lim);
                for (const FinitenessVerdict* v : {&w.alpha_general, &w.beta_general})
                    if (v->open_case && v->value != Finiteness::unknown) {
                        ++t.guessed_open;
                        t.notes.push_back(at + ": open case given a verdict");
                    }
                if (w.has_conflict()) {
                    ++t.conflicts;
                    for (const auto& m : w.conflicts) t.notes.push_back(at + ": " + m);
                }
                auto pb = power_law_beta(c, crit, cs);
                auto pa = power_law_alpha(c, crit, cs);
                Finiteness gb = beta_finiteness(c, crit, bb, lim).value;
                Finiteness ga = alpha_finiteness(c, crit, bb, lim).value;
                Finiteness nb = w.numeric ? w.numeric->beta.finiteness : Finiteness::unknown;
                Finiteness na = w.numeric ? w.numeric->alpha.finiteness : Finiteness::unknown;
                if (pb) {
                    compare(t, at, "beta power-law/general", pb->time.value, gb);
                    compare(t, at, "beta power-law/numeric", pb->time.value, nb);
                }
                if (pa) {
                    compare(t, at, "alpha power-law/general", pa->time.value, ga);
                    compare(t, at, "alpha power-law/numeric", pa->time.value, na);
                }
                compare(t, at, "beta general/numeric", gb, nb);
                compare(t, at, "alpha general/numeric", ga, na);
            }
        } catch (const std::exception& e) {
            ++t.conflicts;
            t.notes.push_back(where + ": " + e.what());
        }
    });

    // Open cases: c* g(0) = f(0), ell0 = 0, 1/rho not integrable at 0. A larger d
    // (2 u^2 with the first rho) lifts c* above f(0)/g(0) and closes the case.
    GridTally open;
    for (const char* d : {"u^2", "u^3", "0.5*u^2"})
        for (const char* rho : {"0.1*u*(1-u)", "0.05*u*(1-u)^2"}) {
            auto cs = CoefficientSet::from_expressions(2.0, "1-u", "1", d, rho);
            cs.meta0.chain_asserted = true;
            EndpointLimits lim = endpoint_limits(cs);
            WaveSpeedEstimate est = cstar(cs, lim);
            CriticalSpeed crit = CriticalSpeed::from(est);
            WaveClassification w = classify_with_numerics(est.cstar, crit, cs, lim);
            ++open.open_cases;
            if (w.beta_finite != Finiteness::unknown || !w.beta_general.open_case) {
                ++open.guessed_open;
                open.notes.push_back(std::string("open case d=") + d + " rho=" + rho + " got " +
                                     to_string(w.beta_finite));
            }
        }
    tallies.push_back(open);

    GridTally total;
    for (const auto& t : tallies) {
        total.compared += t.compared;
        total.conflicts += t.conflicts;
        total.disagreements += t.disagreements;
        total.open_cases += t.open_cases;
        total.guessed_open += t.guessed_open;
        for (const auto& n : t.notes) o.require(false, n);
    }
    o.require(total.compared > 0, "nothing compared");
    o.detail = std::to_string(grid.size()) + " points, " + std::to_string(total.compared) + " comparisons, " +
               std::to_string(total.conflicts + total.disagreements) + " conflicts, " +
               std::to_string(total.open_cases) + " open cases (" + std::to_string(total.guessed_open) + " guessed)";
    return o;
}

// Pushed fronts: eta0 has two distinct positive roots at c*.
std::vector<CoefficientSet> pushed_instances() {
    struct Spec {
        double p;
        const char* rho;
    };
    const Spec specs[] = {
        {2.0, "u*(1-u)*(1+4*u)"},           {2.0, "u*(1-u)*(1+6*u)"},
        {2.0, "u*(1-u)*(1+10*u)"},          {2.0, "u*(1-u)*(1+20*u^2)"},
        {3.0, "sqrt(u)*(1-u)*(1+6*u)"},     {3.0, "sqrt(u)*(1-u)*(1+12*u)"},
        {1.5, "u^2*(1-u)^2*(1+6*u)"},       {1.5, "u^2*(1-u)^2*(1+12*u)"},
        {4.0, "u^(1/3)*(1-u)*(1+10*u)"},    {2.0, "u*(1-u)*(1+8*u)"},
    };
    std::vector<CoefficientSet> out;
    for (const auto& s : specs) out.push_back(CoefficientSet::from_expressions(s.p, "0", "1", "1", s.rho));
    return out;
}

Outcome root_consistency() {
    Outcome o;
    auto inst = pushed_instances();
    std::vector<std::string> errs(inst.size());
    std::vector<double> worst(inst.size(), 0.0);
    parallel_for(inst.size(), [&](std::size_t i) {
        const auto& cs = inst[i];
        try {
            EndpointLimits lim = endpoint_limits(cs);
            WaveSpeedEstimate est = cstar(cs, lim);
            if (!est.slope_0 || !est.roots.exist) {
                errs[i] = describe(cs) + ": no slope or roots at c*";
                return;
            }
            double rel_at = std::abs(est.slope_0->value / est.roots.plus - 1.0);
            ReducedSolution above = solve_from_one(est.cstar + 0.5, cs, lim);
            Eta0Roots r = eta0_roots(est.cstar + 0.5, lim, cs);
            double rel_above = above.z_slope_0 && r.exist ? std::abs(above.z_slope_0->value / r.minus - 1.0) : kInf;
            worst[i] = std::max(rel_at, rel_above);
            if (!(rel_at <= 1e-3 && rel_above <= 1e-3))
                errs[i] = describe(cs) + fmt2(": relative errors %.3g at c*, %.3g above", rel_at, rel_above);
        } catch (const std::exception& e) {
            errs[i] = describe(cs) + ": " + e.what();
        }
    });
    for (const auto& e : errs) o.require(e.empty(), e);
    o.detail = std::to_string(inst.size()) + " instances, worst relative error " +
               fmt("%.2e", *std::max_element(worst.begin(), worst.end()));
    return o;
}

Outcome profile_residual() {
    Outcome o;
    struct Case {
        std::string name;
        CoefficientSet cs;
        double offset;  // c - c*, 0 for the critical shot
        double t_min, t_max;
    };
    std::vector<Case> cases = {
        {"Fisher c*", fisher(), 0.0, -40.0, 40.0},
        {"Fisher c*+1", fisher(), 1.0, -40.0, 40.0},
        {"degenerate Fisher c*", degenerate_fisher(), 0.0, -40.0, 40.0},
        {"degenerate Fisher c*+0.5", degenerate_fisher(), 0.5, -40.0, 40.0},
        {"p=3 delta=1 r=1 c*", symmetric_power_instance(3.0, 1.0, 1.0), 0.0, -40.0, 40.0},
        {"p=2 delta=0.5 r=1.5 c*", symmetric_power_instance(2.0, 0.5, 1.5), 0.0, -40.0, 40.0},
        {"pushed a=6 c*+0.5", CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)*(1+6*u)"), 0.5, -20.0,
         20.0},
    };
    double worst_res = 0.0, worst_flux = 0.0;
    for (const auto& k : cases) {
        try {
            EndpointLimits lim = endpoint_limits(k.cs);
            WaveSpeedEstimate est = cstar(k.cs, lim);
            double c = k.offset == 0.0 ? est.bracket_hi : est.cstar + k.offset;
            ReducedSolution sol = solve_from_one(c, k.cs, lim);
            ReconstructOptions ro;
            ro.t_min = k.t_min;
            ro.t_max = k.t_max;
            WaveProfile w = reconstruct(sol, k.cs, lim, ro);
            VerificationReport r = verify_profile(w, k.cs, c);
            const ProfileCheck* res = r.find("residual");
            const ProfileCheck* mono = r.find("monotone");
            const ProfileCheck* flux = r.find("flux at extremes");
            worst_res = std::max(worst_res, res->value);
            worst_flux = std::max(worst_flux, flux->value);
            o.require(res->value <= 1e-6, k.name + fmt(": residual %.3g", res->value));
            o.require(flux->value <= 1e-4, k.name + fmt(": flux %.3g", flux->value));
            o.require(mono->pass, k.name + ": " + mono->detail);
        } catch (const std::exception& e) {
            o.require(false, k.name + ": " + e.what());
        }
    }
    o.detail = std::to_string(cases.size()) + " profiles, max residual " + fmt("%.2e", worst_res) +
               ", max end flux " + fmt("%.2e", worst_flux);
    return o;
}

Outcome sign_test_consistency() {
    Outcome o;
    struct Pair {
        std::string name;
        CoefficientSet cs;
        double k;
    };
    std::vector<Pair> pairs = {
        {"Fisher", fisher(), 1.0},
        {"Fisher", fisher(), 2.0},
        {"Fisher", fisher(), 2.5},
        {"degenerate Fisher", degenerate_fisher(), 0.3},
        {"degenerate Fisher", degenerate_fisher(), 1.0},
        {"f = g", CoefficientSet::from_expressions(2.0, "1", "1", "1", "u*(1-u)"), 1.0},
        {"pushed a=6", CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)*(1+6*u)"), 2.0},
        {"pushed a=6", CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)*(1+6*u)"), 4.0},
        {"p=3 delta=0 r=1", symmetric_power_instance(3.0, 0.0, 1.0), 0.5},
        {"p=3 delta=0 r=1", symmetric_power_instance(3.0, 0.0, 1.0), 3.0},
    };
    int greater = 0, less_eq = 0, inconclusive = 0;
    for (const auto& q : pairs) {
        try {
            WaveSpeedEstimate est = cstar(q.cs, endpoint_limits(q.cs));
            StimaResult s = stima_test(q.cs, q.k);
            std::string tag = q.name + fmt(" k=%g", q.k);
            if (s.verdict == StimaVerdict::proves_greater) {
                ++greater;
                o.require(est.cstar > q.k, tag + fmt(": ProvesGreater but c* = %.6g", est.cstar));
            } else if (s.verdict == StimaVerdict::proves_less_eq) {
                ++less_eq;
                o.require(est.cstar <= q.k + 1e-3, tag + fmt(": ProvesLessEq but c* = %.6g", est.cstar));
            } else {
                ++inconclusive;
            }
        } catch (const std::exception& e) {
            o.require(false, q.name + ": " + e.what());
        }
    }
    o.require(greater > 0 && less_eq > 0, "no decisive verdict of one kind");
    o.detail = std::to_string(pairs.size()) + " pairs: " + std::to_string(greater) + " ProvesGreater, " +
               std::to_string(less_eq) + " ProvesLessEq, " + std::to_string(inconclusive) + " Inconclusive";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"Fisher anchor", fisher_anchor},
        {"degenerate Fisher anchor", degenerate_anchor},
        {"bracket containment", bracket_containment},
        {"oracle agreement", oracle_agreement},
        {"eta root consistency", root_consistency},
        {"profile residual", profile_residual},
        {"sign test consistency", sign_test_consistency},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, e.what());
        }
        failed += !o.pass;
        std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                    seconds_since(t0));
        for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
