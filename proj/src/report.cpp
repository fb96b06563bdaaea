#include "twave/report.hpp"

#include <cmath>

namespace twave {

Json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json("unknown"); }

} // namespace

Json to_json(const Limit& l) { return {{"value", number(l.value)}, {"confidence", to_string(l.confidence)}}; }

Json to_json(const EndpointLimits& lim) {
    return {{"ell0", to_json(lim.ell0)},     {"ell1", to_json(lim.ell1)},     {"h0", to_json(lim.h0)},
            {"h1", to_json(lim.h1)},         {"d_at_0", to_json(lim.d_at_0)}, {"d_at_1", to_json(lim.d_at_1)},
            {"ddot_0", to_json(lim.ddot_0)}, {"ddot_1", to_json(lim.ddot_1)}};
}

Json to_json(const ValidationReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json j{{"name", c.name}, {"pass", c.pass}};
        if (c.first_violation) j["first_violation"] = *c.first_violation;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(j);
    }
    return {{"grid_size", rep.grid_size}, {"all_pass", rep.all_pass()}, {"checks", checks}};
}

Json to_json(const AnalyticBounds& b) {
    return {{"lower", number(b.lower)}, {"upper", number(b.upper)}, {"G0", number(b.G0)},
            {"F0", number(b.F0)},       {"L0", number(b.L0)},       {"ell0", number(b.ell0)}};
}

Json to_json(const WaveSpeedEstimate& est) {
    Json j{{"lower_analytic", number(est.bounds.lower)},
           {"upper_analytic", number(est.bounds.upper)},
           {"cstar", number(est.cstar)},
           {"half_width", number(est.half_width)},
           {"tol", number(est.tol)},
           {"bracket", {number(est.bracket_lo), number(est.bracket_hi)}},
           {"iterations", est.iterations},
           {"shots", est.shots},
           {"expansions", est.expansions},
           {"at_lower_bound", est.at_lower_bound},
           {"bounds", to_json(est.bounds)}};
    if (est.slope_0) {
        j["slope_z_0"] = {{"value", number(est.slope_0->value)},
                          {"converged", est.slope_0->converged},
                          {"measured_at_u", number(est.slope_0->u)}};
    } else {
        j["slope_z_0"] = nullptr;
    }
    j["eta0_roots"] = est.roots.exist ? Json{{"minus", number(est.roots.minus)}, {"plus", number(est.roots.plus)}}
                                      : Json("none");
    j["slope_branch"] = est.slope_branch;
    j["sign_at_zero"] = {{"verdict", to_string(est.sign_at_zero)}, {"provenance", est.sign_provenance}};
    j["integral_g"] = number(est.mean_g);
    j["integral_f"] = number(est.mean_f);
    return j;
}

Json to_json(const StimaResult& s) {
    std::string clause(1, s.clause);
    return {{"k", number(s.k)},
            {"verdict", to_string(s.verdict)},
            {"clause", clause},
            {"certificate", s.certificate},
            {"detail", s.detail}};
}

Json to_json(const FinitenessVerdict& v) {
    Json j{{"value", to_string(v.value)}, {"criterion", v.criterion}, {"detail", v.detail}};
    if (v.exponent) j["exponent"] = number(*v.exponent);
    if (v.open_case) j["open_case"] = true;
    return j;
}

Json to_json(const SlopeVerdict& v) {
    return {{"value", optional_number(v.value)}, {"criterion", v.criterion}, {"detail", v.detail}};
}

Json to_json(const EndpointTime& t) {
    return {{"value", number(t.value)},
            {"finiteness", to_string(t.finiteness)},
            {"bulk", number(t.bulk)},
            {"tail", number(t.tail)},
            {"tail_exponent", number(t.tail_exponent)},
            {"tail_kind", to_string(t.tail_kind)},
            {"note", t.note}};
}

Json to_json(const NumericEvidence& ev) {
    return {{"c", number(ev.c)},
            {"alpha", to_json(ev.alpha)},
            {"beta", to_json(ev.beta)},
            {"slope_at_0", optional_number(ev.slope_0)},
            {"slope_at_1", optional_number(ev.slope_1)},
            {"note", ev.note}};
}

Json to_json(const WaveClassification& w) {
    auto field = [](Json value, const FieldEvidence& ev) {
        return Json{{"value", std::move(value)}, {"provenance", to_string(ev.provenance)}, {"detail", ev.detail}};
    };
    Json j{{"c", number(w.c)},
           {"critical", w.critical},
           {"wave_type", to_string(w.type)},
           {"alpha", field(to_string(w.alpha_finite), w.alpha_evidence)},
           {"beta", field(to_string(w.beta_finite), w.beta_evidence)},
           {"slope_at_1", field(optional_number(w.slope_at_1), w.slope_1_evidence)},
           {"slope_at_0", field(optional_number(w.slope_at_0), w.slope_0_evidence)}};
    Json routes{{"alpha_general", to_json(w.alpha_general)},
                {"beta_general", to_json(w.beta_general)},
                {"slope_at_1_general", to_json(w.slope_1_general)},
                {"slope_at_0_general", to_json(w.slope_0_general)}};
    if (w.alpha_power_law)
        routes["alpha_power_law"] = {{"time", to_json(w.alpha_power_law->time)},
                                     {"slope", to_json(w.alpha_power_law->slope)}};
    if (w.beta_power_law)
        routes["beta_power_law"] = {{"time", to_json(w.beta_power_law->time)},
                                    {"slope", to_json(w.beta_power_law->slope)}};
    j["routes"] = routes;
    j["numeric"] = w.numeric ? to_json(*w.numeric) : Json(nullptr);
    j["conflicts"] = w.conflicts;
    return j;
}

Json to_json(const VerificationReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"value", number(c.value)},
                          {"threshold", number(c.threshold)},
                          {"detail", c.detail}});
    return {{"all_pass", rep.all_pass()}, {"max_rho", number(rep.max_rho)}, {"checks", checks}};
}

Json summary_json(const WaveProfile& w) {
    Json j{{"c", number(w.c)},
           {"anchor_u", number(w.anchor_u)},
           {"rows", w.samples.size()},
           {"alpha", number(w.alpha)},
           {"beta", number(w.beta)},
           {"alpha_finite", to_string(w.alpha_finite)},
           {"beta_finite", to_string(w.beta_finite)},
           {"reached_one", w.reached_one},
           {"reached_zero", w.reached_zero},
           {"clipped_near_one", w.clipped_near_one},
           {"alpha_undecided", w.alpha_undecided},
           {"beta_undecided", w.beta_undecided}};
    if (!w.alpha_note.empty()) j["alpha_note"] = w.alpha_note;
    if (!w.beta_note.empty()) j["beta_note"] = w.beta_note;
    if (!w.samples.empty()) {
        const auto& a = w.samples.front();
        const auto& b = w.samples.back();
        j["first"] = {{"t", number(a.t)}, {"u", number(a.u)}, {"du_dt", number(a.du_dt)}};
        j["last"] = {{"t", number(b.t)}, {"u", number(b.u)}, {"du_dt", number(b.du_dt)}};
    }
    return j;
}

Json summary_json(const ReducedSolution& sol) {
    Json j{{"c", number(sol.c)},
           {"M", number(sol.M)},
           {"samples", sol.samples.size()},
           {"termination", to_string(sol.termination)},
           {"seed", {{"u", number(sol.start.u)}, {"z", number(sol.start.z)}, {"kind", to_string(sol.start.kind)}}}};
    if (!sol.samples.empty()) j["u_range"] = {number(sol.u_min()), number(sol.u_max())};
    j["touchdown"] = sol.touchdown ? number(*sol.touchdown) : Json(nullptr);
    if (sol.z_slope_0)
        j["z_slope_0"] = {{"value", number(sol.z_slope_0->value)}, {"converged", sol.z_slope_0->converged}};
    if (sol.z_slope_1)
        j["z_slope_1"] = sol.z_slope_1->differentiable ? number(-sol.z_slope_1->magnitude) : Json("nondifferentiable");
    return j;
}

} // namespace twave
