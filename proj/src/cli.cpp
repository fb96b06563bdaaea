#include "twave/cli.hpp"

#include "twave/classification.hpp"
#include "twave/error.hpp"
#include "twave/profile.hpp"
#include "twave/wavespeed.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

namespace twave {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void require_problem(const RunConfig& cfg) {
    if (!cfg.has_problem) config_error("config has no 'problem' object");
}

IntegrationOptions integration_options(const RunConfig& cfg) {
    IntegrationOptions io;
    io.u_floor = cfg.u_floor;
    return io;
}

CStarOptions cstar_options(const RunConfig& cfg) {
    CStarOptions o;
    o.tol = cfg.tol;
    o.integration = integration_options(cfg);
    return o;
}

Json header(const char* command, const RunConfig& cfg) {
    Json j{{"command", command}};
    if (cfg.has_problem) j["problem"] = cfg.problem_json;
    return j;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string show(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string show(const std::optional<double>& v) { return v ? show(*v) : "unknown"; }

// Hypotheses and ell0 must allow waves before any speed computation.
bool precheck(const RunConfig& cfg, Json& rep, std::ostream& log) {
    ValidationReport vr = validate_hypotheses(cfg.problem, cfg.grid);
    rep["validation"] = to_json(vr);
    if (!vr.all_pass()) {
        for (const auto& c : vr.checks)
            if (!c.pass) log << "hypothesis failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
        return false;
    }
    return true;
}

struct SpeedContext {
    EndpointLimits lim;
    WaveSpeedEstimate est;
    CriticalSpeed crit;
};

SpeedContext speed_context(const CoefficientSet& cs, const RunConfig& cfg) {
    SpeedContext s;
    s.lim = endpoint_limits(cs);
    s.est = cstar(cs, s.lim, cstar_options(cfg));
    s.crit = CriticalSpeed::from(s.est);
    return s;
}

// Speed requested by the config, defaulting to c*. Returns false below c*.
bool resolve_speed(const RunConfig& cfg, const SpeedContext& s, double& c, std::ostream& log) {
    c = cfg.c.value_or(s.est.cstar);
    if (c < s.est.cstar - s.crit.tol) {
        log << "no traveling wave for c = " << show(c) << " below c* = " << show(s.est.cstar) << '\n';
        return false;
    }
    return true;
}

void log_classification(const WaveClassification& w, std::ostream& log) {
    log << "c = " << show(w.c) << (w.critical ? " (critical)" : "") << ": " << to_string(w.type) << '\n'
        << "  alpha " << to_string(w.alpha_finite) << " [" << to_string(w.alpha_evidence.provenance) << "] "
        << w.alpha_evidence.detail << '\n'
        << "  beta  " << to_string(w.beta_finite) << " [" << to_string(w.beta_evidence.provenance) << "] "
        << w.beta_evidence.detail << '\n'
        << "  u'(alpha+) " << show(w.slope_at_1) << " [" << to_string(w.slope_1_evidence.provenance) << "]\n"
        << "  u'(beta-)  " << show(w.slope_at_0) << " [" << to_string(w.slope_0_evidence.provenance) << "]\n";
    for (const auto& c : w.conflicts) log << "  conflict: " << c << '\n';
}

} // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    require_problem(cfg);
    Json rep = header("check", cfg);
    bool ok = precheck(cfg, rep, log);
    bool ell0_finite = false;
    try {
        EndpointLimits lim = endpoint_limits(cfg.problem);
        rep["limits"] = to_json(lim);
        ell0_finite = lim.ell0.known() && std::isfinite(lim.ell0.value);
        log << "ell0 = " << show(lim.ell0.value) << " (" << to_string(lim.ell0.confidence) << "), ell1 = "
            << show(lim.ell1.value) << ", h0 = " << show(lim.h0.value) << ", h1 = " << show(lim.h1.value)
            << ", d'(0) = " << show(lim.ddot_0.value) << ", d'(1) = " << show(lim.ddot_1.value) << '\n';
        if (!ell0_finite) log << "ell0 is infinite: no traveling wave for any c\n";
    } catch (const Error& e) {
        rep["limits_error"] = e.what();
        log << "endpoint limits: " << e.what() << '\n';
    }
    rep["pass"] = ok && ell0_finite;
    emit(out, rep);
    return ok && ell0_finite ? kExitOk : kExitFailure;
}

int cmd_cstar(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    require_problem(cfg);
    Json rep = header("cstar", cfg);
    if (!precheck(cfg, rep, log)) {
        emit(out, rep);
        return kExitFailure;
    }
    try {
        SpeedContext s = speed_context(cfg.problem, cfg);
        rep["limits"] = to_json(s.lim);
        rep["estimate"] = to_json(s.est);
        Json tests = Json::array();
        for (double k : cfg.k) {
            StimaResult r = stima_test(cfg.problem, k, cfg.grid);
            tests.push_back(to_json(r));
            log << "sign test k = " << show(k) << ": " << to_string(r.verdict) << " (" << r.certificate << ")\n";
        }
        rep["sign_tests"] = tests;
        log << "c* = " << show(s.est.cstar) << " +- " << show(s.est.half_width) << ", analytic bracket ["
            << show(s.est.bounds.lower) << ", " << show(s.est.bounds.upper) << "], c* g(0) - f(0): "
            << to_string(s.est.sign_at_zero) << '\n';
        emit(out, rep);
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        rep["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
        log << (e.code() == ErrorCode::no_existence ? "no t.w.s. for any c: " : "error: ") << e.what() << '\n';
        emit(out, rep);
        return kExitFailure;
    }
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    require_problem(cfg);
    Json rep = header("classify", cfg);
    if (!precheck(cfg, rep, log)) {
        emit(out, rep);
        return kExitFailure;
    }
    try {
        SpeedContext s = speed_context(cfg.problem, cfg);
        rep["cstar"] = number(s.est.cstar);
        double c = 0.0;
        if (!resolve_speed(cfg, s, c, log)) {
            rep["error"] = "speed below c*";
            emit(out, rep);
            return kExitFailure;
        }
        WaveClassification w = classify_with_numerics(c, s.crit, cfg.problem, s.lim, integration_options(cfg));
        rep["classification"] = to_json(w);
        log_classification(w, log);
        emit(out, rep);
        return w.has_conflict() ? kExitFailure : kExitOk;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        rep["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
        log << "error: " << e.what() << '\n';
        emit(out, rep);
        return kExitFailure;
    }
}

int cmd_profile(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    require_problem(cfg);
    Json rep = header("profile", cfg);
    if (!precheck(cfg, rep, log)) {
        emit(out, rep);
        return kExitFailure;
    }
    std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) config_error("output directory " + cfg.out + " is not writable");
    try {
        SpeedContext s = speed_context(cfg.problem, cfg);
        double c = 0.0;
        if (!resolve_speed(cfg, s, c, log)) {
            rep["error"] = "speed below c*";
            emit(out, rep);
            return kExitFailure;
        }
        const double c_shot = s.crit.is_critical(c) ? std::max(c, s.crit.surviving) : c;
        ReducedSolution sol = solve_from_one(c_shot, cfg.problem, s.lim, integration_options(cfg));
        rep["cstar"] = number(s.est.cstar);
        rep["c"] = number(c);
        rep["reduced"] = summary_json(sol);
        if (sol.termination != Termination::reached_floor) {
            log << "reduced solution did not reach the floor: " << to_string(sol.termination) << '\n';
            emit(out, rep);
            return kExitFailure;
        }
        ReconstructOptions ro;
        ro.t_min = cfg.t_min;
        ro.t_max = cfg.t_max;
        ro.output_dt = cfg.output_dt;
        WaveProfile w = reconstruct(sol, cfg.problem, s.lim, ro);
        VerificationReport vr = verify_profile(w, cfg.problem, c_shot);

        const auto csv = dir / "profile.csv";
        const auto zcsv = dir / "reduced.csv";
        {
            std::ofstream f(csv);
            if (!f) config_error("cannot write " + csv.string());
            w.write_csv(f);
            std::ofstream g(zcsv);
            if (!g) config_error("cannot write " + zcsv.string());
            sol.write_csv(g);
        }
        rep["profile"] = summary_json(w);
        rep["verification"] = to_json(vr);
        rep["files"] = {{"profile", csv.string()}, {"reduced", zcsv.string()}};

        log << "profile c = " << show(c) << ": " << w.samples.size() << " rows, alpha = " << show(w.alpha)
            << ", beta = " << show(w.beta) << ", terminal u' = " << show(w.samples.back().du_dt) << '\n';
        for (const auto& chk : vr.checks)
            log << "  " << chk.name << ": " << (chk.pass ? "pass" : "FAIL") << " " << show(chk.value) << " ("
                << chk.detail << ")\n";
        emit(out, rep);
        const ProfileCheck* res = vr.find("residual");
        const ProfileCheck* mono = vr.find("monotone");
        return (res && res->pass && mono && mono->pass) ? kExitOk : kExitFailure;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        rep["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
        log << "error: " << e.what() << '\n';
        emit(out, rep);
        return kExitFailure;
    }
}

namespace {

struct SweepTask {
    std::string label;
    std::optional<double> p, delta, r;  // power-grid coordinates
    bool admissible = true;
};

struct SweepRow {
    Json json;
    int agree = 0, conflicts = 0, unknowns = 0;
    bool failed = false;
};

void count_fields(const WaveClassification& w, SweepRow& row) {
    for (const FieldEvidence* ev : {&w.alpha_evidence, &w.beta_evidence, &w.slope_1_evidence, &w.slope_0_evidence})
        if (ev->provenance == Provenance::both_agree) ++row.agree;
    row.conflicts += static_cast<int>(w.conflicts.size());
    row.unknowns += (w.alpha_finite == Finiteness::unknown) + (w.beta_finite == Finiteness::unknown) +
                    !w.slope_at_1.has_value() + !w.slope_at_0.has_value();
}

SweepRow run_row(const SweepTask& task, const RunConfig& cfg) {
    SweepRow row;
    row.json = {{"label", task.label}};
    if (task.p) row.json["p"] = *task.p;
    if (task.delta) row.json["delta"] = *task.delta;
    if (task.r) row.json["r"] = *task.r;
    if (!task.admissible) {
        row.json["status"] = "skipped: descriptors violate the existence conditions";
        return row;
    }
    try {
        CoefficientSet cs = task.p ? symmetric_power_instance(*task.p, *task.delta, *task.r) : cfg.problem;
        SpeedContext s = speed_context(cs, cfg);
        row.json["cstar"] = number(s.est.cstar);
        std::vector<double> speeds;
        if (cfg.speeds) {
            const auto& sr = *cfg.speeds;
            for (int i = 0; i < sr.count; ++i) {
                double t = sr.count == 1 ? sr.from : sr.from + (sr.to - sr.from) * i / (sr.count - 1);
                speeds.push_back(sr.relative ? s.est.cstar + t : t);
            }
        } else {
            speeds.push_back(s.est.cstar);
        }
        Json cls = Json::array();
        for (double c : speeds) {
            if (c < s.est.cstar - s.crit.tol) {
                cls.push_back({{"c", number(c)}, {"status", "below c*"}});
                continue;
            }
            WaveClassification w = classify_with_numerics(c, s.crit, cs, s.lim, integration_options(cfg));
            count_fields(w, row);
            cls.push_back({{"c", number(c)},
                           {"wave_type", to_string(w.type)},
                           {"alpha", to_string(w.alpha_finite)},
                           {"beta", to_string(w.beta_finite)},
                           {"slope_at_1", w.slope_at_1 ? number(*w.slope_at_1) : Json("unknown")},
                           {"slope_at_0", w.slope_at_0 ? number(*w.slope_at_0) : Json("unknown")},
                           {"provenance",
                            {{"alpha", to_string(w.alpha_evidence.provenance)},
                             {"beta", to_string(w.beta_evidence.provenance)},
                             {"slope_at_1", to_string(w.slope_1_evidence.provenance)},
                             {"slope_at_0", to_string(w.slope_0_evidence.provenance)}}},
                           {"criteria",
                            {{"alpha", w.alpha_general.criterion},
                             {"beta", w.beta_general.criterion},
                             {"alpha_power_law", w.alpha_power_law ? Json(w.alpha_power_law->time.criterion) : Json()},
                             {"beta_power_law", w.beta_power_law ? Json(w.beta_power_law->time.criterion) : Json()}}},
                           {"conflicts", w.conflicts}});
        }
        row.json["status"] = "ok";
        row.json["rows"] = cls;
    } catch (const Error& e) {
        row.failed = true;
        row.json["status"] = std::string("error: ") + e.what();
    }
    return row;
}

} // namespace

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    std::vector<SweepTask> tasks;
    if (cfg.power_grid) {
        for (double p : cfg.power_grid->p)
            for (double d : cfg.power_grid->delta)
                for (double r : cfg.power_grid->r) {
                    std::ostringstream os;
                    os << "p=" << p << " delta=" << d << " r=" << r;
                    SweepTask t{os.str(), p, d, r, p > 1.0 && admissible_at_zero(p, d, r) && admissible_at_one(p, d, r)};
                    tasks.push_back(t);
                }
    } else if (cfg.speeds) {
        require_problem(cfg);
        tasks.push_back({"problem", std::nullopt, std::nullopt, std::nullopt, true});
    }
    if (tasks.empty()) config_error("sweep needs a (p, delta, r) grid or a c_range");

    // Parallel map; rows land in their grid slot so the order is fixed.
    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) rows[k] = run_row(tasks[k], cfg);
        });
    for (auto& t : pool) t.join();

    Json rep = header("sweep", cfg);
    Json arr = Json::array();
    int agree = 0, conflicts = 0, unknowns = 0, failed = 0, skipped = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        agree += r.agree;
        conflicts += r.conflicts;
        unknowns += r.unknowns;
        failed += r.failed;
        skipped += !tasks[i].admissible;
        arr.push_back(r.json);
        log << tasks[i].label << ": " << r.json.value("status", "") ;
        if (r.json.contains("rows"))
            for (const auto& c : r.json["rows"])
                log << " | c=" << c["c"].dump() << " " << c.value("wave_type", c.value("status", ""));
        log << '\n';
    }
    rep["rows"] = arr;
    rep["summary"] = {{"points", tasks.size()},
                      {"skipped", skipped},
                      {"failed", failed},
                      {"both_agree_fields", agree},
                      {"conflicts", conflicts},
                      {"unknown_fields", unknowns}};
    log << "summary: " << tasks.size() << " points, " << skipped << " skipped, " << failed << " failed, " << agree
        << " fields both-agree, " << conflicts << " conflicts, " << unknowns << " unknown fields\n";
    emit(out, rep);
    return conflicts > 0 || failed > 0 ? kExitFailure : kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& log) {
    CLI::App app{"Traveling waves of p-Laplacian reaction-diffusion-advection equations"};
    app.require_subcommand(1);
    std::string path;
    std::optional<double> c, tol;
    std::optional<int> grid;
    std::vector<double> window, ks;
    std::optional<std::string> out_dir;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("config", path, "JSON config file");
        if (config_required) opt->required();
        sub->add_option("--tol", tol, "c* bisection tolerance");
        sub->add_option("--grid", grid, "validation and sign-test grid size");
        sub->add_option("--out", out_dir, "output directory");
    };
    auto* check = app.add_subcommand("check", "validate hypotheses and endpoint limits");
    auto* cst = app.add_subcommand("cstar", "critical speed, analytic bracket and sign tests");
    auto* cls = app.add_subcommand("classify", "classify the wave at a speed");
    auto* prof = app.add_subcommand("profile", "reconstruct and verify the wave profile");
    auto* sweep = app.add_subcommand("sweep", "classification over a (p, delta, r) grid or a speed range");
    for (auto* s : {check, cst, cls, prof}) add_common(s, true);
    add_common(sweep, true);
    cst->add_option("--k", ks, "constants for the sign tests");
    for (auto* s : {cls, prof}) s->add_option("--c", c, "wave speed (default c*)");
    prof->add_option("--t-window", window, "t_min t_max")->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, log);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg = load_config(path);
        if (c) cfg.c = *c;
        if (tol) cfg.tol = *tol;
        if (grid) cfg.grid = *grid;
        if (out_dir) cfg.out = *out_dir;
        if (!ks.empty()) cfg.k = ks;
        if (window.size() == 2) {
            cfg.t_min = window[0];
            cfg.t_max = window[1];
        }
        validate_config(cfg);
        if (*check) return cmd_check(cfg, out, log);
        if (*cst) return cmd_cstar(cfg, out, log);
        if (*cls) return cmd_classify(cfg, out, log);
        if (*prof) return cmd_profile(cfg, out, log);
        return cmd_sweep(cfg, out, log);
    } catch (const SyntaxError& e) {
        log << "config error: " << e.what() << " at offset " << e.offset() << " (token '" << e.token() << "')\n";
        return kExitUsage;
    } catch (const Error& e) {
        log << (e.code() == ErrorCode::config ? "config error: " : "error: ") << e.what() << '\n';
        return e.code() == ErrorCode::config ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace twave
