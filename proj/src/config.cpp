#include "twave/config.hpp"

#include "twave/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace twave {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

double get_number(const Json& j, const std::string& key) {
    if (!j.is_number()) fail("'" + key + "' must be a number");
    return j.get<double>();
}

// Coefficients may be given as expression strings or numbers.
std::string get_expression(const Json& obj, const std::string& key) {
    if (!obj.contains(key)) fail("problem." + key + " is required");
    const Json& j = obj.at(key);
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        return os.str();
    }
    fail("problem." + key + " must be an expression string or a number");
}

std::optional<PowerLawMeta> get_power(const Json& obj, const std::string& key, const char* exponent_key,
                                      Endpoint e) {
    if (!obj.contains(key)) return std::nullopt;
    const Json& j = obj.at(key);
    if (!j.is_object()) fail("problem." + key + " must be an object {k, " + exponent_key + "}");
    PowerLawMeta m;
    m.endpoint = e;
    if (!j.contains("k") || !j.contains(exponent_key))
        fail("problem." + key + " needs keys 'k' and '" + exponent_key + "'");
    m.constant = get_number(j.at("k"), key + ".k");
    m.exponent = get_number(j.at(exponent_key), key + "." + exponent_key);
    if (!(m.constant > 0.0) || !std::isfinite(m.constant)) fail("problem." + key + ".k must be positive");
    if (!std::isfinite(m.exponent)) fail("problem." + key + "." + exponent_key + " must be finite");
    return m;
}

bool get_bool(const Json& obj, const std::string& key) {
    if (!obj.contains(key)) return false;
    if (!obj.at(key).is_boolean()) fail("problem." + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

std::vector<double> get_list(const Json& j, const std::string& key) {
    std::vector<double> out;
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) fail("'" + key + "' must be a number or an array of numbers");
    for (const auto& x : j) out.push_back(get_number(x, key));
    return out;
}

} // namespace

CoefficientSet parse_problem(const Json& pr) {
    if (!pr.is_object()) fail("'problem' must be an object");
    if (!pr.contains("p")) fail("problem.p is required");
    double p = get_number(pr.at("p"), "problem.p");
    CoefficientSet cs = CoefficientSet::from_expressions(p, get_expression(pr, "f"), get_expression(pr, "g"),
                                                         get_expression(pr, "d"), get_expression(pr, "rho"));
    cs.meta0.d = get_power(pr, "d_powerlaw_0", "delta", Endpoint::zero);
    cs.meta0.rho = get_power(pr, "rho_powerlaw_0", "r", Endpoint::zero);
    cs.meta1.d = get_power(pr, "d_powerlaw_1", "delta", Endpoint::one);
    cs.meta1.rho = get_power(pr, "rho_powerlaw_1", "r", Endpoint::one);
    cs.meta0.chain_asserted = get_bool(pr, "chain_0");
    cs.meta1.chain_asserted = get_bool(pr, "chain_1");
    static const char* known[] = {"p",           "f",           "g",       "d",      "rho",
                                  "d_powerlaw_0", "rho_powerlaw_0", "d_powerlaw_1", "rho_powerlaw_1",
                                  "chain_0",     "chain_1"};
    for (const auto& [key, _] : pr.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail("unknown key problem." + key);
    }
    return cs;
}

RunConfig parse_config(const Json& doc) {
    if (!doc.is_object()) fail("config must be a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "problem") {
            cfg.problem = parse_problem(value);
            cfg.problem_json = value;
            cfg.has_problem = true;
        } else if (key == "tol") {
            cfg.tol = get_number(value, key);
        } else if (key == "grid") {
            if (!value.is_number_integer()) fail("'grid' must be an integer");
            cfg.grid = value.get<int>();
        } else if (key == "c") {
            cfg.c = get_number(value, key);
        } else if (key == "k") {
            cfg.k = get_list(value, key);
        } else if (key == "t_window") {
            auto w = get_list(value, key);
            if (w.size() != 2) fail("'t_window' must be [t_min, t_max]");
            cfg.t_min = w[0];
            cfg.t_max = w[1];
        } else if (key == "output_dt") {
            cfg.output_dt = get_number(value, key);
        } else if (key == "u_floor") {
            cfg.u_floor = get_number(value, key);
        } else if (key == "out") {
            if (!value.is_string()) fail("'out' must be a string");
            cfg.out = value.get<std::string>();
        } else if (key == "sweep") {
            if (!value.is_object()) fail("'sweep' must be an object");
            if (value.contains("c_range")) {
                const Json& r = value.at("c_range");
                if (!r.is_object()) fail("sweep.c_range must be an object {from, to, count, relative}");
                SpeedRange s;
                if (!r.contains("from") || !r.contains("to") || !r.contains("count"))
                    fail("sweep.c_range needs 'from', 'to' and 'count'");
                s.from = get_number(r.at("from"), "sweep.c_range.from");
                s.to = get_number(r.at("to"), "sweep.c_range.to");
                if (!r.at("count").is_number_integer()) fail("sweep.c_range.count must be an integer");
                s.count = r.at("count").get<int>();
                if (r.contains("relative")) {
                    if (!r.at("relative").is_boolean()) fail("sweep.c_range.relative must be a boolean");
                    s.relative = r.at("relative").get<bool>();
                }
                cfg.speeds = s;
            }
            if (value.contains("p") || value.contains("delta") || value.contains("r")) {
                PowerGrid g;
                if (value.contains("p")) g.p = get_list(value.at("p"), "sweep.p");
                if (value.contains("delta")) g.delta = get_list(value.at("delta"), "sweep.delta");
                if (value.contains("r")) g.r = get_list(value.at("r"), "sweep.r");
                cfg.power_grid = g;
            }
            for (const auto& [sk, _] : value.items())
                if (sk != "c_range" && sk != "p" && sk != "delta" && sk != "r") fail("unknown key sweep." + sk);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file " + path);
    Json doc;
    try {
        doc = Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.tol > 0.0)) fail("tol must be positive");
    if (cfg.grid < 16) fail("grid must be at least 16");
    if (!(cfg.output_dt > 0.0)) fail("output_dt must be positive");
    if (!(cfg.u_floor > 0.0 && cfg.u_floor < 1e-2)) fail("u_floor must lie in (0, 1e-2)");
    if (!(cfg.t_min < cfg.t_max)) fail("t_window must satisfy t_min < t_max");
    if (!(cfg.t_min <= 0.0 && cfg.t_max >= 0.0)) fail("t_window must contain the anchor time 0");
    for (double k : cfg.k)
        if (!std::isfinite(k)) fail("k values must be finite");
    if (cfg.speeds) {
        if (cfg.speeds->count < 1) fail("sweep.c_range must contain at least one speed");
        if (cfg.speeds->to < cfg.speeds->from) fail("sweep.c_range needs from <= to");
        if (cfg.speeds->count == 1 && cfg.speeds->to != cfg.speeds->from)
            fail("sweep.c_range with count 1 needs from == to");
    }
    if (cfg.power_grid && cfg.power_grid->empty()) fail("sweep over (p, delta, r) needs non-empty lists");
}

} // namespace twave
