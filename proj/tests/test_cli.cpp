#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twave/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace twave;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, log;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "twave");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, log;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, log);
    return {code, out.str(), log.str()};
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "twave_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_config(const std::string& name, const std::string& body) {
    fs::path p = work_dir() / name;
    std::ofstream(p) << body;
    return p.string();
}

std::string shipped(const std::string& name) { return (fs::path(TWAVE_CONFIG_DIR) / name).string(); }

} // namespace

TEST_CASE("check") {
    Run ok = run({"check", shipped("fisher.json")});
    CHECK(ok.code == kExitOk);
    CHECK(ok.json()["limits"]["ell0"]["value"].get<double>() == doctest::Approx(1.0));

    Run bad = run({"check", write_config("sign.json", R"j({"problem": {"p": 2, "f": 0, "g": 1, "d": 1,
                                                        "rho": "u*(1-u)*(u-0.5)"}})j")});
    CHECK(bad.code == kExitFailure);
    CHECK(bad.log.find("rho > 0 on (0,1)") != std::string::npos);

    Run syn = run({"check", write_config("syntax.json", R"j({"problem": {"p": 2, "f": 0, "g": 1, "d": 1,
                                                          "rho": "u*(1-"}})j")});
    CHECK(syn.code == kExitUsage);
    CHECK(syn.log.find("offset 5") != std::string::npos);
}

TEST_CASE("cstar") {
    Run f = run({"cstar", shipped("fisher.json")});
    CHECK(f.code == kExitOk);
    CHECK(f.json()["estimate"]["cstar"].get<double>() == doctest::Approx(2.0).epsilon(1e-4));

    Run none = run({"cstar", write_config("inf.json", R"j({"problem": {"p": 2, "f": 0, "g": 1, "d": 1,
                                                        "rho": "sqrt(u)*(1-u)"}})j")});
    CHECK(none.code == kExitFailure);
    CHECK(none.log.find("no t.w.s. for any c") != std::string::npos);

    Run k = run({"cstar", shipped("degenerate_fisher.json"), "--k", "0.3", "--k", "1.0"});
    CHECK(k.code == kExitOk);
    auto tests = k.json()["sign_tests"];
    REQUIRE(tests.size() == 2);
    CHECK(tests[0]["k"].get<double>() == doctest::Approx(0.3));
    // c* = 0.7071 <= 1 is certified by clause (b).
    CHECK(tests[1]["verdict"] == "ProvesLessEq");
}

TEST_CASE("classify") {
    Run d = run({"classify", shipped("degenerate_fisher.json")});
    CHECK(d.code == kExitOk);
    auto w = d.json()["classification"];
    CHECK(w["wave_type"] == "sharp-I");
    CHECK(w["beta"]["value"] == "finite");
    CHECK(w["beta"]["provenance"] == "both-agree");

    Run f = run({"classify", shipped("fisher.json"), "--c", "3"});
    CHECK(f.code == kExitOk);
    auto fw = f.json()["classification"];
    CHECK(fw["wave_type"] == "classical");
    for (const char* k : {"alpha", "beta", "slope_at_1", "slope_at_0"}) CHECK(fw[k]["provenance"] == "both-agree");

    Run open = run({"classify", shipped("open_case.json")});
    CHECK(open.code == kExitOk);
    CHECK(open.json()["classification"]["beta"]["value"] == "unknown");

    Run below = run({"classify", shipped("fisher.json"), "--c", "1.5"});
    CHECK(below.code == kExitFailure);
}

TEST_CASE("profile") {
    fs::path out = work_dir() / "fisher_profile";
    Run f = run({"profile", shipped("fisher.json"), "--c", "2", "--t-window", "-20", "20", "--out", out.string()});
    CHECK(f.code == kExitOk);
    std::ifstream csv(out / "profile.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows > 1000);
    CHECK(fs::exists(out / "reduced.csv"));
    CHECK(f.json()["verification"]["all_pass"] == true);

    fs::path dout = work_dir() / "deg_profile";
    Run d = run({"profile", shipped("degenerate_fisher.json"), "--out", dout.string()});
    CHECK(d.code == kExitOk);
    auto prof = d.json()["profile"];
    CHECK(prof["beta_finite"] == "finite");
    CHECK(prof["last"]["du_dt"].get<double>() == doctest::Approx(-0.7071).epsilon(0.02));

    Run win = run({"profile", shipped("fisher.json"), "--t-window", "1", "5"});
    CHECK(win.code == kExitUsage);
}

TEST_CASE("sweep") {
    Run s = run({"sweep", shipped("degenerate_fisher_sweep.json")});
    CHECK(s.code == kExitOk);
    auto rows = s.json()["rows"][0]["rows"];
    REQUIRE(rows.size() == 5);
    CHECK(rows[0]["wave_type"] == "sharp-I");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["wave_type"] == "classical");
    CHECK(s.json()["summary"]["conflicts"] == 0);

    Run empty = run({"sweep", write_config("empty.json", R"j({"problem": {"p": 2, "f": 0, "g": 1, "d": 1,
        "rho": "u*(1-u)"}, "sweep": {"c_range": {"from": 0, "to": 1, "count": 0}}})j")});
    CHECK(empty.code == kExitUsage);

    Run nogrid = run({"sweep", shipped("fisher.json")});
    CHECK(nogrid.code == kExitUsage);
}

TEST_CASE("usage and config errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"check", (work_dir() / "missing.json").string()}).code == kExitUsage);
    CHECK(run({"check", shipped("fisher.json"), "--bogus"}).code == kExitUsage);
    CHECK(run({"check", write_config("key.json", R"j({"problem": {"p": 2, "f": 0, "g": 1, "d": 1,
        "rho": "u*(1-u)", "mystery": 1}})j")}).code == kExitUsage);
    CHECK(run({"check", write_config("json.json", "{ not json")}).code == kExitUsage);
    CHECK(run({"cstar", shipped("fisher.json"), "--tol", "0"}).code == kExitUsage);
    CHECK(run({"check", "--help"}).code == kExitOk);
}

TEST_CASE("reports are deterministic") {
    Run a = run({"classify", shipped("degenerate_fisher.json")});
    Run b = run({"classify", shipped("degenerate_fisher.json")});
    CHECK(a.out == b.out);
}
