#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "jacobi/version.hpp"

// End-to-end checks of the command line tool. The binary path is injected by
// the build; everything runs against throwaway directories under /tmp.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "jspec_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int run_tool(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + "\"" + JSPEC_BIN + "\" " + args + " >/dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

const char* kMoszynskiConfig = R"({
  "family": {"family": "multiple_weights", "params": {"N": 2, "q": 0.0}},
  "n_max": 20000,
  "lambdas": [-1.0, -0.25, 0.0, 0.25, 1.0]
})";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("analyze on a critical family writes the full report set") {
    fs::path dir = fresh_dir("analyze_critical");
    write_text(dir / "config.json", kMoszynskiConfig);
    fs::path out = dir / "out";

    int rc = run_tool("analyze --config " + (dir / "config.json").string() + " --out " +
                      out.string());
    CHECK(rc == 0);
    CHECK(fs::exists(out / "regime.json"));
    CHECK(fs::exists(out / "carleman.json"));
    CHECK(fs::exists(out / "hypotheses.json"));
    CHECK(fs::exists(out / "gap.json"));
    CHECK(fs::exists(out / "sweep.csv"));

    json gap = json::parse(slurp(out / "gap.json"));
    CHECK(gap.at("version").get<std::string>() == jacobi::kVersion);
    CHECK(gap.at("config_hash").get<std::string>().size() == 16);
    CHECK(gap.at("k0").get<long long>() == 1);
    CHECK(gap.at("gamma").get<double>() == -1.0);
    CHECK(std::fabs(gap.at("q").get<double>()) < 1e-9);
    CHECK(gap.at("s_sum").get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gap.at("gap").at("lambda_minus").get<double>() ==
          doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(gap.at("gap").at("lambda_plus").get<double>() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(!gap.at("gap").at("degenerate_point").get<bool>());
    // The one-weight and the even-period closed forms both apply here.
    REQUIRE(gap.contains("closed_form_multiple_weights"));
    CHECK(gap.at("closed_form_multiple_weights").at(0).get<double>() ==
          doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(gap.at("closed_form_multiple_weights").at(1).get<double>() ==
          doctest::Approx(0.5).epsilon(1e-10));
    REQUIRE(gap.contains("closed_form_additive_even"));
    CHECK(gap.at("closed_form_additive_even").at(0).get<double>() ==
          doctest::Approx(-0.5).epsilon(1e-10));

    json regime = json::parse(slurp(out / "regime.json"));
    CHECK(regime.at("verdict").at("kind").get<std::string>() == "Critical");

    // Sweep rows keep the config order; the flag column marks the gap.
    std::vector<std::string> lines = split(slurp(out / "sweep.csv"), '\n');
    REQUIRE(lines.size() >= 7);
    CHECK(lines[0] == "lambda,discr,inside_gap,rho_min,rho_max");
    auto row = [&](int i) { return split(lines[static_cast<size_t>(i)], ','); };
    CHECK(row(1)[2] == "0");   // -1.0 outside
    CHECK(row(2)[2] == "1");   // -0.25 inside
    CHECK(row(3)[2] == "1");   // 0.0 inside
    CHECK(row(5)[2] == "0");   // 1.0 outside
    CHECK(std::stod(row(3)[1]) == doctest::Approx(1.0).epsilon(1e-9));   // discr at 0
    CHECK(std::stod(row(5)[1]) == doctest::Approx(-3.0).epsilon(1e-9));  // discr at 1
}

TEST_CASE("analyze output is byte identical across thread counts") {
    fs::path dir = fresh_dir("analyze_jobs");
    write_text(dir / "config.json", kMoszynskiConfig);
    fs::path o1 = dir / "serial";
    fs::path o4 = dir / "threaded";

    std::string base = "analyze --config " + (dir / "config.json").string();
    CHECK(run_tool(base + " --jobs 1 --out " + o1.string()) == 0);
    CHECK(run_tool(base + " --jobs 4 --out " + o4.string()) == 0);
    for (const char* name : {"regime.json", "carleman.json", "hypotheses.json", "gap.json",
                             "sweep.csv"}) {
        CHECK(slurp(o1 / name) == slurp(o4 / name));
    }
}

TEST_CASE("malformed config leaves no output behind") {
    fs::path dir = fresh_dir("analyze_malformed");
    write_text(dir / "config.json", "{ this is not json");
    fs::path out = dir / "out";
    fs::path errfile = dir / "stderr.txt";

    std::string cmd = std::string("\"") + JSPEC_BIN + "\" analyze --config " +
                      (dir / "config.json").string() + " --out " + out.string() +
                      " >/dev/null 2>" + errfile.string();
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 64);
    CHECK(!fs::exists(out));
    std::string err = slurp(errfile);
    CHECK(err.find("config error") != std::string::npos);
    CHECK(err.find("parse error") != std::string::npos);
}

TEST_CASE("config validation failures are usage errors") {
    fs::path dir = fresh_dir("analyze_badkeys");
    fs::path out = dir / "out";

    write_text(dir / "unknown.json",
               R"({"family": {"family": "power", "params": {"kappa": 0.7}}, "bogus": 1})");
    CHECK(run_tool("analyze --config " + (dir / "unknown.json").string() + " --out " +
                   out.string()) == 64);
    CHECK(!fs::exists(out));

    write_text(dir / "nofamily.json", R"({"n_max": 5000})");
    CHECK(run_tool("analyze --config " + (dir / "nofamily.json").string() + " --out " +
                   out.string()) == 64);

    write_text(dir / "ok.json", R"({"family": {"family": "power", "params": {"kappa": 0.7}}})");
    CHECK(run_tool("analyze --config " + (dir / "ok.json").string() + " --n-max 500 --out " +
                   out.string()) == 64);

    // Missing config file is also caught before any output appears.
    CHECK(run_tool("analyze --config " + (dir / "absent.json").string() + " --out " +
                   out.string()) == 64);
    CHECK(!fs::exists(out));
}

TEST_CASE("degenerate and non-critical regimes exit with code 2") {
    fs::path dir = fresh_dir("exit_two");

    // Entrywise modulation with unequal weights makes the limit determinant
    // negative, so the asymptotic machinery refuses to run.
    write_text(dir / "degen.json", R"({
      "family": {"family": "modulated",
                 "params": {"alpha": [1.0, 2.0], "beta": [1.0, 1.0],
                            "base": {"family": "power", "params": {"kappa": 1.0}}}},
      "n_max": 20000
    })");
    fs::path out = dir / "out";
    CHECK(run_tool("analyze --config " + (dir / "degen.json").string() + " --out " +
                   out.string()) == 2);
    // The classification reports are still written; the pipeline products are not.
    CHECK(fs::exists(out / "regime.json"));
    CHECK(fs::exists(out / "carleman.json"));
    CHECK(fs::exists(out / "hypotheses.json"));
    CHECK(!fs::exists(out / "gap.json"));
    CHECK(!fs::exists(out / "sweep.csv"));
    json regime = json::parse(slurp(out / "regime.json"));
    CHECK(regime.at("verdict").at("kind").get<std::string>() == "Degenerate");

    fs::path tout = dir / "trace_out";
    CHECK(run_tool("trace --config " + (dir / "degen.json").string() +
                   " --lambda 0.5 --alpha 0.3 --out " + tout.string()) == 2);
    CHECK(!fs::exists(tout));

    // Gap endpoints only exist in the critical regime.
    write_text(dir / "regular.json",
               R"({"family": {"family": "power", "params": {"kappa": 0.7}}, "n_max": 20000})");
    fs::path gout = dir / "gap.json";
    CHECK(run_tool("gap --config " + (dir / "regular.json").string() + " --out " +
                   gout.string()) == 2);
    CHECK(!fs::exists(gout));
}

TEST_CASE("trace writes the orbit files and a summary") {
    fs::path dir = fresh_dir("trace_files");
    write_text(dir / "config.json", R"({
      "family": {"family": "multiple_weights", "params": {"N": 2, "q": 0.0}},
      "n_max": 20000
    })");
    fs::path out = dir / "out";

    int rc = run_tool("trace --config " + (dir / "config.json").string() +
                      " --lambda 1.0 --alpha 0.0 --out " + out.string());
    CHECK(rc == 0);
    for (const char* name : {"trajectory.csv", "polynomials.csv", "turan.csv", "profile.csv",
                             "summary.json"}) {
        CHECK(fs::exists(out / name));
    }
    CHECK(slurp(out / "trajectory.csv").rfind("n,u_prev,u_cur,log_scale\n", 0) == 0);
    CHECK(slurp(out / "polynomials.csv").rfind("n,p_n,partial_sum_sq\n", 0) == 0);
    CHECK(slurp(out / "turan.csv").rfind("n,s_n,log_scale,f_n\n", 0) == 0);
    CHECK(slurp(out / "profile.csv").rfind("residue,limit,oscillation,settled\n", 0) == 0);

    json summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary.at("version").get<std::string>() == jacobi::kVersion);
    CHECK(summary.at("lambda").get<double>() == 1.0);
    CHECK(summary.at("regime").at("kind").get<std::string>() == "Critical");
    CHECK(summary.at("turan").at("mode").get<std::string>() == "Critical");
    CHECK(summary.at("turan").at("sign_constant").get<bool>());
    CHECK(summary.at("nonsubordinacy_beta").get<double>() >= 1.0);
    CHECK(summary.at("profile").at("entries").size() == 2);

    // A decoupling direction kills the determinants; the trace survives and
    // records why the determinant files are missing.
    fs::path out0 = dir / "out_zero";
    rc = run_tool("trace --config " + (dir / "config.json").string() +
                  " --lambda 0.0 --alpha 0.0 --out " + out0.string());
    CHECK(rc == 0);
    CHECK(fs::exists(out0 / "trajectory.csv"));
    CHECK(!fs::exists(out0 / "turan.csv"));
    json zero = json::parse(slurp(out0 / "summary.json"));
    CHECK(!zero.contains("turan"));
    CHECK(zero.at("turan_error").get<std::string>().find("vanished") != std::string::npos);
}

TEST_CASE("gap endpoints match the closed forms from the command line") {
    fs::path dir = fresh_dir("gap_closed_forms");

    // Even period with a purely additive shift: endpoints +-|even - odd| / N.
    write_text(dir / "additive.json", R"({
      "family": {"family": "additive_periodic", "params": {"d": [1.0, 0.0], "q": 0.0}},
      "n_max": 20000
    })");
    fs::path aout = dir / "additive_gap.json";
    CHECK(run_tool("gap --config " + (dir / "additive.json").string() + " --out " +
                   aout.string()) == 0);
    json agap = json::parse(slurp(aout));
    CHECK(agap.at("regime").at("kind").get<std::string>() == "Critical");
    CHECK(agap.at("gap").at("lambda_minus").get<double>() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(agap.at("gap").at("lambda_plus").get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(agap.contains("closed_form_additive_even"));
    CHECK(agap.at("closed_form_additive_even").at(0).get<double>() ==
          doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(agap.at("closed_form_additive_even").at(1).get<double>() ==
          doctest::Approx(1.0).epsilon(1e-10));

    // Period three with one growing weight per block at the coupling q = 1.
    write_text(dir / "blocks3.json", R"({
      "family": {"family": "multiple_weights", "params": {"N": 3, "q": 1.0}},
      "n_max": 30000
    })");
    fs::path bout = dir / "blocks3_gap.json";
    CHECK(run_tool("gap --config " + (dir / "blocks3.json").string() + " --out " +
                   bout.string()) == 0);
    json bgap = json::parse(slurp(bout));
    CHECK(bgap.at("k0").get<long long>() == 1);
    CHECK(bgap.at("gap").at("lambda_minus").get<double>() ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-9));
    CHECK(bgap.at("gap").at("lambda_plus").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(bgap.contains("closed_form_multiple_weights"));
    CHECK(bgap.at("closed_form_multiple_weights").at(0).get<double>() ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-9));
    CHECK(bgap.at("closed_form_multiple_weights").at(1).get<double>() ==
          doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("usage errors and version flag") {
    fs::path dir = fresh_dir("usage");
    CHECK(run_tool("") == 64);
    CHECK(run_tool("frobnicate") == 64);
    CHECK(run_tool("analyze") == 64);
    CHECK(run_tool("trace --config x.json") == 64);

    fs::path vfile = dir / "version.txt";
    std::string cmd = std::string("\"") + JSPEC_BIN + "\" --version >" + vfile.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp(vfile).find(jacobi::kVersion) != std::string::npos);
}

TEST_CASE("tolerance profile env var is validated and applied") {
    fs::path dir = fresh_dir("tol_profile");
    write_text(dir / "config.json",
               R"({"family": {"family": "power", "params": {"kappa": 0.7}}, "n_max": 20000})");
    fs::path out = dir / "out";

    CHECK(run_tool("analyze --config " + (dir / "config.json").string() + " --out " +
                       out.string(),
                   "JSPEC_TOLERANCE_PROFILE=bogus ") == 64);
    CHECK(!fs::exists(out));
    CHECK(run_tool("analyze --config " + (dir / "config.json").string() + " --out " +
                       out.string(),
                   "JSPEC_TOLERANCE_PROFILE=strict ") == 0);
    fs::path out2 = dir / "out_loose";
    CHECK(run_tool("analyze --config " + (dir / "config.json").string() + " --out " +
                       out2.string(),
                   "JSPEC_TOLERANCE_PROFILE=loose ") == 0);
}
