#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jacobi/coefficients.hpp"
#include "jacobi/critical.hpp"
#include "jacobi/eigensolve.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/regime.hpp"
#include "jacobi/report.hpp"
#include "jacobi/tolerances.hpp"
#include "jacobi/turan.hpp"
#include "jacobi/variation.hpp"
#include "jacobi/version.hpp"

namespace fs = std::filesystem;
using jacobi::ojson;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitUsage = 64;

constexpr double kPi = 3.14159265358979323846;

// Config problems are usage errors: nothing has been written yet when one is
// thrown, so a bad config never leaves partial output behind.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double det = jacobi::tol::kDet;
    double critical_match = jacobi::tol::kCriticalMatch;
    double variation = jacobi::tol::kVariation;
    double growth_slope = jacobi::tol::kGrowthSlope;
    double profile_osc = jacobi::tol::kProfileOsc;
};

Tolerances profile_from_env() {
    const char* raw = std::getenv("JSPEC_TOLERANCE_PROFILE");
    std::string_view name = raw ? raw : "default";
    Tolerances t;
    if (name.empty() || name == "default") return t;
    if (name == "strict") {
        t.det = 1e-11;
        t.critical_match = 1e-10;
        t.variation = 1e-10;
        t.growth_slope = 0.1;
        t.profile_osc = 0.02;
        return t;
    }
    if (name == "loose") {
        t.det = 1e-6;
        t.critical_match = 1e-5;
        t.variation = 1e-6;
        t.growth_slope = 0.02;
        t.profile_osc = 0.2;
        return t;
    }
    throw ConfigError("unknown JSPEC_TOLERANCE_PROFILE '" + std::string(name) +
                      "' (expected default, strict, or loose)");
}

struct Run {
    ojson config;
    std::optional<jacobi::FamilySpec> family;
    long long N = 1;
    long long n_max = 100000;
    long long k_max = 10000;
    long long renorm_every = 64;
    long long alpha_count = 4;
    unsigned long long seed = 0;
    std::vector<double> lambdas;
    Tolerances tols;

    jacobi::JacobiCoefficients coeffs() const { return jacobi::make_coefficients(*family); }
};

long long take_int(const ojson& j, const std::string& key, long long defv, long long lo,
                   long long hi) {
    if (!j.contains(key)) return defv;
    const ojson& v = j.at(key);
    if (!v.is_number_integer())
        throw ConfigError("config key '" + key + "' must be an integer");
    long long x = v.get<long long>();
    if (x < lo || x > hi)
        throw ConfigError("config key '" + key + "' = " + std::to_string(x) + " out of range [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

double take_number(const ojson& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

std::vector<double> parse_lambdas(const ojson& j) {
    bool has_list = j.contains("lambdas");
    bool has_grid = j.contains("lambda_grid");
    if (has_list && has_grid)
        throw ConfigError("config may set either 'lambdas' or 'lambda_grid', not both");
    std::vector<double> out;
    if (has_list) {
        const ojson& arr = j.at("lambdas");
        if (!arr.is_array() || arr.empty())
            throw ConfigError("config key 'lambdas' must be a non-empty array of numbers");
        for (const auto& v : arr) out.push_back(take_number(v, "entry of 'lambdas'"));
    } else if (has_grid) {
        const ojson& g = j.at("lambda_grid");
        if (!g.is_object() || !g.contains("start") || !g.contains("stop") || !g.contains("step"))
            throw ConfigError("'lambda_grid' must be an object with start, stop, step");
        double start = take_number(g.at("start"), "lambda_grid.start");
        double stop = take_number(g.at("stop"), "lambda_grid.stop");
        double step = take_number(g.at("step"), "lambda_grid.step");
        if (!(step > 0.0)) throw ConfigError("lambda_grid.step must be positive");
        if (stop < start) throw ConfigError("lambda_grid.stop must be >= lambda_grid.start");
        long long count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw ConfigError("lambda_grid produces more than 100000 points");
        for (long long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    }
    return out;
}

Run load_run(const std::string& path, long long n_max_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    static const char* allowed[] = {"family",      "N",     "n_max",      "k_max",
                                    "lambdas",     "seed",  "alpha_count", "renorm_every",
                                    "lambda_grid", "tolerances"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || item.key() == k;
        if (!ok) throw ConfigError("unknown config key '" + item.key() + "'");
    }
    if (!j.contains("family")) throw ConfigError("config is missing the 'family' object");

    Run run;
    run.config = j;
    try {
        run.family = jacobi::FamilySpec::from_json(nlohmann::json(j.at("family")));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid 'family': ") + e.what());
    }

    long long default_period = run.coeffs().period_hint();
    run.N = take_int(j, "N", default_period, 1, 1024);
    run.n_max = take_int(j, "n_max", 100000, 1000, 1000000000);
    if (n_max_override > 0) {
        if (n_max_override < 1000) throw ConfigError("--n-max must be >= 1000");
        run.n_max = n_max_override;
    }
    run.k_max = take_int(j, "k_max", std::max<long long>(10, run.n_max / std::max<long long>(run.N, 1)),
                         10, 1000000000);
    run.renorm_every = take_int(j, "renorm_every", 64, 1, 100000);
    run.alpha_count = take_int(j, "alpha_count", 4, 2, 256);
    run.seed = static_cast<unsigned long long>(
        take_int(j, "seed", 0, 0, std::numeric_limits<long long>::max()));
    run.lambdas = parse_lambdas(j);

    run.tols = profile_from_env();
    if (j.contains("tolerances")) {
        const ojson& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        for (const auto& item : t.items()) {
            double v = take_number(item.value(), "tolerance '" + item.key() + "'");
            if (!(v > 0.0)) throw ConfigError("tolerance '" + item.key() + "' must be positive");
            if (item.key() == "det") run.tols.det = v;
            else if (item.key() == "critical_match") run.tols.critical_match = v;
            else if (item.key() == "variation") run.tols.variation = v;
            else if (item.key() == "growth_slope") run.tols.growth_slope = v;
            else if (item.key() == "profile_osc") run.tols.profile_osc = v;
            else throw ConfigError("unknown tolerance key '" + item.key() + "'");
        }
    }
    return run;
}

std::vector<jacobi::Vec2> make_directions(long long count, unsigned long long seed) {
    if (seed == 0) return jacobi::half_circle_directions(static_cast<int>(count));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::vector<jacobi::Vec2> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        double th = angle(rng);
        out.push_back({std::cos(th), std::sin(th)});
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing output file: " + path.string());
}

struct RegimeBundle {
    jacobi::RegularLimits limits;
    jacobi::RegimeVerdict verdict;
};

RegimeBundle classify(const Run& run, const jacobi::JacobiCoefficients& coeffs) {
    RegimeBundle rb;
    rb.limits = jacobi::estimate_regular_limits(coeffs, run.N, run.k_max);
    rb.verdict = jacobi::classify_regime(rb.limits, run.tols.det, run.tols.critical_match);
    return rb;
}

ojson regime_body(const Run& run, const RegimeBundle& rb) {
    ojson body;
    body["family"] = run.family->name();
    body["N"] = run.N;
    body["n_max"] = run.n_max;
    body["k_max"] = run.k_max;
    body["verdict"] = jacobi::to_json(rb.verdict);
    body["limits"] = jacobi::to_json(rb.limits);
    return body;
}

struct GapBundle {
    jacobi::CriticalHypothesisReport hyp;
    jacobi::CriticalLimits limits;
    jacobi::GapEstimate estimate;
};

GapBundle compute_gap(const Run& run, const jacobi::JacobiCoefficients& coeffs,
                      const jacobi::RegimeVerdict& verdict) {
    GapBundle gb;
    gb.hyp = jacobi::hypothesis_report_critical(coeffs, run.N, verdict.q, run.n_max,
                                                run.tols.variation);
    gb.limits = jacobi::make_critical_limits(run.N, verdict.k0, gb.hyp.s);
    gb.estimate = jacobi::gap_quadratic(gb.limits);
    return gb;
}

ojson gap_body(const GapBundle& gb) {
    ojson body;
    body["q"] = gb.limits.q;
    body["k0"] = gb.limits.k0;
    body["gamma"] = gb.limits.gamma;
    body["s"] = gb.limits.s;
    body["s_sum"] = gb.limits.s_sum;
    body["gap"] = jacobi::to_json(gb.estimate);

    // Cross-check against the two closed-form example patterns when they
    // apply. The endpoints are invariant under cyclic rotation of s, so a
    // single nonzero shift at any residue matches the one-weight formula.
    long long nonzero_at = -1;
    int nonzero_count = 0;
    for (std::size_t i = 0; i < gb.limits.s.size(); ++i) {
        if (std::fabs(gb.limits.s[i]) > 1e-9) {
            ++nonzero_count;
            nonzero_at = static_cast<long long>(i);
        }
    }
    if (nonzero_count == 1) {
        auto [lo, hi] = jacobi::gap_multiple_weights(gb.limits.period, gb.limits.k0,
                                                     gb.limits.s[static_cast<std::size_t>(nonzero_at)]);
        body["closed_form_multiple_weights"] = ojson::array({lo, hi});
    }
    if (gb.limits.period % 2 == 0 && std::fabs(gb.limits.q) <= 1e-12) {
        auto [lo, hi] = jacobi::gap_additive_even(gb.limits.s);
        body["closed_form_additive_even"] = ojson::array({lo, hi});
    }
    return body;
}

jacobi::SandwichOptions sweep_sandwich_options(const Run& run) {
    jacobi::SandwichOptions opts;
    opts.n_lo = std::max<long long>(1, run.n_max / 100);
    opts.n_hi = std::max<long long>(1000, run.n_max);
    opts.renorm_every = run.renorm_every;
    opts.growth_slope_tol = run.tols.growth_slope;
    return opts;
}

int cmd_analyze(const std::string& config_path, long long n_max_override, int jobs,
                const std::string& out_dir) {
    Run run = load_run(config_path, n_max_override);
    jacobi::JacobiCoefficients coeffs = run.coeffs();

    RegimeBundle rb = classify(run, coeffs);
    jacobi::RegularHypothesisReport reg_hyp =
        jacobi::hypothesis_report_regular(coeffs, run.N, run.n_max, run.tols.variation);
    jacobi::CarlemanOptions copts;
    copts.n_max = run.n_max;
    jacobi::CarlemanVerdict carleman = jacobi::classify_selfadjoint(coeffs, copts);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "regime.json",
               jacobi::dump_json(jacobi::with_provenance(run.config, regime_body(run, rb))));
    write_file(fs::path(out_dir) / "carleman.json",
               jacobi::dump_json(jacobi::with_provenance(run.config, jacobi::to_json(carleman))));

    ojson hyp_body;
    hyp_body["regular"] = jacobi::to_json(reg_hyp);

    std::optional<GapBundle> gb;
    if (rb.verdict.kind == jacobi::RegimeVerdict::Kind::Critical) {
        gb = compute_gap(run, coeffs, rb.verdict);
        hyp_body["critical"] = jacobi::to_json(gb->hyp);
        write_file(fs::path(out_dir) / "gap.json",
                   jacobi::dump_json(jacobi::with_provenance(run.config, gap_body(*gb))));
    }
    write_file(fs::path(out_dir) / "hypotheses.json",
               jacobi::dump_json(jacobi::with_provenance(run.config, hyp_body)));

    if (rb.verdict.kind == jacobi::RegimeVerdict::Kind::Degenerate) {
        std::cerr << "regime is degenerate (det " << jacobi::format_float(rb.verdict.det_value)
                  << " <= 0): asymptotic pipeline not applicable\n";
        return kExitDegenerate;
    }

    if (!run.lambdas.empty()) {
        std::vector<jacobi::Vec2> dirs = make_directions(run.alpha_count, run.seed);
        jacobi::SandwichOptions opts = sweep_sandwich_options(run);
        double fallback_discr = jacobi::discr(rb.limits.transfer);

        std::vector<std::string> rows(run.lambdas.size());
        std::atomic<std::size_t> next{0};
        std::mutex fail_mutex;
        std::exception_ptr failure;

        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= run.lambdas.size()) break;
                try {
                    double lambda = run.lambdas[i];
                    jacobi::SandwichEstimate sw =
                        jacobi::sandwich_verify(coeffs, lambda, dirs, opts);
                    double lo = std::numeric_limits<double>::infinity();
                    double hi = -lo;
                    for (const jacobi::SandwichRun& r : sw.runs) {
                        lo = std::min(lo, r.log_rho_min);
                        hi = std::max(hi, r.log_rho_max);
                    }
                    double discr_here = fallback_discr;
                    bool inside = false;
                    if (gb) {
                        discr_here = jacobi::discr_closed_form(gb->limits, lambda);
                        inside = lambda >= gb->estimate.lambda_minus &&
                                 lambda <= gb->estimate.lambda_plus;
                    }
                    std::string row = jacobi::format_float(lambda);
                    row += ',';
                    row += jacobi::format_float(discr_here);
                    row += ',';
                    row += inside ? '1' : '0';
                    row += ',';
                    row += jacobi::format_float(std::exp(lo));
                    row += ',';
                    row += jacobi::format_float(std::exp(hi));
                    row += '\n';
                    rows[i] = std::move(row);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(fail_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };

        int pool_size = std::max(1, std::min<int>(jobs, static_cast<int>(run.lambdas.size())));
        std::vector<std::thread> pool;
        for (int t = 1; t < pool_size; ++t) pool.emplace_back(worker);
        worker();
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);

        std::string csv = "lambda,discr,inside_gap,rho_min,rho_max\n";
        for (const std::string& row : rows) csv += row;
        write_file(fs::path(out_dir) / "sweep.csv", csv);
    }
    return kExitOk;
}

int cmd_trace(const std::string& config_path, double lambda, double alpha_theta,
              const std::string& out_dir) {
    Run run = load_run(config_path, 0);
    jacobi::JacobiCoefficients coeffs = run.coeffs();
    jacobi::Vec2 alpha{std::cos(alpha_theta), std::sin(alpha_theta)};

    RegimeBundle rb = classify(run, coeffs);
    if (rb.verdict.kind == jacobi::RegimeVerdict::Kind::Degenerate) {
        std::cerr << "regime is degenerate: trace asymptotics are not defined\n";
        return kExitDegenerate;
    }
    jacobi::TraceMode mode;
    if (rb.verdict.kind == jacobi::RegimeVerdict::Kind::Critical) {
        mode.kind = jacobi::TraceMode::Kind::Critical;
        mode.gamma = ((run.N + rb.verdict.k0) % 2 == 0) ? 1.0 : -1.0;
    }

    fs::create_directories(out_dir);
    jacobi::Trajectory traj =
        jacobi::iterate_eigenvector(coeffs, lambda, alpha, run.n_max, run.renorm_every);
    write_file(fs::path(out_dir) / "trajectory.csv", jacobi::trajectory_csv(traj));

    jacobi::PolyTrajectory polys = jacobi::orthonormal_polys(coeffs, lambda, run.n_max);
    write_file(fs::path(out_dir) / "polynomials.csv", jacobi::poly_csv(polys));

    ojson body;
    body["family"] = run.family->name();
    body["lambda"] = lambda;
    body["alpha_theta"] = alpha_theta;
    body["alpha"] = jacobi::vec2_json(alpha);
    body["regime"] = jacobi::to_json(rb.verdict);

    std::optional<jacobi::TuranTrace> turan;
    try {
        turan = jacobi::turan_trace(coeffs, run.N, lambda, alpha, run.n_max, mode,
                                    run.renorm_every);
    } catch (const jacobi::ZeroTrace& e) {
        // A vanishing determinant is a legitimate observation (decoupled
        // directions inside a gap do this); the trace files are skipped and
        // the summary records why.
        body["turan_error"] = e.what();
    }
    if (turan) {
        write_file(fs::path(out_dir) / "turan.csv", jacobi::turan_csv(*turan));
        body["turan"] = jacobi::to_json(*turan);
    }

    jacobi::ProfileResult profile = jacobi::asymptotic_limit_profile(
        coeffs, run.N, lambda, alpha, run.n_max, run.tols.profile_osc, false);
    write_file(fs::path(out_dir) / "profile.csv", jacobi::profile_csv(profile));
    body["profile"] = jacobi::to_json(profile);

    std::vector<jacobi::Vec2> dirs = make_directions(run.alpha_count, run.seed);
    dirs.insert(dirs.begin(), alpha);
    jacobi::SandwichEstimate sw =
        jacobi::sandwich_verify(coeffs, lambda, dirs, sweep_sandwich_options(run));
    body["sandwich"] = jacobi::to_json(sw);
    body["exponential_growth"] = sw.any_growth;
    body["nonsubordinacy_beta"] = jacobi::nonsubordinacy_ratio(coeffs, lambda, dirs, run.n_max);

    write_file(fs::path(out_dir) / "summary.json",
               jacobi::dump_json(jacobi::with_provenance(run.config, body)));
    return kExitOk;
}

int cmd_gap(const std::string& config_path, const std::string& out_file) {
    Run run = load_run(config_path, 0);
    jacobi::JacobiCoefficients coeffs = run.coeffs();

    RegimeBundle rb = classify(run, coeffs);
    if (rb.verdict.kind != jacobi::RegimeVerdict::Kind::Critical) {
        std::cerr << "gap endpoints are defined only in the critical regime; this family "
                     "classified as "
                  << jacobi::to_string(rb.verdict.kind) << "\n";
        return kExitDegenerate;
    }
    GapBundle gb = compute_gap(run, coeffs, rb.verdict);

    ojson body;
    body["family"] = run.family->name();
    body["regime"] = jacobi::to_json(rb.verdict);
    ojson details = gap_body(gb);
    for (auto& item : details.items()) body[item.key()] = std::move(item.value());

    fs::path out_path(out_file);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_file(out_path, jacobi::dump_json(jacobi::with_provenance(run.config, body)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic analysis of unbounded Jacobi matrices"};
    app.set_version_flag("--version", jacobi::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path;
    long long n_max_override = 0;
    int jobs = 1;
    double lambda = 0.0, alpha_theta = 0.0;

    CLI::App* analyze = app.add_subcommand("analyze", "Classify the regime and write reports");
    analyze->add_option("--config", config_path, "Config JSON file")->required();
    analyze->add_option("--n-max", n_max_override, "Override n_max from the config");
    analyze->add_option("--jobs", jobs, "Worker threads for the lambda sweep")
        ->check(CLI::Range(1, 256));
    analyze->add_option("--out", out_path, "Output directory")->required();

    CLI::App* trace = app.add_subcommand("trace", "Trace one (lambda, alpha) orbit");
    trace->add_option("--config", config_path, "Config JSON file")->required();
    trace->add_option("--lambda", lambda, "Spectral parameter")->required();
    trace->add_option("--alpha", alpha_theta, "Initial direction angle in radians")->required();
    trace->add_option("--out", out_path, "Output directory")->required();

    CLI::App* gap = app.add_subcommand("gap", "Compute spectral-gap endpoints");
    gap->add_option("--config", config_path, "Config JSON file")->required();
    gap->add_option("--out", out_path, "Output JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(config_path, n_max_override, jobs, out_path);
        if (trace->parsed()) return cmd_trace(config_path, lambda, alpha_theta, out_path);
        if (gap->parsed()) return cmd_gap(config_path, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
