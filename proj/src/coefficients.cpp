#include "jacobi/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "jacobi/compensated.hpp"
#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num_str(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string vec_str(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += num_str(v[i]);
    }
    return s + "]";
}

}  // namespace

JacobiCoefficients::JacobiCoefficients(std::function<double(long long)> a,
                                       std::function<double(long long)> b,
                                       long long period_hint,
                                       std::string family_tag,
                                       std::optional<PowerTail> tail)
    : a_(std::move(a)),
      b_(std::move(b)),
      period_hint_(period_hint),
      family_tag_(std::move(family_tag)),
      tail_(tail) {
    if (!a_ || !b_) throw std::invalid_argument("JacobiCoefficients: empty generator");
    if (period_hint_ < 1) throw std::invalid_argument("JacobiCoefficients: period_hint must be >= 1");
}

double JacobiCoefficients::a(long long n) const {
    if (n < 0) throw std::invalid_argument("JacobiCoefficients::a: negative index");
    double v = a_(n);
    if (!std::isfinite(v) || !(v > 0.0))
        throw CoefficientError("off-diagonal entry not finite and positive at n=" +
                                   std::to_string(n) + " (value " + num_str(v) + ")",
                               n);
    return v;
}

double JacobiCoefficients::b(long long n) const {
    if (n < 0) throw std::invalid_argument("JacobiCoefficients::b: negative index");
    double v = b_(n);
    if (!std::isfinite(v))
        throw CoefficientError("diagonal entry not finite at n=" + std::to_string(n), n);
    return v;
}

FamilySpec FamilySpec::power(double kappa) {
    FamilySpec s;
    s.name_ = "power";
    s.kappa_ = kappa;
    return s;
}

FamilySpec FamilySpec::multiple_weights(long long block, double q) {
    return multiple_weights(block, q, power(1.0));
}

FamilySpec FamilySpec::multiple_weights(long long block, double q, FamilySpec base) {
    FamilySpec s;
    s.name_ = "multiple_weights";
    s.block_ = block;
    s.q_ = q;
    s.base_ = std::make_shared<const FamilySpec>(std::move(base));
    return s;
}

FamilySpec FamilySpec::additive_periodic(std::vector<double> d, double q) {
    return additive_periodic(std::move(d), q, power(1.0));
}

FamilySpec FamilySpec::additive_periodic(std::vector<double> d, double q, FamilySpec base) {
    FamilySpec s;
    s.name_ = "additive_periodic";
    s.d_ = std::move(d);
    s.q_ = q;
    s.base_ = std::make_shared<const FamilySpec>(std::move(base));
    return s;
}

FamilySpec FamilySpec::modulated(std::vector<double> alpha, std::vector<double> beta,
                                 FamilySpec base) {
    FamilySpec s;
    s.name_ = "modulated";
    s.alpha_ = std::move(alpha);
    s.mod_beta_ = std::move(beta);
    s.base_ = std::make_shared<const FamilySpec>(std::move(base));
    return s;
}

FamilySpec FamilySpec::gen_hermite(double t) {
    FamilySpec s;
    s.name_ = "gen_hermite";
    s.t_ = t;
    return s;
}

FamilySpec FamilySpec::meixner_pollaczek(double lambda, double phi) {
    FamilySpec s;
    s.name_ = "meixner_pollaczek";
    s.lambda_ = lambda;
    s.phi_ = phi;
    return s;
}

FamilySpec FamilySpec::freud(double beta, double c, std::vector<double> r) {
    FamilySpec s;
    s.name_ = "freud";
    s.beta_ = beta;
    s.c_ = c;
    s.r_ = std::move(r);
    return s;
}

FamilySpec FamilySpec::tables(std::vector<double> a, std::vector<double> b, TailRule tail) {
    FamilySpec s;
    s.name_ = "tables";
    s.a_table_ = std::move(a);
    s.b_table_ = std::move(b);
    s.tail_rule_ = tail;
    return s;
}

namespace {

double require_number(const nlohmann::json& params, const char* key) {
    if (!params.contains(key) || !params[key].is_number())
        throw std::invalid_argument(std::string("family params: missing numeric field \"") +
                                    key + "\"");
    return params[key].get<double>();
}

long long require_integer(const nlohmann::json& params, const char* key) {
    if (!params.contains(key) || !params[key].is_number_integer())
        throw std::invalid_argument(std::string("family params: missing integer field \"") +
                                    key + "\"");
    return params[key].get<long long>();
}

std::vector<double> require_array(const nlohmann::json& params, const char* key) {
    if (!params.contains(key) || !params[key].is_array())
        throw std::invalid_argument(std::string("family params: missing array field \"") + key +
                                    "\"");
    std::vector<double> out;
    for (const auto& e : params[key]) {
        if (!e.is_number())
            throw std::invalid_argument(std::string("family params: field \"") + key +
                                        "\" must contain numbers only");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<double> optional_array(const nlohmann::json& params, const char* key) {
    if (!params.contains(key)) return {};
    return require_array(params, key);
}

FamilySpec base_or_default(const nlohmann::json& params) {
    if (params.contains("base")) return FamilySpec::from_json(params["base"]);
    return FamilySpec::power(1.0);
}

}  // namespace

FamilySpec FamilySpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw std::invalid_argument("family spec: expected {\"family\": ..., \"params\": {...}}");
    std::string name = j["family"].get<std::string>();
    nlohmann::json params = j.value("params", nlohmann::json::object());
    if (!params.is_object()) throw std::invalid_argument("family spec: \"params\" must be an object");

    if (name == "power") return power(require_number(params, "kappa"));
    if (name == "multiple_weights")
        return multiple_weights(require_integer(params, "N"), require_number(params, "q"),
                                base_or_default(params));
    if (name == "additive_periodic")
        return additive_periodic(require_array(params, "d"), require_number(params, "q"),
                                 base_or_default(params));
    if (name == "modulated")
        return modulated(require_array(params, "alpha"), require_array(params, "beta"),
                         base_or_default(params));
    if (name == "gen_hermite") return gen_hermite(require_number(params, "t"));
    if (name == "meixner_pollaczek")
        return meixner_pollaczek(require_number(params, "lambda"), require_number(params, "phi"));
    if (name == "freud")
        return freud(require_number(params, "beta"), require_number(params, "c"),
                     optional_array(params, "r"));
    if (name == "tables") {
        TailRule rule;
        if (params.contains("tail")) {
            const auto& t = params["tail"];
            if (!t.is_object() || !t.contains("mode") || !t["mode"].is_string())
                throw std::invalid_argument("tables family: \"tail\" needs a \"mode\" string");
            std::string mode = t["mode"].get<std::string>();
            if (mode == "periodic") {
                rule.mode = TailRule::Mode::Periodic;
                rule.period = t.value("period", static_cast<long long>(1));
            } else if (mode == "affine") {
                rule.mode = TailRule::Mode::Affine;
                rule.slope = t.value("slope", 0.0);
            } else {
                throw std::invalid_argument("tables family: tail mode must be \"periodic\" or \"affine\"");
            }
        }
        return tables(require_array(params, "a"), optional_array(params, "b"), rule);
    }
    throw std::invalid_argument("unknown family \"" + name + "\"");
}

nlohmann::json FamilySpec::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    if (name_ == "power") {
        params["kappa"] = kappa_;
    } else if (name_ == "multiple_weights") {
        params["N"] = block_;
        params["q"] = q_;
        params["base"] = base_->to_json();
    } else if (name_ == "additive_periodic") {
        params["d"] = d_;
        params["q"] = q_;
        params["base"] = base_->to_json();
    } else if (name_ == "modulated") {
        params["alpha"] = alpha_;
        params["beta"] = mod_beta_;
        params["base"] = base_->to_json();
    } else if (name_ == "gen_hermite") {
        params["t"] = t_;
    } else if (name_ == "meixner_pollaczek") {
        params["lambda"] = lambda_;
        params["phi"] = phi_;
    } else if (name_ == "freud") {
        params["beta"] = beta_;
        params["c"] = c_;
        if (!r_.empty()) params["r"] = r_;
    } else if (name_ == "tables") {
        params["a"] = a_table_;
        if (!b_table_.empty()) params["b"] = b_table_;
        nlohmann::json tail;
        if (tail_rule_.mode == TailRule::Mode::Periodic) {
            tail["mode"] = "periodic";
            tail["period"] = tail_rule_.period;
        } else {
            tail["mode"] = "affine";
            tail["slope"] = tail_rule_.slope;
        }
        params["tail"] = tail;
    }
    return nlohmann::json{{"family", name_}, {"params", params}};
}

namespace {

// Shifts a power envelope through a_n = base(floor(n / block)).
std::optional<PowerTail> block_tail(const std::optional<PowerTail>& base, long long block) {
    if (!base || base->power <= 0.0) return std::nullopt;
    PowerTail t = *base;
    t.lower_coef = t.lower_coef / std::pow(static_cast<double>(block), t.power);
    t.valid_from = (t.valid_from + 1) * block;
    return t;
}

std::optional<PowerTail> additive_tail(const std::optional<PowerTail>& base, double max_abs_d) {
    if (!base || base->power <= 0.0 || base->lower_coef <= 0.0) return std::nullopt;
    PowerTail t = *base;
    // base lower bound halves once (n+1)^p outgrows 2*max|d|/lower_coef
    double cutoff = std::pow(2.0 * max_abs_d / t.lower_coef, 1.0 / t.power);
    t.valid_from = std::max<long long>(t.valid_from, static_cast<long long>(std::ceil(cutoff)));
    t.lower_coef *= 0.5;
    t.upper_coef += max_abs_d;
    return t;
}

}  // namespace

JacobiCoefficients make_coefficients(const FamilySpec& spec) {
    const std::string& name = spec.name_;

    if (name == "power") {
        double kappa = spec.kappa_;
        if (!(kappa > 0.0) || !(kappa <= 1.0))
            throw std::invalid_argument("power family: kappa must lie in (0, 1]");
        auto a = [kappa](long long n) { return std::pow(static_cast<double>(n + 1), kappa); };
        auto b = [](long long) { return 0.0; };
        PowerTail tail{kappa, 1.0, 1.0, 0};
        return JacobiCoefficients(a, b, 1, "power(" + num_str(kappa) + ")", tail);
    }

    if (name == "multiple_weights") {
        long long block = spec.block_;
        double q = spec.q_;
        if (block < 1) throw std::invalid_argument("multiple_weights family: N must be >= 1");
        auto base = std::make_shared<JacobiCoefficients>(make_coefficients(*spec.base_));
        auto a = [base, block](long long n) { return base->a(n / block); };
        auto b = [a, q](long long n) { return q * a(n); };
        return JacobiCoefficients(a, b, block,
                                  "multiple_weights(N=" + std::to_string(block) +
                                      ",q=" + num_str(q) + ",base=" + base->family_tag() + ")",
                                  block_tail(base->tail(), block));
    }

    if (name == "additive_periodic") {
        const auto d = spec.d_;
        double q = spec.q_;
        if (d.empty()) throw std::invalid_argument("additive_periodic family: d must be non-empty");
        auto base = std::make_shared<JacobiCoefficients>(make_coefficients(*spec.base_));
        long long period = static_cast<long long>(d.size());
        auto a = [base, d, period](long long n) { return base->a(n) + d[n % period]; };
        auto b = [a, q](long long n) { return q * a(n); };
        double max_abs = 0.0;
        for (double x : d) max_abs = std::max(max_abs, std::fabs(x));
        return JacobiCoefficients(a, b, period,
                                  "additive_periodic(d=" + vec_str(d) + ",q=" + num_str(q) +
                                      ",base=" + base->family_tag() + ")",
                                  additive_tail(base->tail(), max_abs));
    }

    if (name == "modulated") {
        const auto alpha = spec.alpha_;
        const auto beta = spec.mod_beta_;
        if (alpha.empty() || alpha.size() != beta.size())
            throw std::invalid_argument(
                "modulated family: alpha and beta must be non-empty and equally sized");
        for (double x : alpha)
            if (!(x > 0.0))
                throw std::invalid_argument("modulated family: alpha entries must be > 0");
        auto base = std::make_shared<JacobiCoefficients>(make_coefficients(*spec.base_));
        long long period = static_cast<long long>(alpha.size());
        auto a = [base, alpha, period](long long n) { return alpha[n % period] * base->a(n); };
        auto b = [base, beta, period](long long n) { return beta[n % period] * base->b(n); };
        std::optional<PowerTail> tail = base->tail();
        if (tail) {
            double mn = alpha[0], mx = alpha[0];
            for (double x : alpha) {
                mn = std::min(mn, x);
                mx = std::max(mx, x);
            }
            tail->lower_coef *= mn;
            tail->upper_coef *= mx;
        }
        return JacobiCoefficients(a, b, period,
                                  "modulated(alpha=" + vec_str(alpha) + ",beta=" + vec_str(beta) +
                                      ",base=" + base->family_tag() + ")",
                                  tail);
    }

    if (name == "gen_hermite") {
        double t = spec.t_;
        if (!(t > -1.0)) throw std::invalid_argument("gen_hermite family: t must be > -1");
        auto a = [t](long long n) {
            double shift = (n % 2 == 0) ? t : 0.0;
            return std::sqrt(0.5 * (static_cast<double>(n + 1) + shift));
        };
        auto b = [](long long) { return 0.0; };
        PowerTail tail;
        tail.power = 0.5;
        tail.upper_coef = std::sqrt(0.5 * (1.0 + std::max(0.0, t)));
        if (t >= 0.0) {
            tail.lower_coef = std::sqrt(0.5);
            tail.valid_from = 0;
        } else {
            tail.lower_coef = 0.5;
            tail.valid_from = static_cast<long long>(std::ceil(-2.0 * t));
        }
        return JacobiCoefficients(a, b, 2, "gen_hermite(t=" + num_str(t) + ")", tail);
    }

    if (name == "meixner_pollaczek") {
        double lambda = spec.lambda_;
        double phi = spec.phi_;
        if (!(lambda > 0.0))
            throw std::invalid_argument("meixner_pollaczek family: lambda must be > 0");
        if (!(phi > 0.0) || !(phi < kPi))
            throw std::invalid_argument("meixner_pollaczek family: phi must lie in (0, pi)");
        double s = std::sin(phi);
        double cot = std::cos(phi) / s;
        if (std::fabs(std::cos(phi)) < 1e-15) cot = 0.0;  // phi = pi/2 gives b identically zero
        auto a = [lambda, s](long long n) {
            double nd = static_cast<double>(n);
            return std::sqrt((nd + 1.0) * (nd + 2.0 * lambda)) / (2.0 * s);
        };
        auto b = [lambda, cot](long long n) { return (static_cast<double>(n) + lambda) * cot; };
        PowerTail tail;
        tail.power = 1.0;
        tail.lower_coef = std::min(1.0, std::sqrt(2.0 * lambda)) / (2.0 * s);
        tail.upper_coef = std::max(1.0, std::sqrt(2.0 * lambda)) / (2.0 * s);
        tail.valid_from = 0;
        return JacobiCoefficients(
            a, b, 1, "meixner_pollaczek(lambda=" + num_str(lambda) + ",phi=" + num_str(phi) + ")",
            tail);
    }

    if (name == "freud") {
        double beta = spec.beta_;
        double c = spec.c_;
        const auto r = spec.r_;
        if (!(beta > 0.0)) throw std::invalid_argument("freud family: beta must be > 0");
        if (!(c > 0.0)) throw std::invalid_argument("freud family: c must be > 0");
        double p = 1.0 / beta;
        auto a = [c, p, r](long long n) {
            double corr = (n >= 0 && n < static_cast<long long>(r.size())) ? r[n] : 0.0;
            return (c + corr) * std::pow(static_cast<double>(n + 1), p);
        };
        auto b = [](long long) { return 0.0; };
        PowerTail tail{p, c, c, static_cast<long long>(r.size())};
        return JacobiCoefficients(a, b, 1,
                                  "freud(beta=" + num_str(beta) + ",c=" + num_str(c) + ")", tail);
    }

    if (name == "tables") {
        auto at = spec.a_table_;
        auto bt = spec.b_table_;
        TailRule rule = spec.tail_rule_;
        if (at.empty()) throw std::invalid_argument("tables family: a table must be non-empty");
        bt.resize(at.size(), 0.0);
        long long size = static_cast<long long>(at.size());
        std::optional<PowerTail> tail;
        std::function<double(long long)> a, b;
        if (rule.mode == TailRule::Mode::Periodic) {
            long long period = rule.period;
            if (period < 1 || period > size)
                throw std::invalid_argument("tables family: periodic tail period must lie in [1, table size]");
            a = [at, size, period](long long n) {
                if (n < size) return at[n];
                return at[size - period + (n - size) % period];
            };
            b = [bt, size, period](long long n) {
                if (n < size) return bt[n];
                return bt[size - period + (n - size) % period];
            };
            double mn = at[size - period], mx = mn;
            for (long long i = size - period; i < size; ++i) {
                mn = std::min(mn, at[i]);
                mx = std::max(mx, at[i]);
            }
            if (mn > 0.0) tail = PowerTail{0.0, mn, mx, size};
            return JacobiCoefficients(a, b, period, "tables(periodic)", tail);
        }
        double slope = rule.slope;
        double a_last = at[size - 1];
        double b_last = bt[size - 1];
        a = [at, size, slope, a_last](long long n) {
            if (n < size) return at[n];
            return a_last + slope * static_cast<double>(n - (size - 1));
        };
        b = [bt, size, b_last](long long n) {
            if (n < size) return bt[n];
            return b_last;
        };
        if (slope > 0.0) {
            long long from = static_cast<long long>(
                std::ceil(2.0 * static_cast<double>(size - 1) + 1.0 - 2.0 * a_last / slope));
            tail = PowerTail{1.0, 0.5 * slope, a_last + slope, std::max(size, from)};
        } else if (slope == 0.0 && a_last > 0.0) {
            tail = PowerTail{0.0, a_last, a_last, size};
        }
        return JacobiCoefficients(a, b, 1, "tables(affine)", tail);
    }

    throw std::invalid_argument("make_coefficients: unknown family \"" + name + "\"");
}

double carleman_partial(const JacobiCoefficients& coeffs, long long n_max) {
    if (n_max < 0) throw std::invalid_argument("carleman_partial: n_max must be >= 0");
    CompensatedSum s;
    for (long long n = 0; n <= n_max; ++n) s.add(1.0 / coeffs.a(n));
    return s.value();
}

const char* to_string(CarlemanVerdict::Kind kind) {
    switch (kind) {
        case CarlemanVerdict::Kind::Divergent: return "Divergent";
        case CarlemanVerdict::Kind::ConvergentBounded: return "ConvergentBounded";
        case CarlemanVerdict::Kind::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

CarlemanVerdict classify_selfadjoint(const JacobiCoefficients& coeffs,
                                     const CarlemanOptions& opts) {
    CarlemanVerdict out;
    CompensatedSum s;
    long long n = 0;
    for (; n <= opts.n_max; ++n) {
        s.add(1.0 / coeffs.a(n));
        if (s.value() > opts.threshold) {
            out.kind = CarlemanVerdict::Kind::Divergent;
            out.partial = s.value();
            out.n_used = n;
            out.reason = "partial sum crossed the threshold";
            return out;
        }
    }
    out.partial = s.value();
    out.n_used = opts.n_max;

    const auto& tail = coeffs.tail();
    if (tail && tail->power <= 1.0 && tail->upper_coef > 0.0) {
        // 1/a_n >= 1/(hi (n+1)^p) with p <= 1 diverges by comparison
        out.kind = CarlemanVerdict::Kind::Divergent;
        out.reason = "power-tail envelope with exponent <= 1";
        return out;
    }
    if (tail && tail->power > 1.0 && tail->lower_coef > 0.0 && tail->valid_from <= 100000000) {
        long long m = std::max(opts.n_max, tail->valid_from);
        for (; n <= m; ++n) s.add(1.0 / coeffs.a(n));
        double p = tail->power;
        double tail_bound =
            std::pow(static_cast<double>(m + 1), 1.0 - p) / (tail->lower_coef * (p - 1.0));
        out.kind = CarlemanVerdict::Kind::ConvergentBounded;
        out.partial = s.value();
        out.n_used = m;
        out.bound = s.value() + tail_bound;
        out.reason = "power-tail envelope integral test";
        return out;
    }
    out.kind = CarlemanVerdict::Kind::Inconclusive;
    out.reason = "no threshold crossing and no certifying envelope";
    return out;
}

}  // namespace jacobi
