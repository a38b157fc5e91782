#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace jacobi {

// Rigorous power-law envelope for the off-diagonal sequence:
//   lower_coef * (n+1)^power <= a_n <= upper_coef * (n+1)^power
// for all n >= valid_from. Used to certify Carleman-type divergence or
// boundedness of the tail sum without iterating past the horizon.
struct PowerTail {
    double power = 0.0;
    double lower_coef = 0.0;
    double upper_coef = 0.0;
    long long valid_from = 0;
};

// Off-diagonal / diagonal entries of a Jacobi matrix, a_n > 0, b_n real.
// Evaluation is pure: repeated queries at the same index return identical
// bits, and generators hold no mutable state, so concurrent reads are safe.
class JacobiCoefficients {
  public:
    JacobiCoefficients(std::function<double(long long)> a,
                       std::function<double(long long)> b,
                       long long period_hint,
                       std::string family_tag,
                       std::optional<PowerTail> tail = std::nullopt);

    // Throws CoefficientError unless the value is finite and > 0.
    double a(long long n) const;
    // Throws CoefficientError unless the value is finite.
    double b(long long n) const;

    long long period_hint() const { return period_hint_; }
    const std::string& family_tag() const { return family_tag_; }
    const std::optional<PowerTail>& tail() const { return tail_; }

  private:
    std::function<double(long long)> a_;
    std::function<double(long long)> b_;
    long long period_hint_;
    std::string family_tag_;
    std::optional<PowerTail> tail_;
};

// Tail continuation rule for explicitly tabulated coefficients.
struct TailRule {
    enum class Mode { Periodic, Affine };
    Mode mode = Mode::Periodic;
    long long period = 1;  // Periodic: the last `period` table entries repeat
    double slope = 0.0;    // Affine: a_n = a_last + slope * (n - n_last), b_n = b_last
};

// Declarative description of a coefficient family; the JSON form below is
// what the command-line tools read.
//
//   {"family": "power",             "params": {"kappa": 0.7}}
//   {"family": "multiple_weights",  "params": {"N": 2, "q": 0.0, "base": {...}}}
//   {"family": "additive_periodic", "params": {"d": [1.0, 0.0], "q": 0.0, "base": {...}}}
//   {"family": "modulated",         "params": {"alpha": [...], "beta": [...], "base": {...}}}
//   {"family": "gen_hermite",       "params": {"t": 2.0}}
//   {"family": "meixner_pollaczek", "params": {"lambda": 1.0, "phi": 1.5707963267948966}}
//   {"family": "freud",             "params": {"beta": 0.5, "c": 1.0, "r": [...]}}
//   {"family": "tables",            "params": {"a": [...], "b": [...],
//                                              "tail": {"mode": "periodic", "period": 2}}}
//
// "base" defaults to {"family": "power", "params": {"kappa": 1.0}} where a
// base sequence is meaningful.
class FamilySpec {
  public:
    static FamilySpec power(double kappa);
    static FamilySpec multiple_weights(long long block, double q);
    static FamilySpec multiple_weights(long long block, double q, FamilySpec base);
    static FamilySpec additive_periodic(std::vector<double> d, double q);
    static FamilySpec additive_periodic(std::vector<double> d, double q, FamilySpec base);
    static FamilySpec modulated(std::vector<double> alpha, std::vector<double> beta,
                                FamilySpec base);
    static FamilySpec gen_hermite(double t);
    static FamilySpec meixner_pollaczek(double lambda, double phi);
    static FamilySpec freud(double beta, double c, std::vector<double> r = {});
    static FamilySpec tables(std::vector<double> a, std::vector<double> b, TailRule tail);

    static FamilySpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::string& name() const { return name_; }

  private:
    friend JacobiCoefficients make_coefficients(const FamilySpec&);
    FamilySpec() = default;

    std::string name_;
    double kappa_ = 0.0, q_ = 0.0, t_ = 0.0, lambda_ = 0.0, phi_ = 0.0;
    double beta_ = 0.0, c_ = 0.0;
    long long block_ = 0;
    std::vector<double> d_, alpha_, mod_beta_, r_, a_table_, b_table_;
    TailRule tail_rule_;
    std::shared_ptr<const FamilySpec> base_;
};

// Builds evaluators for the given family. Parameter violations throw
// std::invalid_argument.
JacobiCoefficients make_coefficients(const FamilySpec& spec);

// Compensated partial sum of 1/a_n for n = 0..n_max.
double carleman_partial(const JacobiCoefficients& coeffs, long long n_max);

struct CarlemanOptions {
    long long n_max = 1000000;
    double threshold = 1e3;
};

struct CarlemanVerdict {
    enum class Kind { Divergent, ConvergentBounded, Inconclusive };
    Kind kind = Kind::Inconclusive;
    double partial = 0.0;       // sum actually accumulated
    long long n_used = 0;       // last index included
    double bound = 0.0;         // ConvergentBounded: rigorous upper bound on the full sum
    std::string reason;
};

const char* to_string(CarlemanVerdict::Kind kind);

// Self-adjointness test for the Carleman sum: Divergent when the partial sum
// crosses the threshold or a power-tail envelope with exponent <= 1 certifies
// divergence; ConvergentBounded when an exponent > 1 lower envelope bounds the
// tail by an integral test; Inconclusive otherwise.
CarlemanVerdict classify_selfadjoint(const JacobiCoefficients& coeffs,
                                     const CarlemanOptions& opts = {});

}  // namespace jacobi
