#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "jacobi/coefficients.hpp"
#include "jacobi/mat2.hpp"

namespace jacobi {

enum class VariationVerdict { ApparentlyFinite, ApparentlyDivergent, Inconclusive };

const char* to_string(VariationVerdict v);

// Partial sums of the N-variation sum_n |x_{n+N} - x_n| (Frobenius norm for
// matrix sequences) with compensated accumulation.
struct VariationReport {
    long long order = 1;  // the N in the N-variation
    std::vector<std::pair<long long, double>> partials;  // (n_max, partial sum) checkpoints
    double total = 0.0;
    double tail_slope = 0.0;    // increment contributed by the last decade [n_max/10, n_max]
    double decade_ratio = 0.0;  // last-decade increment / previous-decade increment
    VariationVerdict verdict = VariationVerdict::Inconclusive;
};

// Raw variation sum over n in [begin, end). Disjoint ranges can be evaluated
// concurrently and added; the report functions below use a single pass.
double variation_sum(const std::function<double(long long)>& x, long long order,
                     long long begin, long long end);
double variation_sum(const std::function<Mat2(long long)>& x, long long order,
                     long long begin, long long end);

// Sums |x_{n+N} - x_n| for n = 0..n_max and attaches a verdict. The verdict is
// a heuristic: ApparentlyFinite when the last-decade increment is negligible
// (tolerance relative to the total) or decade increments decay geometrically;
// ApparentlyDivergent when they fail to decay; Inconclusive in between.
VariationReport n_variation_partial(const std::function<double(long long)>& x, long long order,
                                    long long n_max, double tolerance = 1e-8);
VariationReport n_variation_partial(const std::function<Mat2(long long)>& x, long long order,
                                    long long n_max, double tolerance = 1e-8);

// The three variation sums whose finiteness the period-wise regular theory
// asks for, plus a tail estimate of 1/a_n.
struct RegularHypothesisReport {
    long long period = 1;
    VariationReport inv_a;      // N-variation of 1/a_n
    VariationReport b_over_a;   // N-variation of b_n/a_n
    VariationReport a_ratio;    // 1-variation of a_{n+N}/a_n... see note in the implementation
    double inv_a_tail = 0.0;    // extrapolated limit of 1/a_n, expected 0
};

RegularHypothesisReport hypothesis_report_regular(const JacobiCoefficients& coeffs, long long N,
                                                  long long n_max, double tolerance = 1e-8);

// Variation sums for the critical regime at shift parameter q, plus
// extrapolated limits s_j = lim_k (a_{kN+j} - a_{kN+j-1}).
struct CriticalHypothesisReport {
    long long period = 1;
    double q = 0.0;
    VariationReport a_diff;     // N-variation of a_{n+1} - a_n
    VariationReport inv_a;      // N-variation of 1/a_n
    VariationReport b_shift;    // N-variation of b_n - q a_n
    std::vector<double> s;      // per-residue limits of the first differences
    double s_sum = 0.0;
    double b_shift_tail = 0.0;  // largest per-residue limit estimate of b_n - q a_n
};

CriticalHypothesisReport hypothesis_report_critical(const JacobiCoefficients& coeffs, long long N,
                                                    double q, long long n_max,
                                                    double tolerance = 1e-8);

// Limit of y(k) as k -> infinity assuming an expansion in powers of 1/k:
// Richardson extrapolation on samples y(k_max), y(k_max/2), y(k_max/4),
// y(k_max/8), exact through the 1/k^3 term.
double richardson_limit(const std::function<double(long long)>& y, long long k_max);

}  // namespace jacobi
