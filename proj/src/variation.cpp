#include "jacobi/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jacobi/compensated.hpp"

namespace jacobi {

const char* to_string(VariationVerdict v) {
    switch (v) {
        case VariationVerdict::ApparentlyFinite: return "ApparentlyFinite";
        case VariationVerdict::ApparentlyDivergent: return "ApparentlyDivergent";
        default: return "Inconclusive";
    }
}

namespace {

std::vector<long long> checkpoints(long long n_max) {
    std::vector<long long> out;
    for (long long base = 1; base <= n_max; base *= 10) {
        for (long long mult : {1, 2, 5}) {
            long long v = base * mult;
            if (v <= n_max) out.push_back(v);
        }
    }
    out.push_back(n_max);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// One pass over n = 0..n_max accumulating diff(n) = ‖x_{n+N} − x_n‖.
template <typename DiffNorm>
VariationReport variation_impl(long long order, long long n_max, double tolerance,
                               DiffNorm&& diff) {
    if (order < 1) throw std::invalid_argument("n_variation_partial: order must be >= 1");
    if (n_max < order) throw std::invalid_argument("n_variation_partial: n_max must be >= order");

    VariationReport rep;
    rep.order = order;

    const std::vector<long long> marks = checkpoints(n_max);
    size_t next_mark = 0;
    const long long dec1 = n_max / 10;   // end of the second-to-last decade
    const long long dec2 = n_max / 100;  // one decade earlier
    double at_dec1 = 0.0, at_dec2 = 0.0;

    CompensatedSum sum;
    for (long long n = 0; n <= n_max; ++n) {
        sum.add(diff(n));
        double v = sum.value();
        if (n == dec2) at_dec2 = v;
        if (n == dec1) at_dec1 = v;
        while (next_mark < marks.size() && marks[next_mark] == n) {
            rep.partials.emplace_back(n, v);
            ++next_mark;
        }
    }
    rep.total = sum.value();
    rep.tail_slope = rep.total - at_dec1;
    double prev_inc = at_dec1 - at_dec2;
    rep.decade_ratio = prev_inc > 0.0 ? rep.tail_slope / prev_inc : 0.0;

    // Finite truncation cannot prove convergence; this grades the evidence.
    // A negligible last-decade increment, or decade increments decaying
    // geometrically, counts as apparently finite. Increments that hold
    // steady or grow (ratio near 1 or above) count as apparently divergent.
    if (rep.tail_slope <= tolerance * std::max(std::fabs(rep.total), 1.0)) {
        rep.verdict = VariationVerdict::ApparentlyFinite;
    } else if (n_max < 100 || prev_inc <= 0.0) {
        rep.verdict = VariationVerdict::Inconclusive;
    } else if (rep.decade_ratio <= 0.9) {
        rep.verdict = VariationVerdict::ApparentlyFinite;
    } else if (rep.decade_ratio >= 0.97) {
        rep.verdict = VariationVerdict::ApparentlyDivergent;
    } else {
        rep.verdict = VariationVerdict::Inconclusive;
    }
    return rep;
}

}  // namespace

double variation_sum(const std::function<double(long long)>& x, long long order,
                     long long begin, long long end) {
    CompensatedSum s;
    for (long long n = begin; n < end; ++n) s.add(std::fabs(x(n + order) - x(n)));
    return s.value();
}

double variation_sum(const std::function<Mat2(long long)>& x, long long order,
                     long long begin, long long end) {
    CompensatedSum s;
    for (long long n = begin; n < end; ++n) s.add(frobenius_norm(x(n + order) - x(n)));
    return s.value();
}

VariationReport n_variation_partial(const std::function<double(long long)>& x, long long order,
                                    long long n_max, double tolerance) {
    return variation_impl(order, n_max, tolerance,
                          [&](long long n) { return std::fabs(x(n + order) - x(n)); });
}

VariationReport n_variation_partial(const std::function<Mat2(long long)>& x, long long order,
                                    long long n_max, double tolerance) {
    return variation_impl(order, n_max, tolerance,
                          [&](long long n) { return frobenius_norm(x(n + order) - x(n)); });
}

double richardson_limit(const std::function<double(long long)>& y, long long k_max) {
    if (k_max < 1) throw std::invalid_argument("richardson_limit: k_max must be >= 1");
    if (k_max < 8) return y(k_max);
    // Weights cancel the 1/k, 1/k^2 and 1/k^3 terms of the tail expansion.
    double y0 = y(k_max);
    double y1 = y(k_max / 2);
    double y2 = y(k_max / 4);
    double y3 = y(k_max / 8);
    return (64.0 * y0 - 56.0 * y1 + 14.0 * y2 - y3) / 21.0;
}

RegularHypothesisReport hypothesis_report_regular(const JacobiCoefficients& coeffs, long long N,
                                                  long long n_max, double tolerance) {
    if (N < 1) throw std::invalid_argument("hypothesis_report_regular: N must be >= 1");
    RegularHypothesisReport rep;
    rep.period = N;
    auto inv_a = [&](long long n) { return 1.0 / coeffs.a(n); };
    auto b_over_a = [&](long long n) { return coeffs.b(n) / coeffs.a(n); };
    auto ratio = [&](long long n) { return coeffs.a(n + N) / coeffs.a(n); };
    rep.inv_a = n_variation_partial(std::function<double(long long)>(inv_a), N, n_max, tolerance);
    rep.b_over_a =
        n_variation_partial(std::function<double(long long)>(b_over_a), N, n_max, tolerance);
    rep.a_ratio = n_variation_partial(std::function<double(long long)>(ratio), 1, n_max, tolerance);
    rep.inv_a_tail = richardson_limit(inv_a, n_max);
    return rep;
}

CriticalHypothesisReport hypothesis_report_critical(const JacobiCoefficients& coeffs, long long N,
                                                    double q, long long n_max, double tolerance) {
    if (N < 1) throw std::invalid_argument("hypothesis_report_critical: N must be >= 1");
    if (!(std::fabs(q) < 2.0))
        throw std::invalid_argument("hypothesis_report_critical: q must lie in (-2, 2)");
    CriticalHypothesisReport rep;
    rep.period = N;
    rep.q = q;
    auto a_diff = [&](long long n) { return coeffs.a(n + 1) - coeffs.a(n); };
    auto inv_a = [&](long long n) { return 1.0 / coeffs.a(n); };
    auto b_shift = [&](long long n) { return coeffs.b(n) - q * coeffs.a(n); };
    rep.a_diff = n_variation_partial(std::function<double(long long)>(a_diff), N, n_max, tolerance);
    rep.inv_a = n_variation_partial(std::function<double(long long)>(inv_a), N, n_max, tolerance);
    rep.b_shift =
        n_variation_partial(std::function<double(long long)>(b_shift), N, n_max, tolerance);

    rep.s.resize(N);
    CompensatedSum ssum;
    for (long long j = 0; j < N; ++j) {
        long long k_max = std::max<long long>(1, (n_max - j) / N);
        rep.s[j] = richardson_limit(
            [&](long long k) { return coeffs.a(k * N + j) - coeffs.a(k * N + j - 1); }, k_max);
        ssum.add(rep.s[j]);
    }
    rep.s_sum = ssum.value();

    double worst = 0.0;
    for (long long j = 0; j < N; ++j) {
        long long k_max = std::max<long long>(1, (n_max - j) / N);
        double lim = richardson_limit(
            [&](long long k) { return coeffs.b(k * N + j) - q * coeffs.a(k * N + j); }, k_max);
        if (std::fabs(lim) > std::fabs(worst)) worst = lim;
    }
    rep.b_shift_tail = worst;
    return rep;
}

}  // namespace jacobi
