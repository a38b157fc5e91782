#include "jacobi/regime.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jacobi/chebyshev.hpp"
#include "jacobi/compensated.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/variation.hpp"

namespace jacobi {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct TailStats {
    double mean = 0.0;
    double residual = 0.0;
};

// Mean and worst deviation over the last decade k in [k_max/10, k_max].
TailStats tail_stats(const std::function<double(long long)>& y, long long k_max) {
    long long lo = std::max<long long>(1, k_max / 10);
    CompensatedSum sum;
    long long count = 0;
    for (long long k = lo; k <= k_max; ++k, ++count) sum.add(y(k));
    TailStats st;
    st.mean = sum.value() / static_cast<double>(count);
    double worst = 0.0;
    for (long long k = lo; k <= k_max; ++k) worst = std::max(worst, std::fabs(y(k) - st.mean));
    st.residual = worst;
    return st;
}

}  // namespace

RegularLimits estimate_regular_limits(const JacobiCoefficients& coeffs, long long N,
                                      long long k_max) {
    if (N < 1) throw std::invalid_argument("estimate_regular_limits: N must be >= 1");
    if (k_max < 10) throw std::invalid_argument("estimate_regular_limits: k_max must be >= 10");

    RegularLimits lim;
    lim.period = N;
    lim.q.resize(N);
    lim.r.resize(N);
    lim.q_tail.resize(N);
    lim.r_tail.resize(N);
    lim.q_residual.resize(N);
    lim.r_residual.resize(N);

    for (long long j = 0; j < N; ++j) {
        auto qs = [&](long long k) { return coeffs.b(k * N + j) / coeffs.a(k * N + j); };
        auto rs = [&](long long k) { return coeffs.a(k * N + j - 1) / coeffs.a(k * N + j); };
        // Raw tail means converge like 1/k, too slowly for the criticality
        // tolerances below, so the stored limits are extrapolated; the raw
        // statistics stay available for judging how settled the tail is.
        lim.q[j] = richardson_limit(qs, k_max);
        lim.r[j] = richardson_limit(rs, k_max);
        TailStats qt = tail_stats(qs, k_max);
        TailStats rt = tail_stats(rs, k_max);
        lim.q_tail[j] = qt.mean;
        lim.r_tail[j] = rt.mean;
        lim.q_residual[j] = qt.residual;
        lim.r_residual[j] = rt.residual;
        if (!(lim.r[j] > 1e-12))
            throw NonPositiveRatioLimit("estimate_regular_limits: ratio limit at residue " +
                                            std::to_string(j) + " is not positive",
                                        lim.r[j]);
    }

    lim.transfer = ordered_product(
        [&](long long j) {
            return Mat2{0.0, 1.0, -lim.r[j], -lim.q[j]};
        },
        0, N - 1);
    lim.det_sym_e_transfer = det_sym_e(lim.transfer);
    return lim;
}

const char* to_string(RegimeVerdict::Kind kind) {
    switch (kind) {
        case RegimeVerdict::Kind::NonDegenerate: return "NonDegenerate";
        case RegimeVerdict::Kind::Critical: return "Critical";
        default: return "Degenerate";
    }
}

RegimeVerdict classify_regime(const RegularLimits& limits, double det_tol, double critical_tol) {
    RegimeVerdict verdict;
    verdict.det_value = limits.det_sym_e_transfer;

    long long N = limits.period;
    double q_mean = 0.0;
    for (double qj : limits.q) q_mean += qj;
    q_mean /= static_cast<double>(N);
    bool ratios_one = true, shifts_common = true;
    for (long long j = 0; j < N; ++j) {
        if (std::fabs(limits.r[j] - 1.0) > critical_tol) ratios_one = false;
        if (std::fabs(limits.q[j] - q_mean) > critical_tol) shifts_common = false;
    }
    if (ratios_one && shifts_common && N >= 2) {
        // Critical couplings are the roots of w_{N-1}: q = 2 cos(k0 pi / N).
        int best = 0;
        double best_err = 2.0;
        for (int k0 = 1; k0 < N; ++k0) {
            double qc = 2.0 * std::cos(static_cast<double>(k0) * kPi / static_cast<double>(N));
            double err = std::fabs(q_mean - qc);
            if (err < best_err) {
                best_err = err;
                best = k0;
            }
        }
        if (best > 0 && best_err <= critical_tol) {
            verdict.kind = RegimeVerdict::Kind::Critical;
            verdict.k0 = best;
            verdict.q = 2.0 * std::cos(static_cast<double>(best) * kPi / static_cast<double>(N));
            return verdict;
        }
    }

    verdict.kind = limits.det_sym_e_transfer > det_tol ? RegimeVerdict::Kind::NonDegenerate
                                                       : RegimeVerdict::Kind::Degenerate;
    return verdict;
}

std::optional<double> shortcut_trace_test(const Mat2& transfer, double tol) {
    if (std::fabs(transfer.det() - 1.0) > tol) return std::nullopt;
    double t = transfer.trace();
    return -0.25 * (t - 2.0) * (t + 2.0);
}

}  // namespace jacobi
