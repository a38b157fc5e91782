#include "jacobi/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jacobi/chebyshev.hpp"
#include "jacobi/eigensolve.hpp"
#include "jacobi/errors.hpp"

namespace jacobi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double CriticalLimits::v_at(long long j) const {
    if (j < -1) return -v_at(-j - 2);
    return v[j + 1];
}

CriticalLimits make_critical_limits(long long N, int k0, std::vector<double> s) {
    if (N < 2) throw std::invalid_argument("make_critical_limits: N must be >= 2");
    if (k0 < 1 || k0 >= N)
        throw std::invalid_argument("make_critical_limits: k0 must lie in 1..N-1");
    if (static_cast<long long>(s.size()) != N)
        throw std::invalid_argument("make_critical_limits: s must have N entries");

    CriticalLimits lim;
    lim.period = N;
    lim.k0 = k0;
    lim.q = 2.0 * std::cos(static_cast<double>(k0) * kPi / static_cast<double>(N));
    lim.gamma = ((N + k0) % 2 == 0) ? 1.0 : -1.0;
    lim.s = std::move(s);
    double sum = 0.0;
    for (double x : lim.s) sum += x;
    lim.s_sum = sum;
    lim.v.resize(N + 2);
    for (long long i = 0; i <= N + 1; ++i) lim.v[i] = cheb_w(i - 1, lim.q);
    return lim;
}

Mat2 c_sequence(const JacobiCoefficients& coeffs, long long N, double gamma, long long n,
                double lambda) {
    if (N < 1) throw std::invalid_argument("c_sequence: N must be >= 1");
    Mat2 x = step_product(coeffs, n, N, lambda);
    return coeffs.a(n + N - 1) * (x - gamma * Mat2::identity());
}

Mat2 c_tilde_sequence(const JacobiCoefficients& coeffs, long long N, double q, double gamma,
                      long long n, double lambda) {
    if (N < 1) throw std::invalid_argument("c_tilde_sequence: N must be >= 1");
    double an = coeffs.a(n);
    Mat2 bt{0.0, 1.0, -1.0, lambda / an - q};
    Mat2 p = Mat2::identity();
    for (long long i = 0; i < N; ++i) p = bt * p;
    return an * (p - gamma * Mat2::identity());
}

Mat2 limit_c_tilde(long long N, int k0, double lambda) {
    if (N < 2) throw std::invalid_argument("limit_c_tilde: N must be >= 2");
    if (k0 < 1 || k0 >= N) throw std::invalid_argument("limit_c_tilde: k0 must lie in 1..N-1");
    double q = 2.0 * std::cos(static_cast<double>(k0) * kPi / static_cast<double>(N));
    double sign = (N % 2 == 0) ? -1.0 : 1.0;
    double coef = sign * lambda * static_cast<double>(N) / (4.0 - q * q) * cheb_w(N, q);
    return coef * Mat2{q, 2.0, -2.0, -q};
}

std::vector<Mat2> limit_c_matrices(const CriticalLimits& limits, double lambda) {
    long long N = limits.period;
    Mat2 tilde = limit_c_tilde(N, limits.k0, lambda);
    std::vector<Mat2> out;
    out.reserve(N);
    for (long long j = 0; j < N; ++j) {
        Mat2 acc = tilde;
        for (long long i = 0; i < N; ++i) {
            Mat2 left = free_transfer_power(limits.q, N - 1 - i);
            Mat2 right = free_transfer_power(limits.q, i);
            Mat2 impulse{0.0, 0.0, limits.s[(i + j) % N], 0.0};
            acc = acc + left * impulse * right;
        }
        out.push_back(acc);
    }
    return out;
}

GapEstimate gap_quadratic(const CriticalLimits& limits) {
    long long N = limits.period;
    double q = limits.q;
    double S = limits.s_sum;
    double w = 4.0 - q * q;

    GapEstimate gap;
    gap.quad_a = static_cast<double>(N * N) / w;
    gap.quad_b = -static_cast<double>(N) * q * S / w;

    double single = 0.0;
    for (long long j = 1; j < N; ++j) {
        double vj = limits.v_at(j - 1);
        single += limits.s[j] * vj * vj;
    }
    double cross = 0.0;
    for (long long i = 1; i < N; ++i)
        for (long long j = 1; j < N; ++j)
            cross += limits.s[i] * limits.s[j] * limits.v_at(i - 1) * limits.v_at(j - 1) *
                     limits.v_at(i - j);
    gap.quad_c = S * single - cross - 0.25 * S * S;

    double disc = gap.quad_b * gap.quad_b - 4.0 * gap.quad_a * gap.quad_c;
    gap.discriminant = disc;
    double scale = std::max({gap.quad_b * gap.quad_b, std::fabs(4.0 * gap.quad_a * gap.quad_c),
                             1e-300});
    if (disc < -tol::kQuadDiscr * scale)
        throw NegativeQuadraticDiscriminant(
            "gap_quadratic: no real roots, discriminant " + std::to_string(disc), disc);
    if (std::fabs(disc) <= tol::kQuadDiscr * scale) {
        gap.degenerate_point = true;
        gap.lambda_minus = gap.lambda_plus = -gap.quad_b / (2.0 * gap.quad_a);
        return gap;
    }
    // Citardauq form: both roots stay accurate when b dominates.
    double root = std::sqrt(disc);
    double qq = -0.5 * (gap.quad_b + std::copysign(root, gap.quad_b));
    double r1 = qq / gap.quad_a;
    double r2 = gap.quad_c / qq;
    gap.lambda_minus = std::min(r1, r2);
    gap.lambda_plus = std::max(r1, r2);
    return gap;
}

double discr_closed_form(const CriticalLimits& limits, double lambda) {
    long long N = limits.period;
    double q = limits.q;
    double S = limits.s_sum;
    double w = 4.0 - q * q;

    double single = 0.0;
    for (long long j = 1; j < N; ++j) {
        double vj = limits.v_at(j - 1);
        single += limits.s[j] * vj * vj;
    }
    double cross = 0.0;
    for (long long i = 1; i < N; ++i)
        for (long long j = 1; j < N; ++j)
            cross += limits.s[i] * limits.s[j] * limits.v_at(i - 1) * limits.v_at(j - 1) *
                     limits.v_at(i - j);

    return -lambda * lambda * 4.0 * static_cast<double>(N * N) / w +
           lambda * 4.0 * static_cast<double>(N) * q * S / w - 4.0 * S * single + 4.0 * cross +
           S * S;
}

std::pair<double, double> gap_multiple_weights(long long N, int k0, double s) {
    if (N < 2) throw std::invalid_argument("gap_multiple_weights: N must be >= 2");
    if (k0 < 1 || k0 >= N) throw std::invalid_argument("gap_multiple_weights: k0 out of range");
    double q = 2.0 * std::cos(kPi * static_cast<double>(k0) / static_cast<double>(N));
    double lo = s * (q - 2.0) / (2.0 * static_cast<double>(N));
    double hi = s * (q + 2.0) / (2.0 * static_cast<double>(N));
    return std::minmax(lo, hi);
}

std::pair<double, double> gap_additive_even(const std::vector<double>& s) {
    if (s.size() < 2 || s.size() % 2 != 0)
        throw std::invalid_argument("gap_additive_even: shift vector length must be even");
    double even = 0.0, odd = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) (j % 2 == 0 ? even : odd) += s[j];
    double r = std::fabs(even - odd) / static_cast<double>(s.size());
    return {-r, r};
}

SandwichEstimate sandwich_verify(const JacobiCoefficients& coeffs, double lambda,
                                 const std::vector<Vec2>& alphas, const SandwichOptions& opts) {
    if (opts.n_hi < 1000)
        throw std::invalid_argument("sandwich_verify: window end must be >= 1000");
    if (opts.n_lo < 1 || opts.n_lo >= opts.n_hi)
        throw std::invalid_argument("sandwich_verify: window must satisfy 1 <= n_lo < n_hi");
    if (alphas.empty()) throw std::invalid_argument("sandwich_verify: no initial directions");

    SandwichEstimate est;
    est.lambda = lambda;

    // Decade edges n_hi/1000 < n_hi/100 < n_hi/10 < n_hi for the slope fits.
    const long long e0 = opts.n_hi / 1000, e1 = opts.n_hi / 100, e2 = opts.n_hi / 10;

    for (const Vec2& alpha : alphas) {
        EigenOrbit orbit(coeffs, lambda, alpha, opts.renorm_every);
        SandwichRun run;
        run.alpha = {orbit.u_prev(), orbit.u_cur()};
        double lmin = std::numeric_limits<double>::infinity();
        double lmax = -lmin;
        double sx[3] = {}, sy[3] = {}, sxx[3] = {}, sxy[3] = {};
        long long cnt[3] = {};

        while (orbit.position() < opts.n_hi) {
            orbit.advance();
            long long n = orbit.position();
            double up = orbit.u_prev(), uc = orbit.u_cur();
            double lrho = std::log(coeffs.a(n) * (up * up + uc * uc)) + 2.0 * orbit.log_scale();
            if (n >= opts.n_lo) {
                lmin = std::min(lmin, lrho);
                lmax = std::max(lmax, lrho);
            }
            int d = n >= e2 ? 2 : (n >= e1 ? 1 : (n >= e0 ? 0 : -1));
            if (d >= 0) {
                double x = std::log(static_cast<double>(n));
                sx[d] += x;
                sy[d] += lrho;
                sxx[d] += x * x;
                sxy[d] += x * lrho;
                ++cnt[d];
            }
        }

        run.log_rho_min = lmin;
        run.log_rho_max = lmax;
        run.ratio = std::exp(lmax - lmin);
        bool growth = true;
        for (int d = 0; d < 3; ++d) {
            double denom = cnt[d] * sxx[d] - sx[d] * sx[d];
            run.decade_slopes[d] =
                denom != 0.0 ? (cnt[d] * sxy[d] - sx[d] * sy[d]) / denom : 0.0;
            if (!(run.decade_slopes[d] > opts.growth_slope_tol)) growth = false;
        }
        run.growth = growth;
        est.any_growth = est.any_growth || growth;
        est.runs.push_back(run);
    }
    return est;
}

}  // namespace jacobi
