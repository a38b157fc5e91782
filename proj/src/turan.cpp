#include "jacobi/turan.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jacobi/compensated.hpp"
#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sliding window over the orbit values: slot(i) holds the scaled u_i together
// with the log scale it was recorded under.
struct OrbitWindow {
    explicit OrbitWindow(long long span) : vals(span), logs(span), span_(span) {}
    void put(long long i, double v, double lg) {
        vals[i % span_] = v;
        logs[i % span_] = lg;
    }
    double val(long long i) const { return vals[i % span_]; }
    double log(long long i) const { return logs[i % span_]; }
    std::vector<double> vals, logs;
    long long span_;
};

}  // namespace

const char* to_string(TraceMode::Kind kind) {
    return kind == TraceMode::Kind::Critical ? "Critical" : "Regular";
}

TuranTrace turan_trace(const JacobiCoefficients& coeffs, long long N, double lambda, Vec2 alpha,
                       long long n_max, TraceMode mode, long long renorm_every,
                       long long tail_start) {
    if (N < 1) throw std::invalid_argument("turan_trace: N must be >= 1");
    const bool critical = mode.kind == TraceMode::Kind::Critical;
    const long long step = critical ? N : 1;
    const long long M = tail_start >= 0 ? tail_start : std::max<long long>(N + 1, 8);
    if (n_max < M + 2 * step)
        throw std::invalid_argument("turan_trace: n_max too small for the telescoping base");

    TuranTrace trace;
    trace.lambda = lambda;
    trace.mode = mode;
    trace.period = N;
    trace.tail_start = M;
    trace.beta_estimate = kNaN;

    EigenOrbit orbit(coeffs, lambda, alpha, renorm_every);
    trace.alpha = {orbit.u_prev(), orbit.u_cur()};

    OrbitWindow window(N + 2);
    window.put(0, orbit.u_prev(), orbit.log_scale());
    window.put(1, orbit.u_cur(), orbit.log_scale());

    // Per-index data for S_n kept until F_n is known, plus telescoping state
    // per residue class of n - M (single class when step = 1).
    OrbitWindow s_ring(step + 1);
    std::vector<double> residual_ring(step + 1, 0.0);
    std::vector<double> log_prod(step, 0.0);
    std::vector<double> sign_prod(step, 1.0);
    std::vector<double> base_log(step, 0.0);
    std::vector<double> base_sign(step, 1.0);

    const long long tail_lo = std::max(M, n_max / 10);
    std::vector<CompensatedSum> residue_sum(N);
    std::vector<long long> residue_cnt(N, 0);
    CompensatedSum abs_sum;
    long long abs_cnt = 0;
    int tail_sign = 0;
    bool sign_ok = true;

    auto scheduled = [&](long long n) {
        return n <= 1000 || n % renorm_every == 0 || n == n_max;
    };

    while (orbit.position() < n_max + N) {
        orbit.advance();
        long long m = orbit.position();
        window.put(m, orbit.u_cur(), orbit.log_scale());
        if (m < N + 1) continue;

        const long long n = m - N;  // S_n is now determined
        const double lref = orbit.log_scale();
        auto t = [&](long long i) { return window.val(i) * std::exp(window.log(i) - lref); };
        double an = coeffs.a(n + N - 1);
        double weight = critical ? an * an : an;
        double s_scaled = weight * (t(n) * t(n + N - 1) - t(n - 1) * t(n + N));
        if (s_scaled == 0.0)
            throw ZeroTrace("turan_trace: Turan determinant vanished at n=" + std::to_string(n),
                            n);
        double s_log = std::log(std::fabs(s_scaled)) + 2.0 * lref;
        double s_sign = s_scaled > 0.0 ? 1.0 : -1.0;

        double f_prev = kNaN;     // F_{n-step}, known now
        double residual = 0.0;
        long long cls = step > 1 ? (n - M) % step : 0;
        if (cls < 0) cls += step;
        if (n == M + cls) {
            base_log[cls] = s_log;
            base_sign[cls] = s_sign;
        }
        if (n - step >= 1) {
            double prev_sign = s_ring.val(n - step) > 0.0 ? 1.0 : -1.0;
            double ratio = (s_sign * prev_sign) * std::exp(s_log - s_ring.log(n - step));
            f_prev = ratio - 1.0;
            if (n - step >= M) {
                log_prod[cls] += std::log(std::fabs(ratio));
                sign_prod[cls] *= (ratio > 0.0 ? 1.0 : -1.0);
                residual = std::fabs(log_prod[cls] - (s_log - base_log[cls]));
                if (sign_prod[cls] * base_sign[cls] != s_sign) residual = std::max(residual, 1.0);
            }
        }

        s_ring.put(n, s_scaled, s_log);
        residual_ring[n % (step + 1)] = residual;
        trace.max_telescope_residual = std::max(trace.max_telescope_residual, residual);

        if (n >= tail_lo) {
            double s_true = s_sign * std::exp(s_log);
            residue_sum[n % N].add(s_true);
            ++residue_cnt[n % N];
            abs_sum.add(std::exp(s_log));
            ++abs_cnt;
            int sgn = s_sign > 0.0 ? 1 : -1;
            if (tail_sign == 0) tail_sign = sgn;
            else if (tail_sign != sgn) sign_ok = false;
        }

        // Samples lag by `step` so each carries its own increment F_n.
        long long pending = n - step;
        if (pending >= 1 && scheduled(pending)) {
            trace.samples.push_back({pending, s_ring.val(pending),
                                     0.5 * (s_ring.log(pending) -
                                            std::log(std::fabs(s_ring.val(pending)))),
                                     f_prev, residual_ring[pending % (step + 1)]});
        }
        if (n == n_max) {
            trace.samples.push_back({n, s_scaled, lref, kNaN, residual});
        }
    }

    trace.residue_limits.resize(N);
    for (long long j = 0; j < N; ++j)
        trace.residue_limits[j] =
            residue_cnt[j] > 0 ? residue_sum[j].value() / static_cast<double>(residue_cnt[j])
                               : kNaN;
    trace.limit_estimate = abs_cnt > 0 ? abs_sum.value() / static_cast<double>(abs_cnt) : kNaN;
    trace.sign_constant = sign_ok && tail_sign != 0;
    trace.sign = trace.sign_constant ? tail_sign : 0;
    return trace;
}

ProfileResult asymptotic_limit_profile(const JacobiCoefficients& coeffs, long long N,
                                       double lambda, Vec2 alpha, long long n_max, double osc_tol,
                                       bool throw_on_unsettled) {
    if (N < 1) throw std::invalid_argument("asymptotic_limit_profile: N must be >= 1");
    if (n_max < 10 * N)
        throw std::invalid_argument("asymptotic_limit_profile: n_max must cover several periods");

    EigenOrbit orbit(coeffs, lambda, alpha, 64);
    const long long lo = std::max<long long>(1, n_max / 10);
    std::vector<double> lmin(N, std::numeric_limits<double>::infinity());
    std::vector<double> lmax(N, -std::numeric_limits<double>::infinity());
    std::vector<CompensatedSum> lsum(N);
    std::vector<long long> cnt(N, 0);

    auto consider = [&](long long m) {
        if (m < lo) return;
        double up = orbit.u_prev(), uc = orbit.u_cur();
        double ly = std::log(coeffs.a(m + N - 1) * (up * up + uc * uc)) + 2.0 * orbit.log_scale();
        long long j = m % N;
        lmin[j] = std::min(lmin[j], ly);
        lmax[j] = std::max(lmax[j], ly);
        lsum[j].add(ly);
        ++cnt[j];
    };
    consider(orbit.position());
    while (orbit.position() < n_max) {
        orbit.advance();
        consider(orbit.position());
    }

    ProfileResult result;
    result.period = N;
    result.lambda = lambda;
    for (long long j = 0; j < N; ++j) {
        ProfileEntry e;
        e.residue = static_cast<int>(j);
        if (cnt[j] == 0) {
            e.limit = kNaN;
            e.oscillation = kNaN;
            result.entries.push_back(e);
            continue;
        }
        e.limit = std::exp(lsum[j].value() / static_cast<double>(cnt[j]));
        e.oscillation = std::expm1(lmax[j] - lmin[j]);
        e.settled = e.oscillation <= osc_tol;
        if (!e.settled && throw_on_unsettled)
            throw NotSettled("asymptotic_limit_profile: residue " + std::to_string(j) +
                                 " oscillates beyond tolerance",
                             static_cast<int>(j), e.oscillation);
        result.entries.push_back(e);
    }
    return result;
}

double nonsubordinacy_ratio(const JacobiCoefficients& coeffs, double lambda,
                            const std::vector<Vec2>& alphas, long long n_max) {
    if (alphas.size() < 2)
        throw std::invalid_argument("nonsubordinacy_ratio: need at least two directions");
    double lmin = std::numeric_limits<double>::infinity();
    double lmax = -lmin;
    for (const Vec2& alpha : alphas) {
        EigenOrbit orbit(coeffs, lambda, alpha, 64);
        ScaledSquareSum sq;
        sq.add(orbit.u_prev(), orbit.log_scale());
        sq.add(orbit.u_cur(), orbit.log_scale());
        while (orbit.position() < n_max) {
            orbit.advance();
            sq.add(orbit.u_cur(), orbit.log_scale());
        }
        double lg = sq.log_value();
        lmin = std::min(lmin, lg);
        lmax = std::max(lmax, lg);
    }
    return std::exp(lmax - lmin);
}

std::vector<Vec2> half_circle_directions(int count) {
    if (count < 1) throw std::invalid_argument("half_circle_directions: count must be >= 1");
    std::vector<Vec2> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double th = kPi * static_cast<double>(i) / static_cast<double>(count);
        out.push_back({std::cos(th), std::sin(th)});
    }
    return out;
}

IgnjatovicResult ignjatovic_ratio(const JacobiCoefficients& coeffs, double x, long long n_max,
                                  double rel_tol) {
    if (n_max < 10) throw std::invalid_argument("ignjatovic_ratio: n_max must be >= 10");
    Vec2 seed{1.0, (x - coeffs.b(0)) / coeffs.a(0)};
    EigenOrbit orbit(coeffs, x, seed, 64);
    const double log_input = std::log(orbit.input_norm());

    IgnjatovicResult result;
    result.x = x;
    ScaledSquareSum num;
    CompensatedSum den;
    num.add(orbit.u_prev(), orbit.log_scale() + log_input);
    num.add(orbit.u_cur(), orbit.log_scale() + log_input);
    den.add(1.0 / coeffs.a(0));
    den.add(1.0 / coeffs.a(1));

    auto ratio_now = [&]() { return std::exp(num.log_value() - std::log(den.value())); };
    double at_decade = kNaN;
    const long long decade_mark = n_max / 10;

    long long next_cp = 2;
    auto bump = [](long long v) {
        // 1, 2, 5, 10, 20, 50, ...
        long long lead = v;
        long long scale = 1;
        while (lead >= 10) {
            lead /= 10;
            scale *= 10;
        }
        if (lead == 1) return 2 * scale;
        if (lead == 2) return 5 * scale;
        return 10 * scale;
    };
    while (orbit.position() < n_max) {
        orbit.advance();
        long long m = orbit.position();
        num.add(orbit.u_cur(), orbit.log_scale() + log_input);
        den.add(1.0 / coeffs.a(m));
        if (m == decade_mark) at_decade = ratio_now();
        if (m == next_cp || m == n_max) {
            result.ratios.emplace_back(m, ratio_now());
            while (next_cp <= m) next_cp = bump(next_cp);
        }
    }
    result.limit = ratio_now();
    result.converged =
        std::isfinite(at_decade) && std::fabs(result.limit - at_decade) <=
                                        rel_tol * std::max(std::fabs(result.limit), 1e-300);
    return result;
}

}  // namespace jacobi
