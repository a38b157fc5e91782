#pragma once

#include <vector>

#include "jacobi/coefficients.hpp"
#include "jacobi/eigensolve.hpp"
#include "jacobi/mat2.hpp"
#include "jacobi/tolerances.hpp"

namespace jacobi {

// Which normalization of the Turan determinant applies. In the regular
// regime S_n = a_{n+N-1}(u_n u_{n+N-1} - u_{n-1} u_{n+N}); at a critical
// coupling an extra a_{n+N-1} factor is needed for a finite limit, and the
// relative increments telescope along residue classes mod N instead of
// consecutively. gamma is carried for reporting; it cancels from S_n.
struct TraceMode {
    enum class Kind { Regular, Critical };
    Kind kind = Kind::Regular;
    double gamma = 1.0;
};

const char* to_string(TraceMode::Kind kind);

struct TuranSample {
    long long n = 0;
    double s_scaled = 0.0;    // true S_n = s_scaled * exp(2 log_scale)
    double log_scale = 0.0;
    double f_value = 0.0;     // relative increment F_n
    double telescope_residual = 0.0;  // |log prod(1+F) - log(S_n/S_base)|
};

struct TuranTrace {
    double lambda = 0.0;
    Vec2 alpha;
    TraceMode mode;
    long long period = 1;
    long long tail_start = 0;  // base index M of the telescoping products
    std::vector<TuranSample> samples;
    double limit_estimate = 0.0;         // tail mean of |S_n|
    std::vector<double> residue_limits;  // tail means per residue class of n
    int sign = 0;                        // sign of S_n on the tail, 0 when it flips
    bool sign_constant = false;
    double max_telescope_residual = 0.0;
    double beta_estimate = 0.0;  // non-subordinacy ratio; NaN unless filled by the caller
};

// Streams S_n and F_n = (S_{n+step} - S_n)/S_n (step 1 regular, N critical)
// up to n_max. Throws ZeroTrace if some S_n vanishes exactly, which breaks
// the relative increments. tail_start < 0 selects max(N+1, 8).
TuranTrace turan_trace(const JacobiCoefficients& coeffs, long long N, double lambda, Vec2 alpha,
                       long long n_max, TraceMode mode, long long renorm_every = 64,
                       long long tail_start = -1);

struct ProfileEntry {
    int residue = 0;
    double limit = 0.0;        // geometric tail mean of a_{(k+1)N+j-1}(u_{kN+j-1}^2 + u_{kN+j}^2)
    double oscillation = 0.0;  // max/min - 1 over the tail
    bool settled = false;
};

struct ProfileResult {
    long long period = 1;
    double lambda = 0.0;
    std::vector<ProfileEntry> entries;
};

// Per-residue tail behavior of the weighted pair norms. Throws NotSettled
// when some residue oscillates beyond osc_tol, unless throw_on_unsettled is
// cleared, in which case the entry is reported with settled = false.
ProfileResult asymptotic_limit_profile(const JacobiCoefficients& coeffs, long long N,
                                       double lambda, Vec2 alpha, long long n_max,
                                       double osc_tol = tol::kProfileOsc,
                                       bool throw_on_unsettled = true);

// max over direction pairs of sum_{k<=n_max} u_k(alpha)^2 / sum_{k<=n_max} u_k(alpha')^2.
// Finite and stable in n when no solution is subordinate.
double nonsubordinacy_ratio(const JacobiCoefficients& coeffs, double lambda,
                            const std::vector<Vec2>& alphas, long long n_max);

// Directions (cos(pi i / count), sin(pi i / count)) for i = 0..count-1.
std::vector<Vec2> half_circle_directions(int count);

struct IgnjatovicResult {
    double x = 0.0;
    std::vector<std::pair<long long, double>> ratios;  // checkpoints of the running ratio
    double limit = 0.0;
    bool converged = false;
};

// Running ratio sum_{k<=n} p_k(x)^2 / sum_{k<=n} 1/a_k; converged when the
// drift over the last decade is below rel_tol relatively.
IgnjatovicResult ignjatovic_ratio(const JacobiCoefficients& coeffs, double x, long long n_max,
                                  double rel_tol = tol::kIgnjatovicRel);

}  // namespace jacobi
