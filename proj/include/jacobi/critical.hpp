#pragma once

#include <array>
#include <utility>
#include <vector>

#include "jacobi/coefficients.hpp"
#include "jacobi/mat2.hpp"
#include "jacobi/tolerances.hpp"

namespace jacobi {

// Limit data of a critical coupling: shift q = 2 cos(k0 pi / N), the sign
// gamma = (-1)^{N + k0} with B^N = gamma Id for the free transfer matrix B,
// per-residue slopes s_j of the off-diagonal entries, and the Chebyshev
// values v_j = w_j(q) the closed forms are written in.
struct CriticalLimits {
    long long period = 2;
    int k0 = 1;
    double q = 0.0;
    double gamma = 1.0;
    std::vector<double> s;  // size N
    double s_sum = 0.0;
    std::vector<double> v;  // v[i] = w_{i-1}(q) for i = 0..N+1

    // w_j(q) for any j >= -(N+1), negative indices through w_{-k} = -w_{k-2}.
    double v_at(long long j) const;
};

CriticalLimits make_critical_limits(long long N, int k0, std::vector<double> s);

// C_n = a_{n+N-1}(X_n - gamma Id), the centered transfer product.
Mat2 c_sequence(const JacobiCoefficients& coeffs, long long N, double gamma, long long n,
                double lambda);

// The comparison sequence with frozen coefficients: a_n((B~_n)^N - gamma Id)
// where B~_n = [[0,1],[-1, lambda/a_n - q]].
Mat2 c_tilde_sequence(const JacobiCoefficients& coeffs, long long N, double q, double gamma,
                      long long n, double lambda);

// Limit of the comparison sequence in closed form:
// (-1)^{N-1} (lambda N/(4-q^2)) w_N(q) [[q,2],[-2,-q]].
Mat2 limit_c_tilde(long long N, int k0, double lambda);

// Per-residue limits of C_n: sum_i B^{N-1-i} [[0,0],[s_{(i+j) mod N},0]] B^i
// plus the comparison limit. Consecutive entries are conjugate under B.
std::vector<Mat2> limit_c_matrices(const CriticalLimits& limits, double lambda);

// Quadratic a l^2 + b l + c whose roots are the spectral-gap endpoints.
struct GapEstimate {
    double quad_a = 0.0;
    double quad_b = 0.0;
    double quad_c = 0.0;
    double discriminant = 0.0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    bool degenerate_point = false;  // double root: the gap closes to one point
};

// Closed-form gap endpoints. Throws NegativeQuadraticDiscriminant when the
// quadratic has no real roots.
GapEstimate gap_quadratic(const CriticalLimits& limits);

// discr(C_0) at the given lambda, written out directly from the limit data;
// equals -4 times the gap quadratic.
double discr_closed_form(const CriticalLimits& limits, double lambda);

// Known-pattern endpoint formulas, returned as (lambda_minus, lambda_plus).
// Single nonzero shift s at residue 0: endpoints s(q -+ 2)/(2N), sorted.
std::pair<double, double> gap_multiple_weights(long long N, int k0, double s);
// N even and q = 0: endpoints -+|a - b|/N where a and b are the sums of the
// shifts at even and odd residues.
std::pair<double, double> gap_additive_even(const std::vector<double>& s);

struct SandwichOptions {
    long long n_lo = 10000;
    long long n_hi = 1000000;
    long long renorm_every = 64;
    double growth_slope_tol = tol::kGrowthSlope;
};

struct SandwichRun {
    Vec2 alpha;              // normalized
    double log_rho_min = 0.0;
    double log_rho_max = 0.0;
    double ratio = 1.0;      // exp(log_rho_max - log_rho_min)
    std::array<double, 3> decade_slopes{};  // log rho against ln n, last three decades
    bool growth = false;
};

struct SandwichEstimate {
    double lambda = 0.0;
    std::vector<SandwichRun> runs;
    bool any_growth = false;
};

// Tracks rho_n = a_n (u_{n-1}^2 + u_n^2) / (u_0^2 + u_1^2) over [n_lo, n_hi]
// for each initial direction. In a spectral gap rho runs away; the growth
// flag fires when the regression slope of log rho against ln n stays above
// the tolerance on each of the last three decades. A heuristic: near the gap
// edges growth is too slow for any finite window to decide.
SandwichEstimate sandwich_verify(const JacobiCoefficients& coeffs, double lambda,
                                 const std::vector<Vec2>& alphas,
                                 const SandwichOptions& opts = {});

}  // namespace jacobi
