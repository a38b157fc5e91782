#pragma once

#include <vector>

#include "jacobi/coefficients.hpp"
#include "jacobi/mat2.hpp"

namespace jacobi {

// One-step transfer matrix B_n = [[0, 1], [-a_{n-1}/a_n, (lambda - b_n)/a_n]]
// mapping (u_{n-1}, u_n) to (u_n, u_{n+1}); defined for n >= 1.
Mat2 transfer_matrix(const JacobiCoefficients& coeffs, long long n, double lambda);

// N-step product X_n = B_{n+N-1} ... B_n, mapping (u_{n-1}, u_n) to
// (u_{n+N-1}, u_{n+N}); identity for N = 0.
Mat2 step_product(const JacobiCoefficients& coeffs, long long n, long long N, double lambda);

// Streaming three-term recurrence a_{n-1}u_{n-1} + b_n u_n + a_n u_{n+1} = lambda u_n
// with periodic renormalization of the current pair. The true solution is
// (u_prev, u_cur) * exp(log_scale) * input_norm.
class EigenOrbit {
  public:
    EigenOrbit(const JacobiCoefficients& coeffs, double lambda, Vec2 alpha,
               long long renorm_every = 64);

    void advance();

    // Pair held is (u_{n-1}, u_n) at position n; starts at n = 1.
    long long position() const { return n_; }
    double u_prev() const { return u_prev_; }
    double u_cur() const { return u_cur_; }
    double log_scale() const { return log_scale_; }
    double input_norm() const { return input_norm_; }
    long long renorm_every() const { return renorm_every_; }

  private:
    void renormalize();

    const JacobiCoefficients* coeffs_;
    double lambda_;
    long long renorm_every_;
    long long n_ = 1;
    double u_prev_, u_cur_;
    double log_scale_ = 0.0;
    double input_norm_ = 1.0;
    double a_prev_;  // a_{n-1}, carried across steps
};

// Accumulates sums of squares of log-scaled terms, sum of (m * e^L)^2, kept in
// the form sig * e^{2 ref} so it never overflows.
struct ScaledSquareSum {
    double sig = 0.0;
    double ref = 0.0;

    void add(double mantissa, double log_scale);
    double log_value() const;  // log of the accumulated sum; -inf when empty
    double value() const;      // may round to inf for genuinely huge sums
};

struct TrajectorySample {
    long long n = 0;
    double u_prev = 0.0;  // scaled; true value = u_prev * exp(log_scale)
    double u_cur = 0.0;
    double log_scale = 0.0;
};

struct Trajectory {
    double lambda = 0.0;
    Vec2 alpha;               // normalized initial direction (u_0, u_1)
    double input_norm = 1.0;  // norm of the direction as supplied
    long long renorm_every = 64;
    std::vector<TrajectorySample> samples;
};

// Runs the recurrence from the direction alpha up to n_max, sampling densely
// for n <= 1000 and at renormalization boundaries afterwards.
Trajectory iterate_eigenvector(const JacobiCoefficients& coeffs, double lambda, Vec2 alpha,
                               long long n_max, long long renorm_every = 64);

struct PolySample {
    long long n = 0;
    double p = 0.0;           // scaled; true value = p * exp(log_scale)
    double log_scale = 0.0;
    double sum_sq_log = 0.0;  // log of sum_{k<=n} p_k(x)^2
};

struct PolyTrajectory {
    double x = 0.0;
    std::vector<PolySample> samples;
};

// Orthonormal-polynomial values p_n(x): p_0 = 1, p_1 = (x - b_0)/a_0, then the
// eigenvector recurrence (the a_{-1} = 0 convention is folded into the seed).
PolyTrajectory orthonormal_polys(const JacobiCoefficients& coeffs, double x, long long n_max);

// Two-step extension: coefficients of a larger Jacobi matrix whose
// orthonormal polynomials reproduce a prescribed formal eigenvector,
// p~_{n+2}(lambda) = u_n.
struct ExtensionResult {
    double beta = 0.0;   // (lambda - b_0) u_0 - a_0 u_1, must be nonzero
    double gamma = 0.0;  // auxiliary scale, same sign as beta
    double a0 = 0.0, a1 = 0.0;  // prepended off-diagonal entries
    double b0 = 0.0, b1 = 0.0;  // prepended diagonal entries (both lambda - gamma)
    int shift = 2;
};

// Throws DegenerateDirection when (u_0, u_1) is proportional to the
// orthonormal-polynomial initial data, i.e. beta vanishes.
ExtensionResult extend_to_polynomials(const JacobiCoefficients& coeffs, double lambda, Vec2 u01);

// The extended matrix itself: entries (a0, a1, a_0, a_1, ...), (b0, b1, b_0, ...).
JacobiCoefficients extended_coefficients(const JacobiCoefficients& coeffs,
                                         const ExtensionResult& ext);

}  // namespace jacobi
