#pragma once

#include <optional>
#include <vector>

#include "jacobi/coefficients.hpp"
#include "jacobi/mat2.hpp"

namespace jacobi {

// Period-wise limits of the normalized coefficients,
//   q_j = lim_k b_{kN+j}/a_{kN+j},   r_j = lim_k a_{kN+j-1}/a_{kN+j},
// together with the limiting transfer matrix over one period.
struct RegularLimits {
    long long period = 1;
    std::vector<double> q;           // extrapolated limits, one per residue
    std::vector<double> r;
    std::vector<double> q_tail;      // raw last-decade means, kept for diagnostics
    std::vector<double> r_tail;
    std::vector<double> q_residual;  // max deviation from the tail mean over the last decade
    std::vector<double> r_residual;
    Mat2 transfer;                   // product of [[0,1],[-r_j,-q_j]] over one period, descending
    double det_sym_e_transfer = 0.0;
};

// Estimates the limits from the subsequences at k = 1..k_max, extrapolating
// assumed 1/k tails. Throws NonPositiveRatioLimit when an r_j estimate is not
// strictly positive.
RegularLimits estimate_regular_limits(const JacobiCoefficients& coeffs, long long N,
                                      long long k_max);

struct RegimeVerdict {
    enum class Kind { NonDegenerate, Degenerate, Critical };
    Kind kind = Kind::Degenerate;
    double det_value = 0.0;  // det(sym(E * transfer))
    double q = 0.0;          // Critical only: the matched shift 2 cos(k0 pi / N)
    int k0 = 0;              // Critical only: in 1..N-1
};

const char* to_string(RegimeVerdict::Kind kind);

// Non-degenerate when det(sym(E F)) clears the tolerance. When instead every
// r_j is 1 and every q_j equals a common q with w_{N-1}(q) = 0, all within
// critical_tol, the matrix sits at a critical coupling and the verdict carries
// the matched (q, k0). Anything else is degenerate.
RegimeVerdict classify_regime(const RegularLimits& limits, double det_tol = 1e-9,
                              double critical_tol = 1e-8);

// When det(transfer) = 1 within tolerance, det(sym(E F)) reduces to
// -(tr F - 2)(tr F + 2)/4; returns that shortcut value, or nothing when the
// determinant is off 1.
std::optional<double> shortcut_trace_test(const Mat2& transfer, double tol = 1e-9);

}  // namespace jacobi
