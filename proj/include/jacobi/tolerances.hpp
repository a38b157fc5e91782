#pragma once

namespace jacobi {

// Default numeric tolerances, collected here so CLI profiles and tests agree
// on one set of values.
namespace tol {

inline constexpr double kDet = 1e-9;            // nondegeneracy threshold on det(sym(E F))
inline constexpr double kCriticalMatch = 1e-8;  // matching r_j = 1, q_j = 2cos(k0 pi/N)
inline constexpr double kVariation = 1e-8;      // relative last-decade increment
inline constexpr double kGrowthSlope = 0.05;    // per-decade slope of log rho against ln n
inline constexpr double kProfileOsc = 0.05;     // per-residue tail oscillation
inline constexpr double kIgnjatovicRel = 1e-2;  // relative last-decade drift of the ratio
inline constexpr double kQuadDiscr = 1e-12;     // relative discriminant cutoff in the gap quadratic

}  // namespace tol

}  // namespace jacobi
