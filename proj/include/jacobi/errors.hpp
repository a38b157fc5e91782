#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

// A coefficient generator produced a value that breaks the Jacobi-matrix
// preconditions (a_n not finite or not strictly positive, b_n not finite).
struct CoefficientError : std::runtime_error {
    long long index;
    CoefficientError(const std::string& what, long long n)
        : std::runtime_error(what), index(n) {}
};

// Recurrence iterate left the representable range before the next
// renormalization point.
struct NumericOverflow : std::runtime_error {
    long long index;
    NumericOverflow(const std::string& what, long long n)
        : std::runtime_error(what), index(n) {}
};

// The initial direction is proportional to the orthonormal-polynomial one,
// so no two-step extension can realize it.
struct DegenerateDirection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A period-wise limit a_{kN+j-1}/a_{kN+j} came out nonpositive.
struct NonPositiveRatioLimit : std::runtime_error {
    NonPositiveRatioLimit(const std::string& what, double val)
        : std::runtime_error(what), value(val) {}
    double value;
};

// The gap quadratic has no real roots; surfaced instead of clamped so a
// caller can tell estimation noise from a genuinely broken instance.
struct NegativeQuadraticDiscriminant : std::runtime_error {
    NegativeQuadraticDiscriminant(const std::string& what, double d)
        : std::runtime_error(what), discriminant(d) {}
    double discriminant;
};

// A Turan determinant vanished on the tail, so relative increments stop
// being meaningful.
struct ZeroTrace : std::runtime_error {
    ZeroTrace(const std::string& what, long long n)
        : std::runtime_error(what), index(n) {}
    long long index;
};

// A per-residue asymptotic profile kept oscillating beyond the tolerance.
struct NotSettled : std::runtime_error {
    NotSettled(const std::string& what, int j, double osc)
        : std::runtime_error(what), residue(j), oscillation(osc) {}
    int residue;
    double oscillation;
};

// Gap endpoints were requested for a matrix whose regime is not critical.
struct NotCritical : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jacobi
