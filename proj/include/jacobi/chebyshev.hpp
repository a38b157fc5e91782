#pragma once

#include "jacobi/mat2.hpp"

namespace jacobi {

// Chebyshev polynomial of the second kind, U_n(x). Defined for n >= -1
// with U_{-1} = 0.
double cheb_u(long long n, double x);

// Rescaled variant w_n(x) = U_n(x/2), satisfying w_{n+1} = x w_n - w_{n-1}.
// Extended backwards through the same recurrence: w_{-1} = 0, w_{-2} = -1,
// and in general w_{-k} = -w_{k-2}. Any integer n is accepted.
double cheb_w(long long n, double x);

// d/dx w_n(x) for n >= 0 on the open interval (-2, 2), via
// ((n+2) w_{n-1} - n w_{n+1}) / (4 - x^2).
double cheb_w_derivative(long long n, double x);

struct ProductIdentityCheck {
    double lhs = 0.0;       // w_{i-1} w_{j-1} - w_i w_{j-2}
    double rhs = 0.0;       // w_{i-j}
    double residual = 0.0;  // lhs - rhs
};

// Evaluates both sides of w_{i-1}(x) w_{j-1}(x) - w_i(x) w_{j-2}(x) = w_{i-j}(x)
// for i, j >= 0.
ProductIdentityCheck cheb_product_identity(long long i, long long j, double x);

// n-th power of the one-step transfer matrix [[0,1],[-1,-q]] of the free
// q-shifted Jacobi matrix, in closed form:
//   (-1)^n [[-w_{n-2}(q), -w_{n-1}(q)], [w_{n-1}(q), w_n(q)]],  n >= 0.
Mat2 free_transfer_power(double q, long long n);

}  // namespace jacobi
