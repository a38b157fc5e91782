#include "jacobi/chebyshev.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jacobi {

namespace {

// Forward recurrence for w_n, n >= -1. Returns the last three values so a
// caller needing a consecutive triple pays for one pass only.
struct WTriple {
    double prev2 = 0.0;  // w_{n-2}
    double prev = 0.0;   // w_{n-1}
    double cur = 0.0;    // w_n
};

WTriple w_forward(long long n, double x) {
    // Seeds w_{-2} = -1, w_{-1} = 0, w_0 = 1.
    WTriple t{-1.0, 0.0, 1.0};
    if (n == -1) return {0.0, -1.0, 0.0};
    for (long long k = 1; k <= n; ++k) {
        double next = x * t.cur - t.prev;
        t.prev2 = t.prev;
        t.prev = t.cur;
        t.cur = next;
    }
    return t;
}

}  // namespace

double cheb_w(long long n, double x) {
    if (n < -1) return -cheb_w(-n - 2, x);
    return w_forward(n, x).cur;
}

double cheb_u(long long n, double x) {
    if (n < -1)
        throw std::invalid_argument("cheb_u: index must be >= -1, got " + std::to_string(n));
    return cheb_w(n, 2.0 * x);
}

double cheb_w_derivative(long long n, double x) {
    if (n < 0)
        throw std::invalid_argument("cheb_w_derivative: index must be >= 0, got " +
                                    std::to_string(n));
    if (!(std::fabs(x) < 2.0))
        throw std::domain_error("cheb_w_derivative: argument must lie in (-2, 2), got " +
                                std::to_string(x));
    WTriple t = w_forward(n + 1, x);
    // t.cur = w_{n+1}, t.prev2 = w_{n-1}
    double num = static_cast<double>(n + 2) * t.prev2 - static_cast<double>(n) * t.cur;
    return num / (4.0 - x * x);
}

ProductIdentityCheck cheb_product_identity(long long i, long long j, double x) {
    if (i < 0 || j < 0)
        throw std::invalid_argument("cheb_product_identity: indices must be >= 0");
    WTriple wi = w_forward(i, x);  // w_{i-2}, w_{i-1}, w_i
    WTriple wj = w_forward(j, x);
    ProductIdentityCheck out;
    out.lhs = wi.prev * wj.prev - wi.cur * wj.prev2;
    out.rhs = cheb_w(i - j, x);
    out.residual = out.lhs - out.rhs;
    return out;
}

Mat2 free_transfer_power(double q, long long n) {
    if (n < 0)
        throw std::invalid_argument("free_transfer_power: exponent must be >= 0, got " +
                                    std::to_string(n));
    WTriple t = w_forward(n, q);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * Mat2{-t.prev2, -t.prev, t.prev, t.cur};
}

}  // namespace jacobi
