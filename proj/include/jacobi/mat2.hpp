#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace jacobi {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }

// Row-major 2x2 real matrix.
struct Mat2 {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    constexpr double trace() const { return a + d; }
    constexpr double det() const { return a * d - b * c; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }

    constexpr Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    constexpr Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

inline double frobenius_norm(const Mat2& m) {
    return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}

constexpr Mat2 sym(const Mat2& m) {
    return {m.a, 0.5 * (m.b + m.c), 0.5 * (m.b + m.c), m.d};
}

// (tr C)^2 - 4 det C, the discriminant of the characteristic polynomial.
constexpr double discr(const Mat2& m) {
    double t = m.trace();
    return t * t - 4.0 * m.det();
}

// Rotation by pi/2; the symplectic form <Ex, y> pairs transfer-matrix orbits.
inline constexpr Mat2 kE{0.0, -1.0, 1.0, 0.0};

// det(sym(E*C)). Equals -discr(C)/4 for every C; kept as an independent
// computation so the identity can be cross-checked rather than assumed.
constexpr double det_sym_e(const Mat2& m) {
    return sym(kE * m).det();
}

// Product factor(n1) * factor(n1-1) * ... * factor(n0), identity when n1 < n0.
// New factors multiply from the left, matching how transfer matrices compose.
inline Mat2 ordered_product(const std::function<Mat2(long long)>& factor,
                            long long n0, long long n1) {
    Mat2 p = Mat2::identity();
    for (long long n = n0; n <= n1; ++n) p = factor(n) * p;
    return p;
}

// Evaluation form v -> <Mv, v>; stores the symmetric representative.
struct QuadForm {
    Mat2 m = Mat2::zero();

    explicit QuadForm(const Mat2& rep) : m(sym(rep)) {}
    double operator()(const Vec2& v) const { return dot(m * v, v); }
    double operator()(double x, double y) const { return (*this)(Vec2{x, y}); }
};

}  // namespace jacobi
