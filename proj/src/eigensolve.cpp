#include "jacobi/eigensolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jacobi/errors.hpp"

namespace jacobi {

Mat2 transfer_matrix(const JacobiCoefficients& coeffs, long long n, double lambda) {
    if (n < 1) throw std::invalid_argument("transfer_matrix: index must be >= 1");
    double an = coeffs.a(n);
    return {0.0, 1.0, -coeffs.a(n - 1) / an, (lambda - coeffs.b(n)) / an};
}

Mat2 step_product(const JacobiCoefficients& coeffs, long long n, long long N, double lambda) {
    if (n < 1) throw std::invalid_argument("step_product: start index must be >= 1");
    if (N < 0) throw std::invalid_argument("step_product: length must be >= 0");
    return ordered_product([&](long long j) { return transfer_matrix(coeffs, j, lambda); }, n,
                           n + N - 1);
}

EigenOrbit::EigenOrbit(const JacobiCoefficients& coeffs, double lambda, Vec2 alpha,
                       long long renorm_every)
    : coeffs_(&coeffs), lambda_(lambda), renorm_every_(renorm_every) {
    if (renorm_every_ < 1) throw std::invalid_argument("EigenOrbit: renorm_every must be >= 1");
    input_norm_ = norm(alpha);
    if (!(input_norm_ > 0.0) || !std::isfinite(input_norm_))
        throw std::invalid_argument("EigenOrbit: initial direction must be nonzero and finite");
    u_prev_ = alpha.x / input_norm_;
    u_cur_ = alpha.y / input_norm_;
    a_prev_ = coeffs.a(0);
}

void EigenOrbit::renormalize() {
    double s = std::hypot(u_prev_, u_cur_);
    if (s == 0.0)
        throw NumericOverflow("EigenOrbit: consecutive values both vanished at n=" +
                                  std::to_string(n_),
                              n_);
    u_prev_ /= s;
    u_cur_ /= s;
    log_scale_ += std::log(s);
}

void EigenOrbit::advance() {
    double an = coeffs_->a(n_);
    double bn = coeffs_->b(n_);
    double next = ((lambda_ - bn) * u_cur_ - a_prev_ * u_prev_) / an;
    if (!std::isfinite(next))
        throw NumericOverflow("EigenOrbit: iterate left the representable range at n=" +
                                  std::to_string(n_ + 1),
                              n_ + 1);
    u_prev_ = u_cur_;
    u_cur_ = next;
    a_prev_ = an;
    ++n_;
    if (n_ % renorm_every_ == 0 || std::fabs(u_cur_) > 1e200 || std::fabs(u_prev_) > 1e200)
        renormalize();
}

void ScaledSquareSum::add(double mantissa, double log_scale) {
    if (mantissa == 0.0) return;
    double lg = log_scale + std::log(std::fabs(mantissa));
    if (sig == 0.0) {
        ref = lg;
        sig = 1.0;
        return;
    }
    if (lg > ref + 20.0) {
        sig *= std::exp(2.0 * (ref - lg));
        ref = lg;
        sig += 1.0;
        return;
    }
    sig += std::exp(2.0 * (lg - ref));
}

double ScaledSquareSum::log_value() const {
    if (sig == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(sig) + 2.0 * ref;
}

double ScaledSquareSum::value() const { return std::exp(log_value()); }

Trajectory iterate_eigenvector(const JacobiCoefficients& coeffs, double lambda, Vec2 alpha,
                               long long n_max, long long renorm_every) {
    if (n_max < 1) throw std::invalid_argument("iterate_eigenvector: n_max must be >= 1");
    EigenOrbit orbit(coeffs, lambda, alpha, renorm_every);
    Trajectory traj;
    traj.lambda = lambda;
    traj.alpha = {orbit.u_prev(), orbit.u_cur()};
    traj.input_norm = orbit.input_norm();
    traj.renorm_every = renorm_every;

    auto record = [&]() {
        traj.samples.push_back(
            {orbit.position(), orbit.u_prev(), orbit.u_cur(), orbit.log_scale()});
    };
    record();
    while (orbit.position() < n_max) {
        orbit.advance();
        long long n = orbit.position();
        if (n <= 1000 || n % renorm_every == 0 || n == n_max) record();
    }
    return traj;
}

PolyTrajectory orthonormal_polys(const JacobiCoefficients& coeffs, double x, long long n_max) {
    if (n_max < 1) throw std::invalid_argument("orthonormal_polys: n_max must be >= 1");
    Vec2 seed{1.0, (x - coeffs.b(0)) / coeffs.a(0)};
    EigenOrbit orbit(coeffs, x, seed, 64);
    double log_input = std::log(orbit.input_norm());

    PolyTrajectory poly;
    poly.x = x;
    ScaledSquareSum sq;
    sq.add(orbit.u_prev(), orbit.log_scale() + log_input);  // p_0
    // p_0 gets its own sample row; after that each position contributes u_cur.
    poly.samples.push_back({0, orbit.u_prev(), orbit.log_scale() + log_input, sq.log_value()});
    sq.add(orbit.u_cur(), orbit.log_scale() + log_input);
    auto record = [&]() {
        poly.samples.push_back(
            {orbit.position(), orbit.u_cur(), orbit.log_scale() + log_input, sq.log_value()});
    };
    record();
    while (orbit.position() < n_max) {
        orbit.advance();
        sq.add(orbit.u_cur(), orbit.log_scale() + log_input);
        long long n = orbit.position();
        if (n <= 1000 || n % orbit.renorm_every() == 0 || n == n_max) record();
    }
    return poly;
}

ExtensionResult extend_to_polynomials(const JacobiCoefficients& coeffs, double lambda, Vec2 u01) {
    double a0 = coeffs.a(0);
    double b0 = coeffs.b(0);
    double beta = (lambda - b0) * u01.x - a0 * u01.y;
    double scale = std::max({std::fabs((lambda - b0) * u01.x), std::fabs(a0 * u01.y), 1e-300});
    if (std::fabs(beta) <= 1e-12 * scale)
        throw DegenerateDirection(
            "extend_to_polynomials: direction already realized by the orthonormal polynomials");

    double sign = beta > 0.0 ? 1.0 : -1.0;
    double gamma = sign * std::max(1.0, 2.0 * std::fabs(beta * u01.x));
    for (int i = 0; i < 200; ++i) {
        // Need gamma != lambda and the square root argument comfortably positive;
        // doubling drives beta*u_0/gamma to zero, so this terminates.
        if (gamma != lambda && 1.0 + (beta / gamma) * u01.x > 0.25) break;
        gamma *= 2.0;
    }
    double arg = 1.0 + (beta / gamma) * u01.x;
    if (!(gamma != lambda && arg > 0.0))
        throw std::runtime_error("extend_to_polynomials: no admissible gamma found");

    ExtensionResult ext;
    ext.beta = beta;
    ext.gamma = gamma;
    ext.a0 = std::fabs(gamma) / std::sqrt(arg);
    ext.a1 = (beta / gamma) * ext.a0;
    ext.b0 = ext.b1 = lambda - gamma;
    return ext;
}

JacobiCoefficients extended_coefficients(const JacobiCoefficients& coeffs,
                                         const ExtensionResult& ext) {
    auto base = std::make_shared<JacobiCoefficients>(coeffs);
    double a0 = ext.a0, a1 = ext.a1, bb = ext.b0;
    auto a = [base, a0, a1](long long n) {
        if (n == 0) return a0;
        if (n == 1) return a1;
        return base->a(n - 2);
    };
    auto b = [base, bb](long long n) {
        if (n < 2) return bb;
        return base->b(n - 2);
    };
    std::optional<PowerTail> tail = coeffs.tail();
    if (tail) {
        tail->lower_coef /= std::pow(3.0, tail->power);
        tail->valid_from = std::max<long long>(2, tail->valid_from + 2);
    }
    return JacobiCoefficients(a, b, coeffs.period_hint(),
                              coeffs.family_tag() + "+two_step_extension", tail);
}

}  // namespace jacobi
