#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jacobi/chebyshev.hpp"
#include "jacobi/coefficients.hpp"
#include "jacobi/compensated.hpp"
#include "jacobi/eigensolve.hpp"
#include "jacobi/errors.hpp"

using namespace jacobi;

namespace {

JacobiCoefficients ones() {
    TailRule per;
    per.mode = TailRule::Mode::Periodic;
    per.period = 1;
    return make_coefficients(FamilySpec::tables({1.0}, {}, per));
}

// Plain three-term recurrence without any rescaling, for cross-checking.
std::vector<double> direct_orbit(const JacobiCoefficients& c, double lambda, Vec2 seed,
                                 long long n_max) {
    std::vector<double> u(n_max + 1);
    u[0] = seed.x;
    u[1] = seed.y;
    for (long long n = 1; n < n_max; ++n)
        u[n + 1] = ((lambda - c.b(n)) * u[n] - c.a(n - 1) * u[n - 1]) / c.a(n);
    return u;
}

}  // namespace

TEST_CASE("transfer matrix advances the pair") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    double lambda = 0.42;
    auto u = direct_orbit(c, lambda, {0.3, -1.1}, 10);
    for (long long n = 1; n < 10; ++n) {
        Vec2 out = transfer_matrix(c, n, lambda) * Vec2{u[n - 1], u[n]};
        CHECK(out.x == doctest::Approx(u[n]).epsilon(1e-14));
        CHECK(out.y == doctest::Approx(u[n + 1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(transfer_matrix(c, 0, lambda), std::invalid_argument);
}

TEST_CASE("step product length and determinant telescoping") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    double lambda = 0.8;
    CHECK(frobenius_norm(step_product(c, 3, 0, lambda) - Mat2::identity()) == 0.0);
    CHECK_THROWS_AS(step_product(c, 0, 2, lambda), std::invalid_argument);
    CHECK_THROWS_AS(step_product(c, 1, -1, lambda), std::invalid_argument);

    // det B_j = a_{j-1}/a_j, so the product determinant telescopes.
    for (long long n : {1LL, 3LL, 11LL}) {
        for (long long N : {1LL, 2LL, 5LL}) {
            double det = step_product(c, n, N, lambda).det();
            double expect = c.a(n - 1) / c.a(n + N - 1);
            CHECK(det == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    // The product moves the pair N slots forward.
    auto u = direct_orbit(c, lambda, {1.0, 0.4}, 30);
    Vec2 out = step_product(c, 4, 7, lambda) * Vec2{u[3], u[4]};
    CHECK(out.x == doctest::Approx(u[10]).epsilon(1e-11));
    CHECK(out.y == doctest::Approx(u[11]).epsilon(1e-11));
}

TEST_CASE("free orbit cycles with period four") {
    auto c = ones();
    EigenOrbit orbit(c, 0.0, {1.0, 0.0});
    double expect[] = {1, 0, -1, 0, 1, 0, -1, 0};
    // Pair at position n is (u_{n-1}, u_n).
    for (int n = 1; n < 7; ++n) {
        CHECK(orbit.position() == n);
        CHECK(orbit.u_prev() == doctest::Approx(expect[n - 1]).epsilon(1e-14));
        CHECK(orbit.u_cur() == doctest::Approx(expect[n]).epsilon(1e-14));
        CHECK(orbit.log_scale() == doctest::Approx(0.0));
        orbit.advance();
    }
    CHECK(orbit.input_norm() == 1.0);
}

TEST_CASE("orbit matches the direct recurrence") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    double lambda = 0.37;
    Vec2 seed{0.2, -1.3};
    auto u = direct_orbit(c, lambda, seed, 200);
    EigenOrbit orbit(c, lambda, seed, 64);
    while (orbit.position() < 200) {
        orbit.advance();
        long long n = orbit.position();
        double scale = orbit.input_norm() * std::exp(orbit.log_scale());
        CHECK(std::fabs(orbit.u_cur() * scale - u[n]) <=
              1e-9 * std::max(1.0, std::fabs(u[n])));
    }
}

TEST_CASE("renormalization cadence does not move the true values") {
    auto c = make_coefficients(FamilySpec::meixner_pollaczek(1.0, 1.0));
    double lambda = -0.6;
    Vec2 seed{1.0, 0.25};
    double reference = 0.0;
    bool have_ref = false;
    for (long long cadence : {1LL, 7LL, 64LL, 500LL}) {
        EigenOrbit orbit(c, lambda, seed, cadence);
        while (orbit.position() < 300) orbit.advance();
        double truth = orbit.u_cur() * orbit.input_norm() * std::exp(orbit.log_scale());
        if (!have_ref) {
            reference = truth;
            have_ref = true;
        } else {
            CHECK(truth == doctest::Approx(reference).epsilon(1e-9));
        }
    }
}

TEST_CASE("runaway orbits surface as overflow errors") {
    auto c = ones();
    EigenOrbit orbit(c, 1e160, {1.0, 0.0});
    try {
        for (int i = 0; i < 10; ++i) orbit.advance();
        FAIL("expected NumericOverflow");
    } catch (const NumericOverflow& e) {
        CHECK(e.index == 4);
    }

    CHECK_THROWS_AS(EigenOrbit(c, 0.0, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(EigenOrbit(c, 0.0, {1.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("trajectory sampling is dense early and at boundaries") {
    auto c = make_coefficients(FamilySpec::power(0.5));
    auto traj = iterate_eigenvector(c, 0.3, {3.0, 4.0}, 2000, 64);
    CHECK(traj.input_norm == doctest::Approx(5.0));
    CHECK(traj.alpha.x == doctest::Approx(0.6));
    CHECK(traj.alpha.y == doctest::Approx(0.8));
    REQUIRE(!traj.samples.empty());
    CHECK(traj.samples.front().n == 1);
    CHECK(traj.samples.back().n == 2000);
    // Dense up to 1000, renormalization boundaries afterwards.
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        long long n = traj.samples[i].n;
        if (n <= 1000) CHECK(n == static_cast<long long>(i + 1));
        else CHECK((n % 64 == 0 || n == 2000));
    }
}

TEST_CASE("orthonormal polynomials reduce to the rescaled chebyshev family") {
    auto c = ones();
    double x = 0.5;
    auto poly = orthonormal_polys(c, x, 300);
    REQUIRE(poly.samples.size() >= 300);
    for (const auto& s : poly.samples) {
        double truth = s.p * std::exp(s.log_scale);
        CHECK(std::fabs(truth - cheb_w(s.n, x)) <= 1e-10);
    }

    // Running square sums against a direct accumulation.
    CompensatedSum direct;
    size_t idx = 0;
    for (long long n = 0; n <= 50; ++n) {
        double w = cheb_w(n, x);
        direct.add(w * w);
        while (idx < poly.samples.size() && poly.samples[idx].n < n) ++idx;
        if (idx < poly.samples.size() && poly.samples[idx].n == n)
            CHECK(std::exp(poly.samples[idx].sum_sq_log) ==
                  doctest::Approx(direct.value()).epsilon(1e-9));
    }
}

TEST_CASE("scaled square sum tracks wide dynamic ranges") {
    ScaledSquareSum s;
    CHECK(s.value() == 0.0);
    s.add(2.0, 0.0);
    CHECK(s.log_value() == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    s.add(3.0, 100.0);
    // 4 e^0 + 9 e^200; the small term is invisible at double precision.
    CHECK(s.log_value() == doctest::Approx(200.0 + std::log(9.0)).epsilon(1e-14));

    ScaledSquareSum rev;
    rev.add(3.0, 100.0);
    rev.add(2.0, 0.0);
    CHECK(rev.log_value() == doctest::Approx(s.log_value()).epsilon(1e-14));

    ScaledSquareSum huge;
    huge.add(1.0, 400.0);
    huge.add(1.0, 400.0);
    CHECK(huge.log_value() == doctest::Approx(800.0 + std::log(2.0)).epsilon(1e-14));
    CHECK(std::isinf(huge.value()));

    ScaledSquareSum z;
    z.add(0.0, 50.0);
    CHECK(z.value() == 0.0);
}

TEST_CASE("compensated sum survives catastrophic cancellation") {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
}

TEST_CASE("two step extension realizes the prescribed vector") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    double lambda = 0.3;
    Vec2 u01{0.7, -0.2};
    auto ext = extend_to_polynomials(c, lambda, u01);
    CHECK(ext.shift == 2);
    CHECK(ext.b0 == ext.b1);
    CHECK(ext.b0 == doctest::Approx(lambda - ext.gamma).epsilon(1e-14));
    CHECK(ext.a1 / ext.a0 == doctest::Approx(ext.beta / ext.gamma).epsilon(1e-12));
    CHECK(ext.a0 > 0.0);

    auto big = extended_coefficients(c, ext);
    CHECK(big.a(0) == doctest::Approx(ext.a0));
    CHECK(big.a(1) == doctest::Approx(ext.a1));
    CHECK(big.a(2) == doctest::Approx(c.a(0)));
    CHECK(big.b(0) == doctest::Approx(ext.b0));
    CHECK(big.b(2) == doctest::Approx(c.b(0)));

    // p~_{n+2}(lambda) must reproduce u_n for the original recurrence.
    auto u = direct_orbit(c, lambda, u01, 60);
    auto poly = orthonormal_polys(big, lambda, 62);
    for (const auto& smp : poly.samples) {
        if (smp.n < 2 || smp.n > 60) continue;
        double truth = smp.p * std::exp(smp.log_scale);
        double want = u[smp.n - 2];
        CHECK(std::fabs(truth - want) <= 1e-9 * std::max(1.0, std::fabs(want)));
    }
}

TEST_CASE("directions already realized by the polynomials are rejected") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    double lambda = 0.9;
    double a0 = c.a(0), b0 = c.b(0);
    Vec2 bad{2.0, 2.0 * (lambda - b0) / a0};
    CHECK_THROWS_AS(extend_to_polynomials(c, lambda, bad), DegenerateDirection);
}
