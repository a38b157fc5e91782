#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "jacobi/chebyshev.hpp"
#include "jacobi/coefficients.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/regime.hpp"

using namespace jacobi;

namespace {
constexpr double kPi = 3.14159265358979323846;

RegularLimits limits_from(long long N, std::vector<double> q, std::vector<double> r) {
    RegularLimits lim;
    lim.period = N;
    lim.q = std::move(q);
    lim.r = std::move(r);
    lim.q_tail = lim.q;
    lim.r_tail = lim.r;
    lim.q_residual.assign(N, 0.0);
    lim.r_residual.assign(N, 0.0);
    lim.transfer = ordered_product(
        [&](long long j) {
            return Mat2{0.0, 1.0, -lim.r[j], -lim.q[j]};
        },
        0, N - 1);
    lim.det_sym_e_transfer = det_sym_e(lim.transfer);
    return lim;
}

}  // namespace

TEST_CASE("limit estimation on a power family") {
    auto c = make_coefficients(FamilySpec::power(0.7));
    auto lim = estimate_regular_limits(c, 1, 100000);
    CHECK(lim.period == 1);
    CHECK(lim.q[0] == doctest::Approx(0.0));
    CHECK(lim.r[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lim.det_sym_e_transfer == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(lim.q_residual[0] >= 0.0);
    CHECK(lim.r_residual[0] < 1e-3);

    auto verdict = classify_regime(lim);
    CHECK(verdict.kind == RegimeVerdict::Kind::NonDegenerate);
    CHECK(verdict.det_value == doctest::Approx(1.0).epsilon(1e-4));

    CHECK_THROWS_AS(estimate_regular_limits(c, 0, 1000), std::invalid_argument);
    CHECK_THROWS_AS(estimate_regular_limits(c, 1, 9), std::invalid_argument);
}

TEST_CASE("blockwise linear weights sit at the critical coupling") {
    auto c = make_coefficients(FamilySpec::multiple_weights(2, 0.0));
    auto lim = estimate_regular_limits(c, 2, 100000);
    CHECK(lim.r[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lim.r[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(lim.det_sym_e_transfer) < 1e-6);

    auto verdict = classify_regime(lim);
    CHECK(verdict.kind == RegimeVerdict::Kind::Critical);
    CHECK(verdict.k0 == 1);
    CHECK(std::fabs(verdict.q) < 1e-12);
}

TEST_CASE("entrywise modulation with distinct factors degenerates") {
    auto spec = FamilySpec::modulated({1.0, 2.0}, {1.0, 1.0}, FamilySpec::power(1.0));
    auto lim = estimate_regular_limits(make_coefficients(spec), 2, 100000);
    CHECK(lim.r[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(lim.r[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(lim.det_sym_e_transfer == doctest::Approx(-0.5625).epsilon(1e-4));

    auto verdict = classify_regime(lim);
    CHECK(verdict.kind == RegimeVerdict::Kind::Degenerate);
}

TEST_CASE("classification on synthetic limit data") {
    // A clean critical pattern at N = 3, k0 = 2.
    double qc = 2.0 * std::cos(2.0 * kPi / 3.0);
    auto crit = limits_from(3, {qc + 1e-10, qc - 1e-10, qc}, {1.0 + 1e-10, 1.0, 1.0 - 1e-10});
    auto v1 = classify_regime(crit);
    CHECK(v1.kind == RegimeVerdict::Kind::Critical);
    CHECK(v1.k0 == 2);
    CHECK(v1.q == doctest::Approx(qc).epsilon(1e-14));

    // Ratios at one but shifts that do not share a common value.
    auto split = limits_from(2, {0.5, -0.5}, {1.0, 1.0});
    auto v2 = classify_regime(split);
    CHECK(v2.kind == RegimeVerdict::Kind::Degenerate);
    CHECK(v2.det_value < 0.0);

    // A common shift that matches no root of w_{N-1}. The squared one-step
    // matrix has trace q^2 - 2 and determinant 1, so det(sym(E F)) is
    // -((q^2-2)^2 - 4)/4 = 0.234375 at q = 0.5.
    auto off = limits_from(2, {0.5, 0.5}, {1.0, 1.0});
    auto v3 = classify_regime(off);
    CHECK(v3.kind == RegimeVerdict::Kind::NonDegenerate);
    CHECK(v3.det_value == doctest::Approx(0.234375).epsilon(1e-12));

    // Hyperbolic one-period matrix: det(sym(E F)) < 0.
    auto hyp = limits_from(1, {2.5}, {1.0});
    auto v4 = classify_regime(hyp);
    CHECK(v4.kind == RegimeVerdict::Kind::Degenerate);
    CHECK(v4.det_value == doctest::Approx(1.0 - 2.5 * 2.5 / 4.0).epsilon(1e-12));
}

TEST_CASE("nonpositive ratio limits are rejected") {
    auto a = [](long long n) {
        if (n == 9) return 1e-6;
        if (n == 10) return 1e6;
        return 1.0;
    };
    auto b = [](long long) { return 0.0; };
    JacobiCoefficients c(a, b, 1, "spiked");
    try {
        estimate_regular_limits(c, 1, 10);
        FAIL("expected NonPositiveRatioLimit");
    } catch (const NonPositiveRatioLimit& e) {
        CHECK(e.value < 0.0);
    }
}

TEST_CASE("trace shortcut on unimodular matrices") {
    Mat2 f = free_transfer_power(0.7, 5);
    auto val = shortcut_trace_test(f);
    REQUIRE(val.has_value());
    CHECK(*val == doctest::Approx(det_sym_e(f)).epsilon(1e-12));

    CHECK(!shortcut_trace_test(Mat2{2.0, 0.0, 0.0, 1.0}).has_value());

    // Within tolerance of det 1 still qualifies.
    Mat2 near{0.0, 1.0, -1.0 - 1e-12, -0.3};
    CHECK(shortcut_trace_test(near, 1e-9).has_value());
}
