#include "doctest.h"

#include <cmath>
#include <random>

#include "jacobi/mat2.hpp"

using namespace jacobi;

namespace {

bool close(const Mat2& m, const Mat2& o, double tol) {
    return frobenius_norm(m - o) <= tol;
}

}  // namespace

TEST_CASE("sym basics") {
    CHECK(close(sym(kE), Mat2::zero(), 0.0));
    CHECK(close(sym(Mat2{1, 2, 0, 1}), Mat2{1, 1, 1, 1}, 0.0));

    Mat2 s{3, -2, -2, 7};
    CHECK(close(sym(s), s, 0.0));
}

TEST_CASE("discr basics") {
    CHECK(discr(Mat2::identity()) == 0.0);
    CHECK(discr(Mat2{0, 1, -1, 0}) == -4.0);
}

TEST_CASE("discr is conjugation invariant") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Mat2 c{entry(rng), entry(rng), entry(rng), entry(rng)};
        Mat2 p{entry(rng), entry(rng), entry(rng), entry(rng)};
        if (std::fabs(p.det()) < 0.3) continue;  // keep P well conditioned
        double dp = p.det();
        Mat2 pinv = Mat2{p.d, -p.b, -p.c, p.a} * (1.0 / dp);
        double lhs = discr(p * c * pinv);
        double rhs = discr(c);
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("ordered_product conventions") {
    auto factor = [](long long n) {
        return Mat2{static_cast<double>(n), 1.0, 0.0, 1.0};
    };
    CHECK(close(ordered_product(factor, 5, 4), Mat2::identity(), 0.0));
    CHECK(close(ordered_product(factor, 3, 3), factor(3), 0.0));

    // Descending: factor(3) * factor(2), written out by hand.
    Mat2 hand = Mat2{3, 1, 0, 1} * Mat2{2, 1, 0, 1};
    CHECK(close(ordered_product(factor, 2, 3), hand, 0.0));

    // Non-commuting pair is order sensitive.
    auto nc = [](long long n) {
        return n == 0 ? Mat2{1, 1, 0, 1} : Mat2{1, 0, 1, 1};
    };
    Mat2 forward = nc(1) * nc(0);
    Mat2 backward = nc(0) * nc(1);
    CHECK(close(ordered_product(nc, 0, 1), forward, 0.0));
    CHECK(!close(forward, backward, 0.5));
}

TEST_CASE("ordered_product splits at any midpoint") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::vector<Mat2> mats;
    for (int i = 0; i < 9; ++i) mats.push_back({entry(rng), entry(rng), entry(rng), entry(rng)});
    auto factor = [&](long long n) { return mats[static_cast<size_t>(n)]; };
    Mat2 whole = ordered_product(factor, 0, 8);
    for (long long m = 0; m < 8; ++m) {
        Mat2 split = ordered_product(factor, m + 1, 8) * ordered_product(factor, 0, m);
        CHECK(close(whole, split, 1e-12 * std::max(1.0, frobenius_norm(whole))));
    }
}

TEST_CASE("det_sym_e equals -discr/4") {
    CHECK(det_sym_e(Mat2::identity()) == 0.0);

    // The one-period limit matrix with r = 1: [[0,1],[-1,-q]].
    for (double q : {-1.5, -0.3, 0.0, 0.7, 1.9}) {
        Mat2 f{0, 1, -1, -q};
        CHECK(std::fabs(det_sym_e(f) - (1.0 - q * q / 4.0)) <= 1e-15);
    }

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        Mat2 c{entry(rng), entry(rng), entry(rng), entry(rng)};
        double lhs = det_sym_e(c);
        double rhs = -discr(c) / 4.0;
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("det_sym_e is exact on integer matrices") {
    // Quarter-integer arithmetic stays exact in doubles at this size, so the
    // two computations must agree bit for bit.
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> entry(-(1 << 20), 1 << 20);
    for (int trial = 0; trial < 1000; ++trial) {
        Mat2 c{static_cast<double>(entry(rng)), static_cast<double>(entry(rng)),
               static_cast<double>(entry(rng)), static_cast<double>(entry(rng))};
        CHECK(det_sym_e(c) == -discr(c) / 4.0);
    }
}

TEST_CASE("quadratic form uses the symmetric representative") {
    Mat2 rep{1, 3, -1, 2};
    QuadForm q(rep);
    QuadForm qs(sym(rep));
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        Vec2 v{coord(rng), coord(rng)};
        CHECK(q(v) == doctest::Approx(qs(v)).epsilon(1e-14));
        // Direct evaluation against <Mv, v> with the raw representative.
        Vec2 mv = rep * v;
        CHECK(q(v) == doctest::Approx(dot(mv, v)).epsilon(1e-14));
    }
    CHECK(q(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(q(0.0, 1.0) == doctest::Approx(2.0));
}
