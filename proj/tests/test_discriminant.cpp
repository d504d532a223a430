#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twoell/discriminant.hpp"
#include "twoell/oracle.hpp"

using namespace twoell;
using doctest::Approx;

TEST_CASE("harmonic limit") {
    CHECK(discriminant_monodromy(0.25, 0, 0.5) == Approx(-1).epsilon(1e-9));
    CHECK(discriminant_monodromy(1, 0, 2) == Approx(1).epsilon(1e-9));
    CHECK(discriminant_closed_form(0.25, 0, 3.1) == Approx(-1).epsilon(1e-9));
    CHECK(discriminant_closed_form(4, 0, 0.3) == Approx(1).epsilon(1e-9));
    for (double l : {-2.0, -0.5, 0.0, 0.7, 3.0, 12.0}) {
        const double exact = l >= 0 ? std::cos(two_pi * std::sqrt(l)) : std::cosh(two_pi * std::sqrt(-l));
        CHECK(std::abs(discriminant_monodromy(l, 0, 0.7) - exact) < 1e-9 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("alpha = 1 at the oracle characteristic values") {
    CHECK(discriminant_monodromy(oracle::char_value(0, oracle::kind::a, 1).value, 1, 1) == Approx(1).epsilon(1e-7));
    for (double q : {1.0, 5.0})
        for (int n = 1; n < 4; ++n)
            for (auto k : {oracle::kind::a, oracle::kind::b}) {
                const double lam = oracle::char_value(n, k, q).value;
                CHECK(std::abs(std::abs(discriminant_precise(lam, q, 1)) - 1) < 1e-7);
            }
}

TEST_CASE("closed form agrees with the monodromy route") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> L(-5, 25), Q(0, 10), A(0.2, 5);
    for (int i = 0; i < 100; ++i) {
        const double l = L(rng), q = Q(rng), a = A(rng);
        const double m = discriminant_precise(l, q, a), c = discriminant_closed_form_precise(l, q, a).value;
        CHECK(std::abs(m - c) < 1e-9 * std::max(1.0, std::abs(m)));
    }
    // moderate q2: plain double at default tolerance is enough
    for (int i = 0; i < 50; ++i) {
        const double l = L(rng), q = Q(rng) / 5, a = A(rng) / 3;
        const double m = discriminant_monodromy(l, q, a), c = discriminant_closed_form(l, q, a);
        CHECK(std::abs(m - c) < 1e-8 * std::max(1.0, std::abs(m)));
    }
}

TEST_CASE("closed form does not depend on the left base point") {
    for (double base : {half_pi + 0.3, pi, 4.2}) {
        const auto p = discriminant_closed_form_parts(3.3, 2.1, 0.5, 1e-11, base);
        CHECK(p.value == Approx(discriminant_monodromy(3.3, 2.1, 0.5, 1e-11)).epsilon(1e-9));
        CHECK(p.wronskian1 == Approx(-1).epsilon(1e-9));
        CHECK(p.wronskian2 == Approx(-1).epsilon(1e-9));
    }
}

TEST_CASE("half exchange") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> L(-5, 25), Q(0, 10), A(0.2, 5);
    for (int i = 0; i < 50; ++i) {
        const double l = L(rng), q = Q(rng), a = A(rng);
        const double d1 = discriminant_precise(l, q, a), d2 = discriminant_precise(l, a * a * q, 1 / a);
        CHECK(std::abs(d1 - d2) < 1e-9 * std::max(1.0, std::abs(d1)));
    }
}

TEST_CASE("tiered evaluation matches float128 in deep tunnelling") {
    const auto v = discriminant_tiered(-25.08753, 10, std::sqrt(2.0));
    CHECK(v.used == precision::binary128);
    CHECK(std::isfinite(v.value));
    const auto easy = discriminant_tiered(2.0, 1, 0.5);
    CHECK(easy.used == precision::binary64);
}

TEST_CASE("argument checks and samples") {
    CHECK_THROWS_AS(discriminant_monodromy(1, -1, 1), invalid_argument);
    CHECK_THROWS_AS(discriminant_monodromy(1, 1, 0), invalid_argument);
    const auto s = sample_discriminant(0.5, 0, 0.5, route::closed_form);
    CHECK(s.stable());
    CHECK(!sample_discriminant(-1, 0, 0.5, route::monodromy).stable());
}

TEST_CASE("matching matrix") {
    CHECK(std::abs(matching_matrix(0, 0, 0.5, 1).determinant()) < 1e-9);
    CHECK(std::abs(matching_matrix(0.5, 0, 0.5, 1).determinant()) > 1e-3);
    // simple root at 0; the nonzero q = 0 roots are double and only touch zero
    CHECK(matching_matrix(-0.1, 0, 0.5, 1).determinant() * matching_matrix(0.1, 0, 0.5, 1).determinant() < 0);
    CHECK(std::abs(matching_matrix(2.25, 0, 0.5, -1).determinant()) < 1e-9);
    CHECK_THROWS_AS(matching_matrix(1, 0, 0.5, 0.5), invalid_argument);
}
