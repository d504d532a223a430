#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twoell/hill.hpp"
#include "twoell/oracle.hpp"

using namespace twoell;
using namespace twoell::oracle;
using doctest::Approx;

TEST_CASE("q = 0 spectrum") {
    CHECK(char_value(0, kind::a, 0).value == 0);
    CHECK(char_value(1, kind::b, 0).value == Approx(1));
    for (int n = 1; n < 8; ++n) {
        CHECK(char_value(n, kind::a, 0).value == Approx(n * n));
        CHECK(char_value(n, kind::b, 0).value == Approx(n * n));
    }
    for (int n = 0; n < 4; ++n) CHECK(half_order_value(n, 0) == Approx((n + 0.5) * (n + 0.5)));
}

TEST_CASE("tabulated values at q = 1") {
    CHECK(char_value(0, kind::a, 1).value == Approx(-0.4551386041).epsilon(1e-9));
    CHECK(char_value(1, kind::b, 1).value == Approx(-0.1102488170).epsilon(1e-9));
    CHECK(char_value(1, kind::a, 1).value == Approx(1.8591080725).epsilon(1e-9));
    CHECK(char_value(2, kind::b, 1).value == Approx(3.9170247730).epsilon(1e-9));
}

TEST_CASE("interlacing and small-q continuity") {
    for (double q : {1.0, 5.0, 10.0}) {
        double prev = char_value(0, kind::a, q).value;
        for (int n = 1; n < 7; ++n) {
            const double b = char_value(n, kind::b, q).value, a = char_value(n, kind::a, q).value;
            CHECK(prev < b);
            CHECK(b < a);
            prev = a;
        }
    }
    for (int n = 0; n < 5; ++n) CHECK(std::abs(char_value(n, kind::a, 1e-6).value - n * n) < 1e-5);
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(char_value(0, kind::b, 1), invalid_argument);
    CHECK_THROWS_AS(char_value(3, kind::a, 1, 10), invalid_argument);
    CHECK_THROWS_AS(char_value(1, kind::a, -1), invalid_argument);
}

TEST_CASE("normalization and gauge") {
    CHECK(eval_ce_se(0, kind::a, 0, 0.7) == Approx(1 / std::sqrt(two_pi)));
    CHECK(eval_ce_se(1, kind::b, 0, half_pi) == Approx(1 / std::sqrt(pi)));
    for (auto k : {kind::a, kind::b})
        for (int n = k == kind::a ? 0 : 1; n < 5; ++n) {
            const auto f = make_function(n, k, 3.0);
            double s = 0;
            const int m = 4000;
            for (int i = 0; i < m; ++i) {
                const double v = f.eval(two_pi * (i + 0.5) / m).first;
                s += v * v * two_pi / m;
            }
            CHECK(s == Approx(1).epsilon(1e-10));
            CHECK(f.coeffs[static_cast<std::size_t>((n - f.first_harmonic) / 2)] > 0);
        }
}

TEST_CASE("series agrees with ODE integration") {
    const auto f = make_function(2, kind::a, 1);
    const auto [v0, d0] = f.eval(0);
    const auto p = propagate(f.value, 1, 0, 0.3, 1e-12);
    CHECK(std::abs(apply(p, {v0, d0, 0}).value - f.eval(0.3).first) < 1e-8);
}

TEST_CASE("series satisfies the Mathieu equation") {
    for (auto k : {kind::a, kind::b}) {
        const auto f = make_function(3, k, 4.0);
        for (double t : {0.1, 0.9, 2.0, 4.4}) {
            const double h = 1e-3;
            double v[5];
            for (int j = -2; j <= 2; ++j) v[j + 2] = f.eval(t + j * h).first;
            const double d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h);
            CHECK(std::abs(d2 + (f.value - 8 * std::cos(2 * t)) * v[2]) < 1e-8);
        }
    }
}

TEST_CASE("overlay") {
    const auto ov = ince_overlay({0, 1, 2}, 2);
    CHECK(ov.size() == 5);
    CHECK(ov[0].points[0].second == 0);
}
