#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twoell/hill.hpp"
#include "twoell/constants.hpp"

using namespace twoell;
using doctest::Approx;

namespace {

// closed-form propagator at q = 0
propagator harmonic(double lambda, double d) {
    propagator p;
    if (lambda > 0) {
        const double w = std::sqrt(lambda);
        p.entries = {{{std::cos(w * d), std::sin(w * d) / w}, {-w * std::sin(w * d), std::cos(w * d)}}};
    } else if (lambda < 0) {
        const double w = std::sqrt(-lambda);
        p.entries = {{{std::cosh(w * d), std::sinh(w * d) / w}, {w * std::sinh(w * d), std::cosh(w * d)}}};
    } else {
        p.entries = {{{1, d}, {0, 1}}};
    }
    return p;
}

double norm(const propagator& p) {
    long double m = 0;
    for (const auto& row : p.entries) m = std::max(m, std::abs(row[0]) + std::abs(row[1]));
    return static_cast<double>(m);
}

double max_diff(const propagator& a, const propagator& b) {
    long double m = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a.entries[i][j] - b.entries[i][j]));
    return static_cast<double>(m);
}

}  // namespace

TEST_CASE("harmonic closed forms") {
    const auto p = propagate(4, 0, 0, half_pi);
    CHECK(p.entries[0][0] == Approx(-1).epsilon(1e-9));
    CHECK(p.entries[1][1] == Approx(-1).epsilon(1e-9));
    CHECK(std::abs(p.entries[0][1]) < 1e-9);
    CHECK(std::abs(p.entries[1][0]) < 1e-9);
    const auto f = propagate(0, 0, 0, 0.7);
    CHECK(f.entries[0][1] == Approx(0.7));
    for (double l : {-1.0, 0.0, 0.25, 1.0, 4.0, 9.0}) CHECK(max_diff(propagate(l, 0, 0.3, 2.1), harmonic(l, 1.8)) < 1e-9);
}

TEST_CASE("tolerance bracket") {
    CHECK_THROWS_AS(propagate(1, 1, 0, 1, 1e-15), invalid_argument);
    CHECK_THROWS_AS(propagate(1, 1, 0, 1, 1e-3), invalid_argument);
}

TEST_CASE("self-convergence and unit determinant") {
    const auto p = propagate(1, 1, 0, pi, 1e-10);
    const auto r = propagate(1, 1, 0, pi, 1e-12);
    CHECK(std::abs(p.det() - 1) < 1e-9);
    CHECK(max_diff(p, r) < 1e-8);
}

TEST_CASE("composition, reversal and apply") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> L(-5, 20), Q(0, 10), T(-1.5, 1.5);
    for (int i = 0; i < 20; ++i) {
        const double l = L(rng), q = Q(rng), a = T(rng), b = T(rng), c = T(rng);
        const auto ab = propagate(l, q, a, b), bc = propagate(l, q, b, c), ac = propagate(l, q, a, c);
        const auto comp = compose(bc, ab);
        // local error tol per propagator, amplified by the other factor's growth
        CHECK(max_diff(comp, ac) < 10 * 1e-10 * norm(bc) * norm(ab));
        CHECK(std::abs(ab.det() - 1) < 1e-9);
        const auto ba = propagate(l, q, b, a);
        CHECK(max_diff(compose(ba, ab), propagator{}) < 10 * 1e-10 * norm(ba) * norm(ab));
    }
    const auto p = propagate(1, 1, 0, 1);
    CHECK_THROWS_AS(compose(p, p), state_mismatch_error);
    CHECK_THROWS_AS(apply(p, {1, 0, 0.5}), state_mismatch_error);
    const state2 s1{1, 0, 0}, s2{0, 1, 0};
    const auto a1 = apply(p, s1), a2 = apply(p, s2), mix = apply(p, {2, -3, 0});
    CHECK(mix.value == Approx(2 * a1.value - 3 * a2.value));
    CHECK(mix.slope == Approx(2 * a1.slope - 3 * a2.slope));
    CHECK(mix.at == 1);
    const auto id = apply(propagator{}, {0.3, 0.4, 0});
    CHECK(id.value == 0.3);
    CHECK(apply(propagate(4, 0, 0, half_pi), {1, 0, 0}).value == Approx(-1));
}

TEST_CASE("fundamental pair") {
    const auto [c0, s0] = fundamental_pair(2, 3, 0.4, 0.4);
    CHECK(c0.value == 1);
    CHECK(s0.slope == 1);
    const auto [c, s] = fundamental_pair(1, 0, 0, half_pi);
    CHECK(std::abs(c.value) < 1e-9);
    CHECK(c.slope == Approx(-1));
    CHECK(s.value == Approx(1));
    CHECK(std::abs(s.slope) < 1e-9);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> L(-5, 20), Q(0, 10);
    for (int i = 0; i < 30; ++i) {
        const auto [ci, si] = fundamental_pair(L(rng), Q(rng), 0, 1.3);
        CHECK(std::abs(ci.value * si.slope - ci.slope * si.value - 1) < 1e-9);
    }
}
