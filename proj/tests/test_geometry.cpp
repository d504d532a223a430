#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twoell/geometry.hpp"

using namespace twoell;
using doctest::Approx;

TEST_CASE("config validation and derived parameters") {
    CHECK_THROWS_AS(system_config::make(0, 0.5), invalid_argument);
    CHECK_THROWS_AS(system_config::make(1, 0), invalid_argument);
    CHECK_THROWS_AS(system_config::make(1, 0.5, -1), invalid_argument);
    const auto c = system_config::make(2, 0.5, 3);
    CHECK(c.f2() == 1);
    CHECK(c.q1() == Approx(9.0));
    CHECK(c.q2() == Approx(2.25));
}

TEST_CASE("angular coordinate reduction") {
    CHECK(angular_coord::at(0.3).reg() == region::right);
    CHECK(angular_coord::at(pi).reg() == region::left);
    CHECK(angular_coord::at(-pi).reg() == region::left);
    CHECK(angular_coord::at(-pi).theta() == Approx(pi));
    CHECK(angular_coord::at(half_pi).reg() == region::right);
    CHECK_NOTHROW(angular_coord::on(half_pi, region::left));
    CHECK_THROWS_AS(angular_coord::on(0.2, region::left), invalid_argument);
}

TEST_CASE("to_cartesian at the foci and on the seam") {
    const auto cfg = system_config::make(1, 0.5);
    auto p = to_cartesian(angular_coord::at(pi), 0, cfg);
    CHECK(p.x == Approx(-1));
    CHECK(p.y == Approx(0).epsilon(1e-15));
    p = to_cartesian(angular_coord::at(0), 0, cfg);
    CHECK(p.x == Approx(0.5));
    const auto l = to_cartesian(angular_coord::on(half_pi, region::left), 1, cfg);
    const auto r = to_cartesian(angular_coord::on(half_pi, region::right), 1, cfg);
    CHECK(l.x == 0);
    CHECK(r.x == 0);
    CHECK(l.y == r.y);
    CHECK(l.y == Approx(std::sinh(1.0)));
}

TEST_CASE("metric factors") {
    const auto cfg = system_config::make(1, 0.5);
    const auto left = metric_at(angular_coord::at(pi), 0.7, cfg);
    CHECK(left.g2 == 1);
    CHECK(left.dlog_g2 == 0);
    CHECK(left.h2 == Approx(0.5 * std::cosh(1.4)));
    const auto r0 = metric_at(angular_coord::at(0), 0, cfg);
    CHECK(r0.g2 == Approx(4));
    CHECK(r0.dlog_g2 == 0);
    const auto unit = metric_at(angular_coord::at(0.4), 1.3, system_config::make(1, 1));
    CHECK(unit.g2 == 1);
    CHECK(unit.dlog_g2 == 0);
}

TEST_CASE("dlog_g2 is half the log-derivative of g2") {
    const auto cfg = system_config::make(1, 0.7);
    const auto th = angular_coord::at(0.2);
    const double mu = 0.9, h = 1e-5;
    const double gp = metric_at(th, mu + h, cfg).g2, gm = metric_at(th, mu - h, cfg).g2;
    const double g = metric_at(th, mu, cfg).g2;
    CHECK(metric_at(th, mu, cfg).dlog_g2 == Approx((gp - gm) / (2 * h) / (2 * g)).epsilon(1e-8));
}

TEST_CASE("grid counts and focal segments") {
    const auto cfg = system_config::make(1, 0.5);
    const auto lines = grid(cfg, 4, 2, 1);
    CHECK(lines.size() == 6);
    for (const auto& l : lines)
        for (const auto& p : l.points) CHECK((std::isfinite(p.x) && std::isfinite(p.y)));
    // mu = 0 line is the pair of focal segments
    const auto& focal = lines[4];
    CHECK(focal.label == "mu");
    CHECK(focal.value == 0);
    for (const auto& p : focal.points) {
        CHECK(p.y == Approx(0).epsilon(1e-15));
        CHECK(((p.x >= -1 - 1e-15 && p.x <= 0) || (p.x >= 0 && p.x <= 0.5 + 1e-15)));
    }
    CHECK_THROWS_AS(grid(cfg, 1, 2, 1), invalid_argument);
    CHECK_THROWS_AS(grid(cfg, 2, 2, 0), invalid_argument);
}

TEST_CASE("alpha = 1 branches coincide") {
    const auto cfg = system_config::make(1.3, 1);
    for (double t : {-1.2, -0.3, 0.4, 1.1})
        for (double mu : {0.0, 0.5, 2.0}) {
            const auto r = to_cartesian(angular_coord::on(t, region::right), mu, cfg);
            CHECK(r.x == 1.3 * std::cosh(mu) * std::cos(t));
            CHECK(r.y == 1.3 * std::sinh(mu) * std::sin(t));
        }
}

TEST_CASE("orthogonality and degenerate points") {
    const auto cfg = system_config::make(1, 0.5);
    CHECK(orthogonality_residual(angular_coord::at(pi), 1, cfg) < 1e-6);
    CHECK(orthogonality_residual(angular_coord::at(0.3), 0.7, cfg) < 1e-6);
    CHECK_THROWS_AS(orthogonality_residual(angular_coord::at(0.3), 0, cfg), degenerate_point_error);
    CHECK_THROWS_AS(orthogonality_residual(angular_coord::at(half_pi - 1e-7), 1, cfg), degenerate_point_error);
}

TEST_CASE("mirror symmetry") {
    const auto cfg = system_config::make(1, 0.6);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.5), m(0, 2);
    for (int i = 0; i < 50; ++i) {
        const double t = u(rng), mu = m(rng);
        const auto a = to_cartesian(angular_coord::at(t), mu, cfg);
        const auto b = to_cartesian(angular_coord::at(-t), mu, cfg);
        CHECK(a.x == Approx(b.x));
        CHECK(a.y == Approx(-b.y));
        const auto c = to_cartesian(angular_coord::at(pi - t + 0.01), mu, cfg);
        const auto d = to_cartesian(angular_coord::at(pi + t - 0.01), mu, cfg);
        CHECK(c.x == Approx(d.x));
        CHECK(c.y == Approx(-d.y));
    }
}
