#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <doctest.h>

#include "twoell/oracle.hpp"
#include "twoell/spectrum.hpp"

using namespace twoell;
using doctest::Approx;

TEST_CASE("labels") {
    const auto l = curve_label::make(3, parity::odd);
    CHECK(l.index() == 1.5);
    CHECK(l.br() == branch::minus);
    CHECK(l.start_value() == 2.25);
    CHECK(l.text() == "3/2");
    CHECK(curve_label::make(4, parity::even).text() == "2");
    CHECK_THROWS_AS(curve_label::make(0, parity::odd), invalid_argument);
    CHECK(first_labels(9).size() == 17);
}

TEST_CASE("q1 = 0 spectrum for any alpha") {
    const double expected[] = {0, 0.25, 1, 2.25, 4, 6.25, 9, 12.25, 16};
    for (double a : {0.5, 2.0}) {
        const auto v = eigenvalues_at(0, a, 16.5);
        REQUIRE(v.size() == 9);
        for (int i = 0; i < 9; ++i) {
            CHECK(v[i].lambda == Approx(expected[i]).epsilon(1e-10));
            CHECK(v[i].br == (i % 2 ? branch::minus : branch::plus));
            CHECK(v[i].multiplicity() == (i == 0 ? 1u : 2u));
        }
    }
    CHECK(eigenvalues_at(0, 2.0, 4.5).size() == 5);
}

TEST_CASE("alpha = 1 eigenvalues match the oracle") {
    const auto v = eigenvalues_at(1, 1, 10);
    std::vector<double> ref;
    for (int n = 0; n < 4; ++n) {
        ref.push_back(oracle::char_value(n, oracle::kind::a, 1).value);
        if (n > 0) ref.push_back(oracle::char_value(n, oracle::kind::b, 1).value);
        ref.push_back(oracle::half_order_value(n, 1));
    }
    for (const auto& e : v) {
        double best = 1e9;
        for (double r : ref) best = std::min(best, std::abs(r - e.lambda));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("classify") {
    CHECK(classify(0.5, 0, 0.5) == stability::stable);
    CHECK(classify(-1, 0, 0.5) == stability::unstable);
    CHECK(classify(0.25, 0, 0.5) == stability::boundary);
}

TEST_CASE("trace_curve basics") {
    const auto single = trace_curve(curve_label::make(0, parity::even), 0.5, {0.0});
    REQUIRE(single.points.size() == 1);
    CHECK(single.points[0].lambda == 0);

    const auto c = trace_curve(curve_label::make(1, parity::even), 1.0, uniform_grid(5, 50));
    CHECK(c.status == curve_status::complete);
    CHECK(c.points.size() == 51);
    for (const auto& p : c.points) CHECK(p.lambda == Approx(oracle::half_order_value(0, p.q1)).epsilon(1e-8));
    CHECK(c.max_residual() < 1e-7);
}

TEST_CASE("symmetry transport alpha -> 1/alpha") {
    // exchanging the regions may swap the two members of a label, so compare
    // the pair of values per index
    const double a = 0.5;
    for (int k = 0; k < 4; ++k) {
        std::vector<double> x, y;
        for (parity p : {parity::even, parity::odd}) {
            if (k == 0 && p == parity::odd) continue;
            const auto l = curve_label::make(k, p);
            x.push_back(characteristic_value(l, 4, a, 1e-11));
            y.push_back(characteristic_value(l, a * a * 4, 1 / a, 1e-11));
        }
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == Approx(y[i]).epsilon(1e-8));
    }
}

TEST_CASE("chart is deterministic regardless of threads") {
    const auto a = chart(0.5, 3, 3, 20, {}, 1);
    const auto b = chart(0.5, 3, 3, 20, {}, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == b[i].label);
        REQUIRE(a[i].points.size() == b[i].points.size());
        for (std::size_t j = 0; j < a[i].points.size(); ++j) CHECK(a[i].points[j].lambda == b[i].points[j].lambda);
    }
}

TEST_CASE("continuity budget") {
    CHECK(continuity_budget(0, 0.05) == 0.05);
    CHECK(continuity_budget(2, 0.1) == Approx(1.0));
}
