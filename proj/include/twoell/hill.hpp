#pragma once

// Transport of solutions of the angular equation
//     phi'' + (lambda - 2 q cos 2 theta) phi = 0
// over an interval on which q is constant (a single region of the chart).

#include <array>
#include <cmath>
#include <utility>

#include "errors.hpp"
#include "ode.hpp"

namespace twoell {

/// (value, slope) of a second-order solution at the point `at`.
struct state2 {
    double value = 0;
    double slope = 0;
    double at = 0;
};

/// 2x2 real matrix, row-major.
template <class Real>
struct mat2 {
    Real a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    Real det() const { return a11 * a22 - a12 * a21; }
    Real trace() const { return a11 + a22; }

    friend mat2 operator*(const mat2& l, const mat2& r) {
        return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
    }
};

/// Maps the state at `start` to the state at `end` for fixed (lambda, q).
/// Column 0 is the solution started from (1, 0), column 1 from (0, 1).
// Entries are long double: for norms near 1e4 double rounding alone moves
// det P by ~1e-8.
struct propagator {
    std::array<std::array<long double, 2>, 2> entries{{{1, 0}, {0, 1}}};
    double start = 0;
    double end = 0;
    double lambda = 0;
    double q = 0;

    long double det() const { return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]; }
};

namespace hill_detail {

inline void check_tol(double tol) {
    if (!(tol > 1e-14 && tol < 1e-4)) throw invalid_argument("tolerance must lie in (1e-14, 1e-4)");
}

/// Step cap keeping the phase of a solution from advancing by more than
/// about one radian per step; the Prüfer phase unwrapping relies on it.
template <class Real>
Real max_step(Real lambda, Real q) {
    using std::abs;
    using std::sqrt;
    const Real w2 = abs(lambda) + 2 * abs(q);
    return Real(1) / sqrt(w2 > 1 ? w2 : Real(1));
}

template <class Real>
ode::options<Real> options_for(Real lambda, Real q, Real tol) {
    ode::options<Real> o;
    o.rtol = tol;
    o.atol = tol;
    o.h_max = max_step(lambda, q);
    return o;
}

// The coefficient cos 2t is carried along as the pair (cos 2t, sin 2t) with
// C' = -2S, S' = 2C, so the right-hand side needs no transcendental calls.
// This matters for the float128 runs, where cos dominates the step cost.

/// Fundamental matrix from `from` to `to`.
template <class Real>
mat2<Real> transport(Real lambda, Real q, Real from, Real to, Real tol) {
    using std::cos;
    using std::sin;
    if (from == to) return {};
    ode::vec<Real, 6> y{1, 0, 0, 1, cos(2 * from), sin(2 * from)};
    auto rhs = [lambda, q](Real, const ode::vec<Real, 6>& s, ode::vec<Real, 6>& ds) {
        const Real k = lambda - 2 * q * s[4];
        ds[0] = s[1];
        ds[1] = -k * s[0];
        ds[2] = s[3];
        ds[3] = -k * s[2];
        ds[4] = -2 * s[5];
        ds[5] = 2 * s[4];
    };
    ode::options<Real> o;
    o.rtol = tol;
    o.atol = tol;
    ode::integrate<Real, 6>(rhs, from, to, y, o);
    return {y[0], y[2], y[1], y[3]};
}

/// Marches one solution (value, slope) from `from` to `to`, calling
/// observe(t, value, slope) after each accepted step. Steps are capped by
/// max_step so the observer sees the phase advance by under ~1 rad.
template <class Real, class Observer>
std::pair<Real, Real> march(Real lambda, Real q, Real from, Real to, Real value, Real slope, Real tol,
                            Observer&& observe) {
    using std::cos;
    using std::sin;
    if (from == to) return {value, slope};
    ode::vec<Real, 4> y{value, slope, cos(2 * from), sin(2 * from)};
    auto rhs = [lambda, q](Real, const ode::vec<Real, 4>& s, ode::vec<Real, 4>& ds) {
        ds[0] = s[1];
        ds[1] = -(lambda - 2 * q * s[2]) * s[0];
        ds[2] = -2 * s[3];
        ds[3] = 2 * s[2];
    };
    ode::integrate<Real, 4>(rhs, from, to, y, options_for(lambda, q, tol),
                            [&](Real t, const ode::vec<Real, 4>& s) { observe(t, s[0], s[1]); });
    return {y[0], y[1]};
}

}  // namespace hill_detail

/// Propagator of the angular equation over [from, to] (either direction).
/// Throws step_underflow_error if the integrator stalls.
inline propagator propagate(double lambda, double q, double from, double to, double tol = 1e-10) {
    hill_detail::check_tol(tol);
    const mat2<long double> m =
        hill_detail::transport<long double>(lambda, q, from, to, static_cast<long double>(tol));
    propagator p;
    p.entries = {{{m.a11, m.a12}, {m.a21, m.a22}}};
    p.start = from;
    p.end = to;
    p.lambda = lambda;
    p.q = q;
    return p;
}

/// Composition later∘earlier; the intervals must chain.
inline propagator compose(const propagator& later, const propagator& earlier) {
    if (std::abs(later.start - earlier.end) > 1e-12 * (1 + std::abs(earlier.end)))
        throw state_mismatch_error("propagators do not chain: earlier ends where later does not start");
    const mat2<long double> l{later.entries[0][0], later.entries[0][1], later.entries[1][0], later.entries[1][1]};
    const mat2<long double> e{earlier.entries[0][0], earlier.entries[0][1], earlier.entries[1][0],
                              earlier.entries[1][1]};
    const mat2<long double> m = l * e;
    propagator p = later;
    p.entries = {{{m.a11, m.a12}, {m.a21, m.a22}}};
    p.start = earlier.start;
    return p;
}

/// Transports s from p.start to p.end.
inline state2 apply(const propagator& p, const state2& s) {
    if (std::abs(s.at - p.start) > 1e-12 * (1 + std::abs(p.start)))
        throw state_mismatch_error("state is not located at the propagator start");
    const auto& m = p.entries;
    return {static_cast<double>(m[0][0] * s.value + m[0][1] * s.slope),
            static_cast<double>(m[1][0] * s.value + m[1][1] * s.slope), p.end};
}

/// Initial-value fundamental pair based at `base`: c starts as (1, 0) and
/// s as (0, 1). Both are returned evaluated at `eval_at`, so that
/// c.value * s.slope - c.slope * s.value = 1.
inline std::pair<state2, state2> fundamental_pair(double lambda, double q, double base, double eval_at,
                                                  double tol = 1e-10) {
    const propagator p = propagate(lambda, q, base, eval_at, tol);
    const auto& m = p.entries;
    return {state2{static_cast<double>(m[0][0]), static_cast<double>(m[1][0]), eval_at},
            state2{static_cast<double>(m[0][1]), static_cast<double>(m[1][1]), eval_at}};
}

}  // namespace twoell
