#pragma once

// Bloch discriminant D(lambda, q1, alpha) = cos 2 pi K of the piecewise
// angular equation: q = q1 on the left region [pi/2, 3pi/2] and
// q = q2 = alpha^2 q1 on the right region [-pi/2, pi/2].
//
// Two routes are provided. The monodromy route takes half the trace of the
// loop propagator across both regions. The closed-form route evaluates the
// four-product expression F built from fundamental-pair values at the seams,
// divided by 2 W(q1) W(q2).

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>
#include <algorithm>
#include <cmath>
#include <type_traits>

#include "constants.hpp"
#include "errors.hpp"
#include "hill.hpp"

namespace twoell {

using quad = boost::multiprecision::float128;

namespace disc_detail {

template <class Real>
Real pi_v() {
    return boost::math::constants::pi<Real>();
}

inline void check_args(double q1, double alpha) {
    if (!(q1 >= 0) || !std::isfinite(q1)) throw invalid_argument("q1 must be finite and >= 0");
    if (!(alpha > 0) || !std::isfinite(alpha)) throw invalid_argument("alpha must be positive and finite");
}

/// Loop propagator P(3pi/2 <- pi/2; q1) P(pi/2 <- -pi/2; q2) and the two factors.
template <class Real>
struct loop {
    mat2<Real> left;
    mat2<Real> right;
    mat2<Real> total() const { return left * right; }
};

template <class Real>
loop<Real> loop_monodromy(Real lambda, Real q1, Real alpha, Real tol) {
    const Real h = pi_v<Real>() / 2;
    const Real q2 = alpha * alpha * q1;
    return {hill_detail::transport(lambda, q1, h, 3 * h, tol), hill_detail::transport(lambda, q2, -h, h, tol)};
}

/// Propagator over the half period [0, pi]: right region up to the seam,
/// then left region. The potential is even, so the symmetry classes of
/// periodic / antiperiodic solutions are read off its entries.
template <class Real>
mat2<Real> half_period(Real lambda, Real q1, Real alpha, Real tol) {
    const Real h = pi_v<Real>() / 2;
    const Real q2 = alpha * alpha * q1;
    return hill_detail::transport(lambda, q1, h, 2 * h, tol) * hill_detail::transport(lambda, q2, Real(0), h, tol);
}

template <class Real>
Real max_abs(const mat2<Real>& m) {
    using std::abs;
    using std::max;
    return max(max(abs(m.a11), abs(m.a12)), max(abs(m.a21), abs(m.a22)));
}

}  // namespace disc_detail

/// Half-trace of the 2pi loop propagator.
inline double discriminant_monodromy(double lambda, double q1, double alpha, double tol = 1e-10) {
    disc_detail::check_args(q1, alpha);
    hill_detail::check_tol(tol);
    return disc_detail::loop_monodromy(lambda, q1, alpha, tol).total().trace() / 2;
}

/// Working precision used for a discriminant evaluation.
enum class precision { binary64, extended, binary128 };

/// Value of D with the product of the region propagator norms, which sets
/// the cancellation error of the half-trace.
struct precise_value {
    double value = 0;
    double scale = 1;
    precision used = precision::binary64;
};

namespace disc_detail {

/// Precision and integrator tolerance for a loop whose propagator norms
/// multiply to `scale`; the target is ~1e-10 absolute on D.
inline precision tier_for(double scale) {
    if (scale < 1e5) return precision::binary64;
    if (scale < 1e8) return precision::extended;
    return precision::binary128;
}

template <class Real>
Real tier_tol(double scale) {
    const double lo = std::is_same_v<Real, quad> ? 1e-30 : std::is_same_v<Real, long double> ? 1e-19 : 1e-13;
    return Real(std::clamp(1e-12 / scale, lo, 1e-13));
}

template <class Real>
double loop_half_trace(double lambda, double q1, double alpha, double scale) {
    const auto l = loop_monodromy<Real>(Real(lambda), Real(q1), Real(alpha), tier_tol<Real>(scale));
    return static_cast<double>(l.total().trace() / 2);
}

}  // namespace disc_detail

/// Monodromy discriminant accurate to ~1e-10 relative to max(1, |D|).
/// Deep tunnelling makes the loop entries large and the trace cancel, so the
/// evaluation moves to long double or float128 as the entries grow.
inline precise_value discriminant_tiered(double lambda, double q1, double alpha) {
    disc_detail::check_args(q1, alpha);
    const auto l = disc_detail::loop_monodromy(lambda, q1, alpha, 1e-13);
    const double d = l.total().trace() / 2;
    const double scale = std::max(1.0, disc_detail::max_abs(l.left) * disc_detail::max_abs(l.right));
    // the target is relative to max(1, |D|), so a large D tolerates a large scale
    const double eff = std::max(1.0, scale / std::max(1.0, std::abs(d)));
    switch (disc_detail::tier_for(eff)) {
        case precision::binary64: return {d, scale, precision::binary64};
        case precision::extended:
            return {disc_detail::loop_half_trace<long double>(lambda, q1, alpha, eff), scale, precision::extended};
        default:
            return {disc_detail::loop_half_trace<quad>(lambda, q1, alpha, eff), scale, precision::binary128};
    }
}

inline double discriminant_precise(double lambda, double q1, double alpha) {
    return discriminant_tiered(lambda, q1, alpha).value;
}

/// Pieces of the closed-form route, exposed for diagnostics.
struct closed_form_parts {
    double f = 0;           // F(lambda, q1, q1 alpha^2)
    double wronskian1 = 0;  // c' s - c s' of the left pair
    double wronskian2 = 0;  // c' s - c s' of the right pair
    double value = 0;       // F / (2 W1 W2)
    double magnitude = 0;   // sum of |terms| of F over |2 W1 W2|; sets the cancellation error
    precision used = precision::binary64;
};

namespace disc_detail {

template <class Real>
closed_form_parts closed_form(double lambda_d, double q1_d, double alpha_d, Real tol, double left_base_d) {
    using std::abs;
    using std::max;
    const Real lambda(lambda_d), q1(q1_d), alpha(alpha_d), left_base(left_base_d);
    const Real h = pi_v<Real>() / 2;
    const Real q2 = alpha * alpha * q1;
    // columns of a transport matrix are the (value, slope) of c and s
    const mat2<Real> l1 = hill_detail::transport(lambda, q1, left_base, h, tol);
    const mat2<Real> l3 = hill_detail::transport(lambda, q1, left_base, 3 * h, tol);
    const mat2<Real> r1 = hill_detail::transport(lambda, q2, Real(0), h, tol);
    const mat2<Real> r2 = hill_detail::transport(lambda, q2, Real(0), -h, tol);

    // W = c' s - c s' is -1 at the base for both pairs. The computed values
    // only serve as a check: near-parallel c and s make them cancel badly.
    const auto wr = [](const mat2<Real>& m) { return m.a21 * m.a12 - m.a11 * m.a22; };
    const auto wmag = [](const mat2<Real>& m) { return abs(m.a21 * m.a12) + abs(m.a11 * m.a22); };
    const Real w1 = wr(l1), w2 = wr(r1);
    const Real wscale = max({Real(1), wmag(l1), wmag(l3), wmag(r1), wmag(r2)});
    const Real spread = max({abs(w1 + 1), abs(wr(l3) + 1), abs(w2 + 1), abs(wr(r2) + 1)});
    if (spread > Real(1e4) * tol * wscale) throw convergence_error("Wronskian is not constant along the region");

    const Real C31 = l3.a11, dC31 = l3.a21, S31 = l3.a12, dS31 = l3.a22;
    const Real C11 = l1.a11, dC11 = l1.a21, S11 = l1.a12, dS11 = l1.a22;
    const Real C12 = r1.a11, dC12 = r1.a21, S12 = r1.a12, dS12 = r1.a22;

    const Real terms[] = {C31 * dC12 * S12 * dS11,       C11 * dC12 * S12 * dS31,  -2 * C31 * dC12 * S11 * dS12,
                          2 * C11 * dC12 * S31 * dS12,   C31 * C12 * dS11 * dS12,  C11 * C12 * dS31 * dS12,
                          -dC31 * dC12 * S11 * S12,      2 * dC31 * C12 * S12 * dS11, -dC31 * C12 * S11 * dS12,
                          -dC11 * dC12 * S31 * S12,      -2 * dC11 * C12 * S12 * dS31, -dC11 * C12 * S31 * dS12};
    Real f = 0, mag = 0;
    for (const Real& t : terms) {
        f += t;
        mag += abs(t);
    }
    const Real denom = 2;
    closed_form_parts p;
    p.f = static_cast<double>(f);
    p.wronskian1 = static_cast<double>(w1);
    p.wronskian2 = static_cast<double>(w2);
    p.value = static_cast<double>(f / denom);
    p.magnitude = static_cast<double>(max(mag, wscale * wscale) / denom);
    return p;
}

}  // namespace disc_detail

/// Closed-form discriminant. The right-region pair is based at theta = 0
/// (c even, s odd), which the expression for F requires since it uses only
/// values at pi/2 for q2. The left pair may be based anywhere in its region;
/// the result does not depend on that choice.
inline closed_form_parts discriminant_closed_form_parts(double lambda, double q1, double alpha,
                                                        double tol = 1e-10, double left_base = pi) {
    disc_detail::check_args(q1, alpha);
    hill_detail::check_tol(tol);
    return disc_detail::closed_form<double>(lambda, q1, alpha, tol, left_base);
}

/// Closed form with the working precision raised until the cancellation in
/// F leaves ~1e-10 relative accuracy on max(1, |D|). The large-q2 corner is
/// where this matters: the terms of F can exceed D by ten orders.
inline closed_form_parts discriminant_closed_form_precise(double lambda, double q1, double alpha) {
    disc_detail::check_args(q1, alpha);
    auto p = disc_detail::closed_form<double>(lambda, q1, alpha, 1e-13, pi);
    const double target = 1e-10 * std::max(1.0, std::abs(p.value));
    // an integration tolerance tol perturbs each term by roughly tol relative
    if (p.magnitude * 1e-13 * 10 < target) return p;
    const double need = target / (10 * p.magnitude);
    if (need >= 1e-17) {
        p = disc_detail::closed_form<long double>(lambda, q1, alpha, std::max(need, 1e-18), pi);
        p.used = precision::extended;
        return p;
    }
    p = disc_detail::closed_form<quad>(lambda, q1, alpha, quad(std::max(need, 1e-30)), pi);
    p.used = precision::binary128;
    return p;
}

inline double discriminant_closed_form(double lambda, double q1, double alpha, double tol = 1e-10) {
    return discriminant_closed_form_parts(lambda, q1, alpha, tol).value;
}

enum class route { closed_form, monodromy };

struct discriminant_sample {
    double lambda = 0;
    double q1 = 0;
    double alpha = 1;
    double value = 0;
    route via = route::monodromy;

    bool stable() const { return std::abs(value) <= 1; }
};

inline discriminant_sample sample_discriminant(double lambda, double q1, double alpha, route via,
                                               double tol = 1e-10) {
    const double v = via == route::monodromy ? discriminant_monodromy(lambda, q1, alpha, tol)
                                             : discriminant_closed_form(lambda, q1, alpha, tol);
    if (!std::isfinite(v)) throw convergence_error("discriminant is not finite");
    return {lambda, q1, alpha, v, via};
}

/// Matching matrix acting on (A1, B1, A2, B2): rows are continuity of value
/// and slope at pi/2, then the Bloch conditions beta * Phi1(3pi/2) =
/// Phi2(-pi/2) for value and slope. Left pair based at pi, right pair at 0.
inline Eigen::Matrix4d matching_matrix(double lambda, double q1, double alpha, double beta, double tol = 1e-10) {
    disc_detail::check_args(q1, alpha);
    if (beta != 1.0 && beta != -1.0) throw invalid_argument("beta must be +1 or -1");
    const double q2 = alpha * alpha * q1;
    const auto [c11, s11] = fundamental_pair(lambda, q1, pi, half_pi, tol);
    const auto [c31, s31] = fundamental_pair(lambda, q1, pi, 3 * half_pi, tol);
    const auto [c12, s12] = fundamental_pair(lambda, q2, 0.0, half_pi, tol);
    const auto [c22, s22] = fundamental_pair(lambda, q2, 0.0, -half_pi, tol);
    Eigen::Matrix4d m;
    m << c11.value, s11.value, -c12.value, -s12.value,
         c11.slope, s11.slope, -c12.slope, -s12.slope,
         beta * c31.value, beta * s31.value, -c22.value, -s22.value,
         beta * c31.slope, beta * s31.slope, -c22.slope, -s22.slope;
    return m;
}

}  // namespace twoell
