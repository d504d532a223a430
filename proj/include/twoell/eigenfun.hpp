#pragma once

// Stitched angular eigenfunctions and the radial equations.
//
// On a characteristic curve the angular solution is
//   left  [pi/2, 3pi/2]:  Phi1 = A1 c1 + B1 s1   (pair based at pi, q = q1)
//   right [-pi/2, pi/2]:  Phi2 = A2 c2 + B2 s2   (pair based at 0,  q = q2)
// with (A1, B1, A2, B2) spanning the null space of the matching matrix.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "constants.hpp"
#include "discriminant.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "hill.hpp"
#include "spectrum.hpp"

namespace twoell {

struct eigen_coeffs {
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
};

struct angular_eigenfunction {
    double lambda = 0;
    double q1 = 0;
    double alpha = 1;
    curve_label label;
    eigen_coeffs coeffs;
    parity member = parity::even;  // about theta = 0

    double beta() const { return label.br() == branch::plus ? 1.0 : -1.0; }
};

namespace eigen_detail {

constexpr double ode_tol = 1e-12;

inline double beta_of(branch b) { return b == branch::plus ? 1.0 : -1.0; }

/// Columns of the matching matrix that survive a parity restriction.
/// Even about 0 kills s2; the left part then has parity beta about pi.
inline std::array<int, 2> parity_columns(parity p, double beta) {
    if (p == parity::even) return beta > 0 ? std::array<int, 2>{0, 2} : std::array<int, 2>{1, 2};
    return beta > 0 ? std::array<int, 2>{1, 3} : std::array<int, 2>{0, 3};
}

/// Values of A c + B s (pair based at `base`) at sorted points, marched
/// outward from the base in both directions.
inline std::vector<state2> sweep(double lambda, double q, double base, double a, double b,
                                 const std::vector<double>& ts) {
    std::vector<state2> out(ts.size());
    auto walk = [&](auto first, auto last) {
        double at = base, v = a, d = b;
        for (auto it = first; it != last; ++it) {
            const double t = ts[*it];
            std::tie(v, d) =
                hill_detail::march(lambda, q, at, t, v, d, ode_tol, [](double, double, double) {});
            at = t;
            out[*it] = {v, d, t};
        }
    };
    std::vector<std::size_t> up, down;
    for (std::size_t i = 0; i < ts.size(); ++i) (ts[i] >= base ? up : down).push_back(i);
    std::sort(up.begin(), up.end(), [&](auto i, auto j) { return ts[i] < ts[j]; });
    std::sort(down.begin(), down.end(), [&](auto i, auto j) { return ts[i] > ts[j]; });
    walk(up.begin(), up.end());
    walk(down.begin(), down.end());
    return out;
}

/// Gauss-Legendre nodes and weights on [lo, hi] split into `panels` pieces.
inline void gauss_panels(double lo, double hi, int panels, std::vector<double>& x, std::vector<double>& w) {
    using rule = boost::math::quadrature::gauss<double, 32>;
    const auto& ab = rule::abscissa();
    const auto& wt = rule::weights();
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * width, half = width / 2;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0) {
                x.push_back(mid);
                w.push_back(wt[i] * half);
                continue;
            }
            x.push_back(mid - ab[i] * half);
            w.push_back(wt[i] * half);
            x.push_back(mid + ab[i] * half);
            w.push_back(wt[i] * half);
        }
    }
}

/// Quadrature grid over [-pi/2, 3pi/2] with the seam at pi/2 as a panel
/// boundary; nodes_per_pi is rounded up to a multiple of 32.
struct quadrature {
    std::vector<double> right_x, right_w, left_x, left_w;

    explicit quadrature(int nodes_per_pi) {
        if (nodes_per_pi < 64) throw invalid_argument("quadrature needs at least 64 nodes per pi");
        const int panels = (nodes_per_pi + 31) / 32;
        gauss_panels(-half_pi, half_pi, panels, right_x, right_w);
        gauss_panels(half_pi, 3 * half_pi, panels, left_x, left_w);
    }
};

}  // namespace eigen_detail

/// Null direction of the matching matrix on a characteristic curve.
/// With `member` set, the search is restricted to that symmetry class,
/// which also resolves double eigenvalues (q1 = 0, coexistence). Without
/// it a two-dimensional null space is reported as degeneracy_error.
/// Coefficients are returned unnormalized (unit Euclidean length).
inline eigen_coeffs null_coeffs(double lambda, double q1, double alpha, branch br,
                                std::optional<parity> member = std::nullopt, double tol = 1e-6) {
    disc_detail::check_args(q1, alpha);
    const double beta = eigen_detail::beta_of(br);
    const double d = discriminant_precise(lambda, q1, alpha);
    if (!(std::abs(d - beta) < tol)) throw off_curve_error("lambda is not a characteristic value of this branch");

    const Eigen::Matrix4d m = matching_matrix(lambda, q1, alpha, beta, eigen_detail::ode_tol);
    // equilibrate columns so the singular values compare like with like
    Eigen::Vector4d scale;
    for (int j = 0; j < 4; ++j) scale[j] = std::max(m.col(j).norm(), 1e-300);
    const Eigen::Matrix4d ms = m * scale.cwiseInverse().asDiagonal();
    constexpr double null_threshold = 1e-6;

    Eigen::Vector4d v = Eigen::Vector4d::Zero();
    if (member) {
        const auto cols = eigen_detail::parity_columns(*member, beta);
        Eigen::Matrix<double, 4, 2> sub;
        sub << ms.col(cols[0]), ms.col(cols[1]);
        Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(sub, Eigen::ComputeFullV);
        const auto s = svd.singularValues();
        if (s[1] > null_threshold * s[0])
            throw off_curve_error("no eigenfunction of the requested parity at this lambda");
        v[cols[0]] = svd.matrixV()(0, 1);
        v[cols[1]] = svd.matrixV()(1, 1);
    } else {
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(ms, Eigen::ComputeFullV);
        const auto s = svd.singularValues();
        if (s[2] <= null_threshold * s[0])
            throw degeneracy_error("two-dimensional null space; request a parity member");
        v = svd.matrixV().col(3);
    }
    v = v.cwiseQuotient(scale);
    v /= v.norm();
    return {v[0], v[1], v[2], v[3]};
}

/// Value and slope of the eigenfunction at theta (reduced to [-pi/2, 3pi/2)).
inline state2 eval_angular_state(const angular_eigenfunction& f, double theta) {
    const auto c = angular_coord::at(theta);
    const double t = c.theta();
    const eigen_coeffs& k = f.coeffs;
    if (c.reg() == region::right) {
        const auto p = propagate(f.lambda, f.alpha * f.alpha * f.q1, 0.0, t, eigen_detail::ode_tol);
        return apply(p, {k.a2, k.b2, 0.0});
    }
    const auto p = propagate(f.lambda, f.q1, pi, t, eigen_detail::ode_tol);
    return apply(p, {k.a1, k.b1, pi});
}

inline double eval_angular(const angular_eigenfunction& f, double theta) {
    return eval_angular_state(f, theta).value;
}

/// (value, slope) at many angles in [-pi/2, 3pi/2]; cheaper than repeated
/// eval_angular since each region is swept once. Points exactly at pi/2
/// are taken from the right region.
inline std::vector<state2> sample_angular(const angular_eigenfunction& f, const std::vector<double>& thetas) {
    std::vector<double> rt, lt;
    std::vector<std::size_t> ri, li;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double t = thetas[i];
        if (!(t >= -half_pi && t <= 3 * half_pi)) throw invalid_argument("theta outside [-pi/2, 3pi/2]");
        if (t <= half_pi) {
            rt.push_back(t);
            ri.push_back(i);
        } else {
            lt.push_back(t);
            li.push_back(i);
        }
    }
    const auto& k = f.coeffs;
    const auto r = eigen_detail::sweep(f.lambda, f.alpha * f.alpha * f.q1, 0.0, k.a2, k.b2, rt);
    const auto l = eigen_detail::sweep(f.lambda, f.q1, pi, k.a1, k.b1, lt);
    std::vector<state2> out(thetas.size());
    for (std::size_t i = 0; i < ri.size(); ++i) out[ri[i]] = r[i];
    for (std::size_t i = 0; i < li.size(); ++i) out[li[i]] = l[i];
    return out;
}

/// Inner product over [-pi/2, 3pi/2] by composite Gauss-Legendre quadrature.
inline double orthogonality_check(const angular_eigenfunction& f, const angular_eigenfunction& g,
                                  int nodes_per_pi = 128) {
    if (f.q1 != g.q1 || f.alpha != g.alpha) throw invalid_argument("eigenfunctions must share q1 and alpha");
    const eigen_detail::quadrature qd(nodes_per_pi);
    auto integrate = [&](const std::vector<double>& x, const std::vector<double>& w) {
        const auto a = sample_angular(f, x);
        const auto b = &f == &g ? a : sample_angular(g, x);
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * a[i].value * b[i].value;
        return s;
    };
    return integrate(qd.right_x, qd.right_w) + integrate(qd.left_x, qd.left_w);
}

/// Continuity mismatch at pi/2: |dPhi| + |dPhi'|.
inline double matching_residual(const angular_eigenfunction& f) {
    const auto& k = f.coeffs;
    const double q2 = f.alpha * f.alpha * f.q1;
    const state2 l = apply(propagate(f.lambda, f.q1, pi, half_pi, eigen_detail::ode_tol), {k.a1, k.b1, pi});
    const state2 r = apply(propagate(f.lambda, q2, 0.0, half_pi, eigen_detail::ode_tol), {k.a2, k.b2, 0.0});
    return std::abs(l.value - r.value) + std::abs(l.slope - r.slope);
}

/// Bloch mismatch: |beta Phi1(3pi/2) - Phi2(-pi/2)| plus the same for slopes.
inline double bloch_residual(const angular_eigenfunction& f) {
    const auto& k = f.coeffs;
    const double q2 = f.alpha * f.alpha * f.q1;
    const state2 l = apply(propagate(f.lambda, f.q1, pi, 3 * half_pi, eigen_detail::ode_tol), {k.a1, k.b1, pi});
    const state2 r = apply(propagate(f.lambda, q2, 0.0, -half_pi, eigen_detail::ode_tol), {k.a2, k.b2, 0.0});
    const double b = f.beta();
    return std::abs(b * l.value - r.value) + std::abs(b * l.slope - r.slope);
}

/// Unit-norm eigenfunction at a known characteristic value. The sign makes
/// Phi(0) > 0 (even) or Phi'(0) > 0 (odd).
inline angular_eigenfunction make_eigenfunction(const curve_label& label, double lambda, double q1, double alpha,
                                                double tol = 1e-6, int nodes_per_pi = 128) {
    angular_eigenfunction f;
    f.lambda = lambda;
    f.q1 = q1;
    f.alpha = alpha;
    f.label = label;
    f.member = label.member;
    f.coeffs = null_coeffs(lambda, q1, alpha, label.br(), label.member, tol);
    auto& k = f.coeffs;
    const double lead = label.member == parity::even ? k.a2 : k.b2;
    const double s = (lead < 0 ? -1.0 : 1.0) / std::sqrt(orthogonality_check(f, f, nodes_per_pi));
    k = {k.a1 * s, k.b1 * s, k.a2 * s, k.b2 * s};
    return f;
}

/// Traces the characteristic value of `label` at q1 and builds its
/// eigenfunction.
inline angular_eigenfunction eigenfunction(const curve_label& label, double q1, double alpha, double tol = 1e-6) {
    double lambda = characteristic_value(label, q1, alpha, 1e-12);
    if (q1 > 0) {
        const auto d = discriminant_tiered(lambda, q1, alpha);
        if (spectrum_detail::residual(label, d) > 5e-8)
            lambda = spectrum_detail::polish(label, lambda, q1, alpha, d.scale);
    }
    return make_eigenfunction(label, lambda, q1, alpha, tol);
}

// ---------------------------------------------------------------- radial

struct radial_solution {
    region reg = region::left;
    double lambda = 0;
    double q1 = 0;
    double alpha = 1;
    std::vector<state2> samples;  // at = mu
};

namespace eigen_detail {

/// R'' = dlog_g2 R' + g2 [lambda - 2 q1 (cosh 2mu + alpha^2 - 1)] R on the
/// right, R'' = [lambda - 2 q1 cosh 2mu] R on the left.
inline double radial_rhs(region reg, double lambda, double q1, double a2, double mu, double r, double dr) {
    if (reg == region::left) return (lambda - 2 * q1 * std::cosh(2 * mu)) * r;
    const double s = std::sinh(mu), c = std::cosh(mu);
    const double denom = a2 + s * s;
    const double g2 = a2 == 1 ? 1.0 : c * c / denom;
    const double dlog = a2 == 1 ? 0.0 : (a2 - 1) * std::tanh(mu) / denom;
    return dlog * dr + g2 * (lambda - 2 * q1 * (std::cosh(2 * mu) + a2 - 1)) * r;
}

inline std::pair<double, double> radial_step(region reg, double lambda, double q1, double a2, double from,
                                             double to, double r, double dr, double tol) {
    ode::vec<double, 2> y{r, dr};
    auto rhs = [&](double mu, const ode::vec<double, 2>& s, ode::vec<double, 2>& ds) {
        ds[0] = s[1];
        ds[1] = radial_rhs(reg, lambda, q1, a2, mu, s[0], s[1]);
    };
    ode::options<double> o;
    o.rtol = tol;
    o.atol = tol;
    ode::integrate<double, 2>(rhs, from, to, y, o);
    return {y[0], y[1]};
}

}  // namespace eigen_detail

/// Integrates the radial equation of `reg` from r0 (at mu = r0.at) to
/// mu_max, sampled at `samples` evenly spaced points.
inline radial_solution radial_solve(region reg, double lambda, double q1, double alpha, const state2& r0,
                                    double mu_max, double tol = 1e-10, int samples = 101) {
    disc_detail::check_args(q1, alpha);
    hill_detail::check_tol(tol);
    if (!(mu_max > r0.at)) throw invalid_argument("mu_max must exceed the initial point");
    if (samples < 2) throw invalid_argument("radial grid needs at least two samples");
    radial_solution out{reg, lambda, q1, alpha, {}};
    out.samples.push_back(r0);
    const double a2 = alpha * alpha;
    double r = r0.value, dr = r0.slope, at = r0.at;
    for (int i = 1; i < samples; ++i) {
        const double mu = r0.at + (mu_max - r0.at) * i / (samples - 1);
        std::tie(r, dr) = eigen_detail::radial_step(reg, lambda, q1, a2, at, mu, r, dr, tol);
        at = mu;
        out.samples.push_back({r, dr, mu});
    }
    return out;
}

/// Largest relative ODE residual at the interior samples: the second
/// derivative from a five-point stencil of re-integrated values against the
/// coefficient form.
inline double radial_residual(const radial_solution& sol, double h = 1e-3) {
    const double a2 = sol.alpha * sol.alpha;
    double worst = 0;
    for (std::size_t i = 1; i + 1 < sol.samples.size(); ++i) {
        const state2& s = sol.samples[i];
        if (s.at - 2 * h < sol.samples.front().at) continue;
        double v[5];
        for (int j = -2; j <= 2; ++j)
            v[j + 2] = eigen_detail::radial_step(sol.reg, sol.lambda, sol.q1, a2, s.at, s.at + j * h, s.value,
                                                 s.slope, 1e-13)
                           .first;
        const double d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h);
        const double rhs = eigen_detail::radial_rhs(sol.reg, sol.lambda, sol.q1, a2, s.at, s.value, s.slope);
        worst = std::max(worst, std::abs(d2 - rhs) / std::max({1.0, std::abs(s.value), std::abs(rhs)}));
    }
    return worst;
}

/// max |R_left - R_right| over the grid for shared initial data: how far a
/// single product mode is from being continuous across the seam.
inline double seam_mismatch(double lambda, double q1, double alpha, const state2& r0, double mu_max,
                            double tol = 1e-10, int samples = 101) {
    const auto l = radial_solve(region::left, lambda, q1, alpha, r0, mu_max, tol, samples);
    const auto r = radial_solve(region::right, lambda, q1, alpha, r0, mu_max, tol, samples);
    double m = 0;
    for (std::size_t i = 0; i < l.samples.size(); ++i) m = std::max(m, std::abs(l.samples[i].value - r.samples[i].value));
    return m;
}

}  // namespace twoell
