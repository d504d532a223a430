#pragma once

// Classical Mathieu reference values from truncated tridiagonal recurrence
// matrices. Shares nothing with the ODE route: eigenproblems only.
//
//   ce_{2r}   = sum A_{2k} cos 2k t       (a, even order)
//   ce_{2r+1} = sum A_{2k+1} cos (2k+1) t (a, odd order)
//   se_{2r+1} = sum B_{2k+1} sin (2k+1) t (b, odd order)
//   se_{2r+2} = sum B_{2k+2} sin (2k+2) t (b, even order)
//
// Half-integer orders n + 1/2 (antiperiodic over 2 pi) come from the
// exponential basis e^{i (1/2 + 2k) t}, k in Z. At q > 0 every value of that
// chain is doubly degenerate in the 2 pi problem (cosine and sine members
// coincide), so one value per order is returned.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace twoell::oracle {

enum class kind { a, b };

inline const char* to_string(kind k) { return k == kind::a ? "a" : "b"; }

struct char_value_result {
    int order = 0;
    kind type = kind::a;
    double q = 0;
    double value = 0;
    int truncation = 0;
};

namespace detail {

/// Tridiagonal matrix of one parity class, size m. `first` is the lowest
/// harmonic (0, 1 or 2) and `cosine` selects cos vs sin.
struct tridiag {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
    int first = 0;  // harmonic of row 0
};

inline tridiag build(kind k, int order, double q, int m) {
    const bool even = order % 2 == 0;
    tridiag t;
    t.diag.resize(m);
    t.off.resize(m - 1);
    t.off.setConstant(q);
    if (k == kind::a && even) {
        t.first = 0;
        for (int i = 0; i < m; ++i) t.diag[i] = 4.0 * i * i;
        if (m > 1) t.off[0] = std::sqrt(2.0) * q;
    } else if (k == kind::a) {
        t.first = 1;
        for (int i = 0; i < m; ++i) t.diag[i] = (2.0 * i + 1) * (2.0 * i + 1);
        t.diag[0] += q;
    } else if (even) {
        t.first = 2;
        for (int i = 0; i < m; ++i) t.diag[i] = (2.0 * i + 2) * (2.0 * i + 2);
    } else {
        t.first = 1;
        for (int i = 0; i < m; ++i) t.diag[i] = (2.0 * i + 1) * (2.0 * i + 1);
        t.diag[0] -= q;
    }
    return t;
}

/// Position of the requested order among the eigenvalues of its class.
inline int class_rank(kind k, int order) { return k == kind::b && order % 2 == 0 ? order / 2 - 1 : order / 2; }

inline void check(int order, kind k, double q, int truncation) {
    if (order < 0) throw invalid_argument("order must be >= 0");
    if (k == kind::b && order == 0) throw invalid_argument("b_0 does not exist");
    if (!(q >= 0) || !std::isfinite(q)) throw invalid_argument("q must be finite and >= 0");
    if (truncation < order + 20) throw invalid_argument("truncation must be >= order + 20");
}

struct eig {
    double value;
    Eigen::VectorXd vector;
};

inline eig solve(const tridiag& t, int rank, bool vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s;
    s.computeFromTridiagonal(t.diag, t.off, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (s.info() != Eigen::Success) throw convergence_error("tridiagonal eigensolver failed");
    return {s.eigenvalues()[rank], vectors ? Eigen::VectorXd(s.eigenvectors().col(rank)) : Eigen::VectorXd()};
}

/// Rows of the class matrix: ceil(truncation / 2) harmonics of one parity.
inline int rows(int truncation) { return truncation / 2 + 1; }

}  // namespace detail

/// Characteristic value a_n(q) or b_n(q). Throws convergence_error if
/// doubling the truncation moves the value by 1e-10 or more.
inline char_value_result char_value(int order, kind k, double q, int truncation = 0) {
    if (truncation == 0) truncation = order + 40 + static_cast<int>(2 * std::sqrt(q));
    detail::check(order, k, q, truncation);
    const int rank = detail::class_rank(k, order);
    const double v1 = detail::solve(detail::build(k, order, q, detail::rows(truncation)), rank, false).value;
    const double v2 = detail::solve(detail::build(k, order, q, detail::rows(2 * truncation)), rank, false).value;
    if (std::abs(v1 - v2) >= 1e-10 * std::max(1.0, std::abs(v2)))
        throw convergence_error("characteristic value not converged at truncation " + std::to_string(truncation));
    return {order, k, q, v2, 2 * truncation};
}

/// Value at order n + 1/2: the n-th smallest eigenvalue of the chain with
/// diagonal (1/2 + 2k)^2, k in Z, and off-diagonal q.
inline double half_order_value(int n, double q, int truncation = 0) {
    if (n < 0) throw invalid_argument("order must be >= 0");
    if (!(q >= 0) || !std::isfinite(q)) throw invalid_argument("q must be finite and >= 0");
    if (truncation == 0) truncation = n + 40 + static_cast<int>(2 * std::sqrt(q));
    if (truncation < n + 20) throw invalid_argument("truncation must be >= order + 20");
    auto value = [&](int half) {
        // k from -half to half
        const int m = 2 * half + 1;
        detail::tridiag t;
        t.diag.resize(m);
        t.off = Eigen::VectorXd::Constant(m - 1, q);
        for (int i = 0; i < m; ++i) {
            const double f = 0.5 + 2.0 * (i - half);
            t.diag[i] = f * f;
        }
        return detail::solve(t, n, false).value;
    };
    const double v1 = value(truncation / 2 + 1);
    const double v2 = value(truncation + 1);
    if (std::abs(v1 - v2) >= 1e-10 * std::max(1.0, std::abs(v2)))
        throw convergence_error("half-order value not converged at truncation " + std::to_string(truncation));
    return v2;
}

/// Fourier representation of ce_n or se_n, unit L2 norm on [0, 2 pi], sign
/// fixed so the order-n harmonic coefficient is positive.
struct mathieu_function {
    int order = 0;
    kind type = kind::a;
    double q = 0;
    double value = 0;                  // characteristic value
    int first_harmonic = 0;            // harmonic of coeffs[0]
    std::vector<double> coeffs;        // harmonics first, first + 2, ...

    /// (value, derivative) at t.
    std::pair<double, double> eval(double t) const {
        double v = 0, d = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const double h = first_harmonic + 2.0 * static_cast<double>(i);
            if (type == kind::a) {
                v += coeffs[i] * std::cos(h * t);
                d -= coeffs[i] * h * std::sin(h * t);
            } else {
                v += coeffs[i] * std::sin(h * t);
                d += coeffs[i] * h * std::cos(h * t);
            }
        }
        return {v, d};
    }
};

inline mathieu_function make_function(int order, kind k, double q, int truncation = 0) {
    const auto cv = char_value(order, k, q, truncation);
    const auto t = detail::build(k, order, q, detail::rows(cv.truncation));
    auto e = detail::solve(t, detail::class_rank(k, order), true);
    Eigen::VectorXd v = e.vector / (e.vector.norm() * std::sqrt(pi));
    // the symmetrized basis carries sqrt(2) A_0 in row 0
    if (t.first == 0) v[0] /= std::sqrt(2.0);
    const int lead = (order - t.first) / 2;
    if (v[lead] < 0) v = -v;
    mathieu_function f;
    f.order = order;
    f.type = k;
    f.q = q;
    f.value = cv.value;
    f.first_harmonic = t.first;
    // drop the negligible tail
    int last = static_cast<int>(v.size()) - 1;
    while (last > lead && std::abs(v[last]) < 1e-18) --last;
    f.coeffs.assign(v.data(), v.data() + last + 1);
    return f;
}

/// ce_n / se_n value at theta.
inline double eval_ce_se(int order, kind k, double q, double theta, int truncation = 0) {
    return make_function(order, k, q, truncation).eval(theta).first;
}

/// a_n or b_n sampled on a q grid, for the dashed reference overlay.
struct overlay_curve {
    int order = 0;
    kind type = kind::a;
    std::vector<std::pair<double, double>> points;  // (q, value)
};

/// Overlay for the first n_labels curves of a chart at alpha = 1: integer
/// labels give a_n and b_n, half-integer labels the antiperiodic chain.
inline std::vector<overlay_curve> ince_overlay(const std::vector<double>& q_grid, int max_order) {
    std::vector<overlay_curve> out;
    for (int n = 0; n <= max_order; ++n) {
        for (kind k : {kind::a, kind::b}) {
            if (k == kind::b && n == 0) continue;
            overlay_curve c{n, k, {}};
            for (double q : q_grid) c.points.emplace_back(q, char_value(n, k, q).value);
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace twoell::oracle
