#pragma once

// Characteristic values (D = +1 or -1) and their curves lambda_n(q1).
//
// The angular potential 2 q(theta) cos 2theta is even in theta, so every
// 2pi-periodic (D = +1) or antiperiodic (D = -1) solution can be taken even
// or odd about theta = 0. Each of the four classes is a regular
// Sturm-Liouville problem on [0, pi] with Neumann or Dirichlet ends:
//
//   D = +1, even: phi'(0) = 0, phi'(pi) = 0      lambda(0) = n^2,        n >= 0
//   D = +1, odd : phi(0) = 0,  phi(pi) = 0       lambda(0) = n^2,        n >= 1
//   D = -1, even: phi'(0) = 0, phi(pi) = 0       lambda(0) = (n+1/2)^2
//   D = -1, odd : phi(0) = 0,  phi'(pi) = 0      lambda(0) = (n+1/2)^2
//
// Within a class the eigenvalues are simple and strictly ordered, and the
// Prüfer phase of the shooting solution counts them. A root of
// (phase at pi) - (target phase) is therefore the m-th characteristic value
// of that class with no risk of jumping to a neighbouring curve.

#include <boost/math/tools/toms748_solve.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "constants.hpp"
#include "discriminant.hpp"
#include "errors.hpp"
#include "hill.hpp"

namespace twoell {

enum class branch { plus, minus };
enum class parity { even, odd };  // even = cosine-like, odd = sine-like

inline const char* to_string(branch b) { return b == branch::plus ? "+" : "-"; }
inline const char* to_string(parity p) { return p == parity::even ? "even" : "odd"; }

/// Curve index n in {0, 1/2, 1, 3/2, ...} stored as 2n, plus the symmetry
/// member. Integer n is a D = +1 curve, half-integer n a D = -1 curve.
struct curve_label {
    int twice_index = 0;
    parity member = parity::even;

    static curve_label make(int twice_index, parity member) {
        if (twice_index < 0) throw invalid_argument("curve index must be >= 0");
        if (twice_index == 0 && member == parity::odd)
            throw invalid_argument("the n = 0 curve has no sine-like member");
        return {twice_index, member};
    }

    double index() const { return twice_index / 2.0; }
    branch br() const { return twice_index % 2 == 0 ? branch::plus : branch::minus; }
    double start_value() const { return index() * index(); }
    int numerator() const { return twice_index % 2 == 0 ? twice_index / 2 : twice_index; }
    int denominator() const { return twice_index % 2 == 0 ? 1 : 2; }
    std::string text() const {
        return denominator() == 1 ? std::to_string(numerator())
                                  : std::to_string(numerator()) + "/" + std::to_string(denominator());
    }

    friend bool operator==(const curve_label&, const curve_label&) = default;
};

/// The first n_labels indices (0, 1/2, 1, ...), both members where they exist.
inline std::vector<curve_label> first_labels(int n_labels) {
    std::vector<curve_label> out;
    for (int k = 0; k < n_labels; ++k) {
        out.push_back(curve_label::make(k, parity::even));
        if (k > 0) out.push_back(curve_label::make(k, parity::odd));
    }
    return out;
}

enum class stability { stable, unstable, boundary };

inline const char* to_string(stability s) {
    switch (s) {
        case stability::stable: return "stable";
        case stability::unstable: return "unstable";
        default: return "boundary";
    }
}

namespace spectrum_detail {

inline double ode_tol(double root_tol) { return std::clamp(root_tol * 1e-2, 1e-13, 1e-11); }

inline bool neumann_end(const curve_label& l) {
    return (l.br() == branch::plus) == (l.member == parity::even);
}

/// Position of the curve inside its symmetry class.
inline int class_index(const curve_label& l) {
    if (l.br() == branch::minus) return (l.twice_index - 1) / 2;
    return l.member == parity::even ? l.twice_index / 2 : l.twice_index / 2 - 1;
}

inline double target_phase(const curve_label& l) {
    const int m = class_index(l);
    return neumann_end(l) ? half_pi + m * pi : (m + 1) * pi;
}

/// Unwrapped Prüfer phase atan2(phi, phi') at theta = pi of the solution
/// started at theta = 0 from (1, 0) (even) or (0, 1) (odd).
inline double phase_at_pi(double lambda, double q1, double alpha, parity start, double tol) {
    const double q2 = alpha * alpha * q1;
    double v = start == parity::even ? 1.0 : 0.0;
    double s = start == parity::even ? 0.0 : 1.0;
    double raw = std::atan2(v, s);
    double phase = raw;
    auto track = [&](double, double value, double slope) {
        const double a = std::atan2(value, slope);
        double d = a - raw;
        if (d > pi) d -= two_pi;
        if (d <= -pi) d += two_pi;
        phase += d;
        raw = a;
    };
    std::tie(v, s) = hill_detail::march(lambda, q2, 0.0, half_pi, v, s, tol, track);
    hill_detail::march(lambda, q1, half_pi, pi, v, s, tol, track);
    return phase;
}

/// Lipschitz bound on |d lambda / d q1| along any curve (Hellmann-Feynman).
inline double slope_bound(double alpha) { return 2 * std::max(1.0, alpha * alpha); }

/// Interval guaranteed to contain the class eigenvalue (comparison theorem:
/// the potential is bounded by +-2 max(q1, q2)).
inline std::pair<double, double> safe_bracket(const curve_label& l, double q1, double alpha) {
    const double qmax = q1 * std::max(1.0, alpha * alpha);
    return {l.start_value() - 2 * qmax - 0.5, l.start_value() + 2 * qmax + 0.5};
}

inline double solve(const curve_label& l, double q1, double alpha, double tol, std::optional<double> hint) {
    const double otol = ode_tol(tol);
    const double target = target_phase(l);
    auto g = [&](double lam) { return phase_at_pi(lam, q1, alpha, l.member, otol) - target; };
    const auto [safe_lo, safe_hi] = safe_bracket(l, q1, alpha);

    double lo = safe_lo, hi = safe_hi, glo, ghi;
    if (hint) {
        double delta = 1e-3 * std::max(1.0, std::abs(*hint));
        lo = std::max(safe_lo, *hint - delta);
        hi = std::min(safe_hi, *hint + delta);
        glo = g(lo);
        ghi = g(hi);
        while (glo > 0 && lo > safe_lo) {
            delta *= 4;
            hi = lo;
            ghi = glo;
            lo = std::max(safe_lo, *hint - delta);
            glo = g(lo);
        }
        while (ghi < 0 && hi < safe_hi) {
            delta *= 4;
            lo = hi;
            glo = ghi;
            hi = std::min(safe_hi, *hint + delta);
            ghi = g(hi);
        }
    } else {
        glo = g(lo);
        ghi = g(hi);
    }
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    if (!(glo < 0 && ghi > 0)) throw convergence_error("characteristic value is not bracketed");

    const double abs_tol = tol * 1e-2;
    auto stop = [abs_tol](double a, double b) {
        return std::abs(a - b) <= abs_tol + 4e-16 * std::max(std::abs(a), std::abs(b));
    };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, stop, iters);
    return (r.first + r.second) / 2;
}

/// Shooting function of the class: the end condition at pi of the
/// symmetric starting solution, read from the half-period propagator.
template <class Real>
Real class_shooting(const curve_label& l, Real lambda, Real q1, Real alpha, Real tol) {
    const mat2<Real> h = disc_detail::half_period(lambda, q1, alpha, tol);
    if (l.member == parity::even) return neumann_end(l) ? h.a21 : h.a11;
    return neumann_end(l) ? h.a22 : h.a12;
}

/// |D -/+ 1| with the branch sign.
inline double residual(const curve_label& l, const precise_value& d) {
    return std::abs(d.value - (l.br() == branch::plus ? 1.0 : -1.0));
}

inline double residual(const curve_label& l, double lambda, double q1, double alpha) {
    return residual(l, discriminant_tiered(lambda, q1, alpha));
}

/// Secant refinement in extended precision for points where double
/// shooting cannot pin the root tightly enough for the residual check.
template <class Real>
double polish_in(const curve_label& l, double lambda, double q1, double alpha, double scale) {
    using std::abs;
    // the half period carries roughly the square root of the loop growth
    const Real tol = disc_detail::tier_tol<Real>(std::sqrt(scale));
    const Real a(alpha), q(q1), lam0(lambda);
    const Real width = Real(std::max(1.0, std::abs(lambda)));
    Real x0 = lam0;
    Real x1 = x0 + Real(1e-11) * width;
    Real f0 = class_shooting<Real>(l, x0, q, a, tol);
    Real f1 = class_shooting<Real>(l, x1, q, a, tol);
    for (int it = 0; it < 8; ++it) {
        if (f1 == f0) break;
        const Real x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (abs(x2 - lam0) > Real(1e-6) * width) return lambda;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        if (abs(x1 - x0) < Real(1e-18) * width) break;
        f1 = class_shooting<Real>(l, x1, q, a, tol);
    }
    return static_cast<double>(x1);
}

inline double polish(const curve_label& l, double lambda, double q1, double alpha, double scale) {
    if (scale < 1e8) return polish_in<long double>(l, lambda, q1, alpha, scale);
    return polish_in<quad>(l, lambda, q1, alpha, scale);
}

}  // namespace spectrum_detail

/// Characteristic value of one curve at (q1, alpha). tol is the root
/// tolerance in lambda.
inline double characteristic_value(const curve_label& label, double q1, double alpha, double tol = 1e-10,
                                   std::optional<double> hint = std::nullopt) {
    disc_detail::check_args(q1, alpha);
    if (!(tol > 0 && tol < 1e-4)) throw invalid_argument("root tolerance must lie in (0, 1e-4)");
    if (q1 == 0) return label.start_value();
    return spectrum_detail::solve(label, q1, alpha, tol, hint);
}

/// A characteristic value at fixed q1 with every curve that passes through
/// it (two members when the even and odd curves coincide, e.g. at q1 = 0).
struct spectral_value {
    double lambda = 0;
    branch br = branch::plus;
    std::vector<curve_label> members;

    std::size_t multiplicity() const { return members.size(); }
};

/// All characteristic values in (-inf, lambda_max] at fixed q1, sorted, with
/// coincident values merged.
inline std::vector<spectral_value> eigenvalues_at(double q1, double alpha, double lambda_max, double tol = 1e-10) {
    disc_detail::check_args(q1, alpha);
    if (!(lambda_max > 0)) throw invalid_argument("lambda_max must be positive");
    const double qmax = q1 * std::max(1.0, alpha * alpha);

    std::vector<std::pair<double, curve_label>> roots;
    for (int k = 0;; ++k) {
        const double start = (k / 2.0) * (k / 2.0);
        if (start - 2 * qmax - 0.5 > lambda_max) break;
        for (parity p : {parity::even, parity::odd}) {
            if (k == 0 && p == parity::odd) continue;
            const auto label = curve_label::make(k, p);
            const double lam = characteristic_value(label, q1, alpha, tol);
            if (lam <= lambda_max) roots.emplace_back(lam, label);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.twice_index < b.second.twice_index;
    });

    std::vector<spectral_value> out;
    for (const auto& [lam, label] : roots) {
        const double merge = std::max(100 * tol, 1e-9 * std::max(1.0, std::abs(lam)));
        if (!out.empty() && out.back().br == label.br() && std::abs(out.back().lambda - lam) <= merge) {
            out.back().members.push_back(label);
            continue;
        }
        out.push_back({lam, label.br(), {label}});
    }
    return out;
}

/// Stable if |D| < 1 - tol, unstable if |D| > 1 + tol, otherwise boundary.
inline stability classify(double lambda, double q1, double alpha, double tol = 1e-8) {
    const double d = std::abs(discriminant_precise(lambda, q1, alpha));
    if (d < 1 - tol) return stability::stable;
    if (d > 1 + tol) return stability::unstable;
    return stability::boundary;
}

struct curve_point {
    double q1 = 0;
    double lambda = 0;
    double residual = 0;  // |D -/+ 1| at the point
};

enum class curve_status { complete, lost };

struct characteristic_curve {
    curve_label label;
    double alpha = 1;
    std::vector<curve_point> points;
    curve_status status = curve_status::complete;
    std::string note;      // reason when lost
    int refinements = 0;   // q-step halvings performed
    int polished = 0;      // points refined in extended precision

    double max_residual() const {
        double r = 0;
        for (const auto& p : points) r = std::max(r, p.residual);
        return r;
    }
};

struct trace_options {
    double tol = 1e-9;            // root tolerance in lambda
    int max_halvings = 8;         // per grid step
    bool verify = true;           // compute |D -/+ 1| at each point
    double residual_goal = 5e-8;  // polish points whose residual exceeds this
};

/// Largest admissible |delta lambda| between adjacent points.
inline double continuity_budget(double slope, double dq) { return std::max(5 * std::abs(slope) * dq, 0.05); }

/// Follows one curve across q_grid (must start at 0 and increase). Each step
/// predicts lambda linearly, brackets the class root around the prediction
/// and halves the q-step when the jump exceeds the continuity budget.
inline characteristic_curve trace_curve(const curve_label& label, double alpha, const std::vector<double>& q_grid,
                                        const trace_options& opt = {}) {
    disc_detail::check_args(0.0, alpha);
    if (q_grid.empty() || q_grid.front() != 0) throw invalid_argument("q grid must start at 0");
    for (std::size_t i = 1; i < q_grid.size(); ++i)
        if (!(q_grid[i] > q_grid[i - 1])) throw invalid_argument("q grid must be strictly increasing");

    characteristic_curve curve;
    curve.label = label;
    curve.alpha = alpha;
    curve.points.push_back({0.0, label.start_value(), 0.0});

    double q_cur = 0, lam_cur = label.start_value();
    std::optional<double> slope;
    for (std::size_t i = 1; i < q_grid.size() && curve.status == curve_status::complete; ++i) {
        const double q_target = q_grid[i];
        double dq = q_target - q_cur;
        int halvings = 0;
        while (q_cur < q_target) {
            const double q_try = std::min(q_cur + dq, q_target);
            const double step = q_try - q_cur;
            const double predicted = lam_cur + slope.value_or(0.0) * step;
            double lam;
            try {
                lam = characteristic_value(label, q_try, alpha, opt.tol, predicted);
            } catch (const error& e) {
                curve.status = curve_status::lost;
                curve.note = e.what();
                break;
            }
            const double budget =
                continuity_budget(slope.value_or(spectrum_detail::slope_bound(alpha)), step);
            if (std::abs(lam - lam_cur) > budget) {
                if (halvings < opt.max_halvings) {
                    dq /= 2;
                    ++halvings;
                    ++curve.refinements;
                    continue;
                }
                curve.status = curve_status::lost;
                curve.note = "continuity budget exhausted after q-step halving";
                break;
            }
            slope = (lam - lam_cur) / step;
            q_cur = q_try;
            lam_cur = lam;
            curve.points.push_back({q_cur, lam_cur, 0.0});
        }
    }

    if (opt.verify) {
        for (auto& p : curve.points) {
            if (p.q1 == 0) {
                p.residual = spectrum_detail::residual(label, p.lambda, 0.0, alpha);
                continue;
            }
            const precise_value d = discriminant_tiered(p.lambda, p.q1, alpha);
            p.residual = spectrum_detail::residual(label, d);
            if (p.residual > opt.residual_goal) {
                const double refined = spectrum_detail::polish(label, p.lambda, p.q1, alpha, d.scale);
                const double r = spectrum_detail::residual(label, refined, p.q1, alpha);
                if (r < p.residual) {
                    p.lambda = refined;
                    p.residual = r;
                    ++curve.polished;
                }
            }
        }
    }
    return curve;
}

/// Uniform grid of q_steps intervals over [0, q_max].
inline std::vector<double> uniform_grid(double q_max, int q_steps) {
    if (!(q_max > 0) || q_steps < 1) throw invalid_argument("q grid needs q_max > 0 and at least one step");
    std::vector<double> g(static_cast<std::size_t>(q_steps) + 1);
    for (int i = 0; i <= q_steps; ++i) g[static_cast<std::size_t>(i)] = q_max * i / q_steps;
    return g;
}

/// Stability chart: every member of the first n_labels curve indices traced
/// over [0, q_max]. Curves are independent and may be traced concurrently;
/// the result order is the label order regardless of scheduling.
inline std::vector<characteristic_curve> chart(double alpha, double q_max, int n_labels, int q_steps = 200,
                                               const trace_options& opt = {}, unsigned threads = 0) {
    if (n_labels < 1) throw invalid_argument("chart needs at least one curve");
    const auto grid_q = uniform_grid(q_max, q_steps);
    const auto labels = first_labels(n_labels);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<characteristic_curve> out(labels.size());
    if (threads == 1) {
        for (std::size_t i = 0; i < labels.size(); ++i) out[i] = trace_curve(labels[i], alpha, grid_q, opt);
        return out;
    }
    std::vector<std::future<void>> jobs;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < threads; ++t) {
        jobs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < labels.size(); i = next++) out[i] = trace_curve(labels[i], alpha, grid_q, opt);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace twoell
