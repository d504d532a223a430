#pragma once

// Two-elliptic coordinates: a confocal elliptic family with focal distance
// f1 on the left half-plane (theta in [pi/2, 3pi/2]) stitched along the
// y axis to a family with focal distance f2 = alpha f1 on the right
// (theta in [-pi/2, pi/2]).

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace twoell {

enum class region { right, left };

inline const char* to_string(region r) { return r == region::right ? "right" : "left"; }

/// Focal distance f1, scale coefficient alpha = f2 / f1 and wavenumber k.
struct system_config {
    double f1 = 1;
    double alpha = 1;
    double k = 0;

    static system_config make(double f1, double alpha, double k = 0) {
        if (!(f1 > 0) || !std::isfinite(f1)) throw invalid_argument("f1 must be positive and finite");
        if (!(alpha > 0) || !std::isfinite(alpha))
            throw invalid_argument("alpha must be positive; alpha = 0 is only reachable as a limit");
        if (!(k >= 0) || !std::isfinite(k)) throw invalid_argument("wavenumber k must be >= 0");
        return {f1, alpha, k};
    }

    double f2() const { return alpha * f1; }
    double q1() const { return k * k * f1 * f1 / 4; }
    double q2() const { return alpha * alpha * q1(); }
};

/// Angle in the canonical range [-pi/2, 3pi/2) with its region tag. On the
/// seams theta = +-pi/2 both tags are legal.
class angular_coord {
public:
    /// Reduces theta to the canonical range and picks the region containing
    /// it (the right region owns both seams by default).
    static angular_coord at(double theta) {
        const double t = canonical(theta);
        return {t, t <= half_pi || on_seam(t) ? region::right : region::left};
    }

    /// Explicit region; throws invalid_argument if theta lies strictly inside
    /// the other region.
    static angular_coord on(double theta, region r) {
        const double t = canonical(theta);
        const bool seam = on_seam(t);
        const bool inside_right = t <= half_pi;
        if (!seam && inside_right != (r == region::right))
            throw invalid_argument("theta does not lie in the requested region");
        return {t, r};
    }

    double theta() const { return theta_; }
    region reg() const { return region_; }

    static bool on_seam(double t) {
        return std::abs(t - half_pi) <= 8e-16 * half_pi || std::abs(t + half_pi) <= 8e-16 * half_pi;
    }

private:
    angular_coord(double t, region r) : theta_(t), region_(r) {}

    static double canonical(double theta) {
        if (!std::isfinite(theta)) throw invalid_argument("theta must be finite");
        double t = theta - two_pi * std::floor((theta + half_pi) / two_pi);
        if (t >= 3 * half_pi) t -= two_pi;
        if (t < -half_pi) t = -half_pi;
        return t;
    }

    double theta_;
    region region_;
};

namespace geometry_detail {

/// cos theta with the seam angles mapped to an exact zero.
inline double seam_cos(double theta) { return angular_coord::on_seam(theta) ? 0.0 : std::cos(theta); }

}  // namespace geometry_detail

struct point2 {
    double x = 0;
    double y = 0;
};

/// Cartesian image of (theta, mu). The right branch uses
/// alpha cosh(asinh(sinh mu / alpha)) = sqrt(alpha^2 + sinh^2 mu), so the
/// y coordinate is f1 sinh mu sin theta on both branches.
inline point2 to_cartesian(const angular_coord& theta, double mu, const system_config& cfg) {
    const double s = std::sinh(mu);
    const double c = geometry_detail::seam_cos(theta.theta());
    const double y = cfg.f1 * s * std::sin(theta.theta());
    // at alpha = 1 the root is cosh mu; use it so both branches agree bitwise
    if (theta.reg() == region::right && cfg.alpha != 1)
        return {cfg.f1 * std::sqrt(cfg.alpha * cfg.alpha + s * s) * c, y};
    return {cfg.f1 * std::cosh(mu) * c, y};
}

struct metric_data {
    double g1 = 1;       // angular metric factor
    double g2 = 1;       // radial metric factor
    double h1 = 0;       // angular potential factor, length^2
    double h2 = 0;       // radial potential factor, length^2
    double dlog_g2 = 0;  // g2' / (2 g2)
};

inline metric_data metric_at(const angular_coord& theta, double mu, const system_config& cfg) {
    const double f2half = cfg.f1 * cfg.f1 / 2;
    const double cos2t = std::cos(2 * theta.theta());
    metric_data m;
    if (theta.reg() == region::left) {
        m.h1 = -f2half * cos2t;
        m.h2 = f2half * std::cosh(2 * mu);
        return m;
    }
    const double a2 = cfg.alpha * cfg.alpha;
    const double s = std::sinh(mu);
    const double c = std::cosh(mu);
    const double denom = a2 + s * s;
    m.h1 = -f2half * a2 * cos2t;
    m.h2 = f2half * (std::cosh(2 * mu) + a2 - 1);
    m.g2 = a2 == 1 ? 1.0 : c * c / denom;
    m.dlog_g2 = a2 == 1 ? 0.0 : (a2 - 1) * std::tanh(mu) / denom;
    return m;
}

/// A sampled coordinate line, tagged "theta" or "mu" with its value.
struct polyline {
    std::string label;
    double value = 0;
    std::vector<point2> points;
};

/// Coordinate lines for plotting: n_theta lines of constant theta spread
/// over [-pi/2, 3pi/2) and n_mu lines of constant mu over [0, mu_max].
/// Each line carries `samples` points.
inline std::vector<polyline> grid(const system_config& cfg, int n_theta, int n_mu, double mu_max,
                                  int samples = 65) {
    if (n_theta < 2 || n_mu < 2) throw invalid_argument("grid needs at least two lines of each family");
    if (!(mu_max > 0)) throw invalid_argument("mu_max must be positive");
    if (samples < 2) throw invalid_argument("grid needs at least two samples per line");

    std::vector<polyline> lines;
    lines.reserve(static_cast<std::size_t>(n_theta + n_mu));
    for (int j = 0; j < n_theta; ++j) {
        const auto th = angular_coord::at(-half_pi + two_pi * j / n_theta);
        polyline line{"theta", th.theta(), {}};
        for (int i = 0; i < samples; ++i) line.points.push_back(to_cartesian(th, mu_max * i / (samples - 1), cfg));
        lines.push_back(std::move(line));
    }
    for (int j = 0; j < n_mu; ++j) {
        const double mu = mu_max * j / (n_mu - 1);
        polyline line{"mu", mu, {}};
        for (int i = 0; i < samples; ++i) {
            const double t = -half_pi + two_pi * i / (samples - 1);
            // the closing point sits on the -pi/2 seam from the left branch
            const auto th = i == samples - 1 ? angular_coord::on(-half_pi, region::left) : angular_coord::at(t);
            line.points.push_back(to_cartesian(th, mu, cfg));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

/// |cos| of the angle between the theta and mu tangents, from central
/// differences of to_cartesian. Throws degenerate_point_error when the
/// stencil reaches the focal segment (mu <= step), straddles a seam, or a
/// tangent is numerically zero.
inline double orthogonality_residual(const angular_coord& theta, double mu, const system_config& cfg,
                                     double step = 1e-5) {
    if (!(step > 0)) throw invalid_argument("step must be positive");
    if (mu <= step) throw degenerate_point_error("difference stencil reaches the focal segment mu = 0");
    const double t = theta.theta();
    const double lo = theta.reg() == region::right ? -half_pi : half_pi;
    const double hi = lo + pi;
    if (t - step <= lo || t + step >= hi) throw degenerate_point_error("difference stencil straddles a seam");

    const auto at = [&](double tt, double mm) { return to_cartesian(angular_coord::on(tt, theta.reg()), mm, cfg); };
    const point2 tp = at(t + step, mu), tm = at(t - step, mu);
    const point2 mp = at(t, mu + step), mm = at(t, mu - step);
    const std::array<double, 2> tt{(tp.x - tm.x) / (2 * step), (tp.y - tm.y) / (2 * step)};
    const std::array<double, 2> tmu{(mp.x - mm.x) / (2 * step), (mp.y - mm.y) / (2 * step)};
    const double nt = std::hypot(tt[0], tt[1]);
    const double nm = std::hypot(tmu[0], tmu[1]);
    if (nt < 1e-8 * cfg.f1 || nm < 1e-8 * cfg.f1) throw degenerate_point_error("coordinate tangent vanishes");
    return std::abs(tt[0] * tmu[0] + tt[1] * tmu[1]) / (nt * nm);
}

}  // namespace twoell
