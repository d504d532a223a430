#pragma once

#include <stdexcept>
#include <string>

namespace twoell {

/// Base of every error raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejected argument (out-of-range tolerance, alpha <= 0, bad counts...).
struct invalid_argument : error {
    using error::error;
};

/// The adaptive integrator could not make progress.
struct step_underflow_error : error {
    using error::error;
};

/// A state was applied to a propagator that starts elsewhere.
struct state_mismatch_error : error {
    using error::error;
};

/// Coordinate tangents vanish or the difference stencil leaves the chart.
struct degenerate_point_error : error {
    using error::error;
};

/// A root or series failed to converge.
struct convergence_error : error {
    using error::error;
};

/// Eigenfunction requested at a (lambda, q1) that is not on the curve.
struct off_curve_error : error {
    using error::error;
};

/// Two-dimensional null space and no parity member was requested.
struct degeneracy_error : error {
    using error::error;
};

/// Continuation could not follow a characteristic curve.
struct curve_lost_error : error {
    using error::error;
};

}  // namespace twoell
