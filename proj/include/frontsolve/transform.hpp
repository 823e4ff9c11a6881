#pragma once

#include <cstddef>
#include <span>

#include "frontsolve/errors.hpp"

namespace frontsolve {

/// Front-fixing change of variables y = x / s(t) and the coefficient
/// functions it induces. All solver arithmetic happens on the unit
/// interval; physical-space quantities are reconstructed on demand.

/// Map a physical position x in [0, s] to y in [0, 1].
inline double to_fixed(double x, double s) {
    if (s <= 0.0) throw OutOfDomain("front position must be positive");
    if (x < 0.0 || x > s) throw OutOfDomain("x outside [0, s]");
    return x / s;
}

/// Inverse map: y in [0, 1] back to x = y * s.
inline double from_fixed(double y, double s) {
    if (s <= 0.0) throw OutOfDomain("front position must be positive");
    if (y < 0.0 || y > 1.0) throw OutOfDomain("y outside [0, 1]");
    return y * s;
}

/// Diffusion scaling and advection coefficient of the fixed-domain system:
/// f = s^-2, g = y s' / s.
struct Coefficients {
    double f;
    double g;
};

inline Coefficients coefficients(double s, double s_prime, double y) {
    if (s <= 0.0) throw OutOfDomain("front position must be positive");
    return {1.0 / (s * s), y * s_prime / s};
}

/// Physical gradient from the fixed-domain slope: u_x = w_y / s.
inline double physical_gradient(double w_y, double s) {
    if (s <= 0.0) throw OutOfDomain("front position must be positive");
    return w_y / s;
}

/// One-sided second-order slope at y = 1 for a profile with a homogeneous
/// Dirichlet value at the last node. Exact for quadratics, which is what
/// the barrier profiles used by the analysis are.
inline double boundary_slope(std::span<const double> profile, double dy) {
    const std::size_t n = profile.size();
    if (n < 3) throw GridTooCoarse("boundary_slope needs at least 3 nodes");
    return (3.0 * profile[n - 1] - 4.0 * profile[n - 2] + profile[n - 3]) / (2.0 * dy);
}

/// Same stencil reduced to first order: (p[N] - p[N-1]) / dy. Kept as a
/// verification fixture so order checks can detect a degraded front stencil.
inline double boundary_slope_first_order(std::span<const double> profile, double dy) {
    const std::size_t n = profile.size();
    if (n < 2) throw GridTooCoarse("boundary_slope needs at least 2 nodes");
    return (profile[n - 1] - profile[n - 2]) / dy;
}

} // namespace frontsolve
