#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "frontsolve/state.hpp"

namespace frontsolve {

/// Linear interpolation of an N+1-node profile on the unit interval.
inline double interp_profile(const std::vector<double>& profile, double y) {
    const std::size_t n = profile.size() - 1;
    const double pos = std::clamp(y, 0.0, 1.0) * static_cast<double>(n);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= n) return profile[n];
    const double frac = pos - static_cast<double>(i);
    return profile[i] + frac * (profile[i + 1] - profile[i]);
}

struct OrderingViolationInfo {
    double time = 0.0;
    long node = -1;
    std::string component;
    double magnitude = 0.0;
    double band = 0.0;
};

/// Accumulated result of comparing a (lower, upper) pair of states over a
/// run. The comparison lives in physical space on [0, s_lower(t)], where
/// the ordering conclusions are stated; the upper profile is interpolated
/// at the lower run's physical nodes when the fronts differ.
struct PairOrderingStats {
    double worst_margin = std::numeric_limits<double>::infinity();
    double max_abs_diff = 0.0; ///< sup of |upper - lower| over all checks
    std::optional<OrderingViolationInfo> violation;
    std::size_t compared_times = 0;

    bool holds() const { return !violation.has_value(); }
};

/// Compare one pair of states at a shared time, requiring upper >= lower
/// component-wise within tol_factor * sup per component. The first
/// beyond-band deficit is kept as the violation, preferring the largest.
inline void check_state_ordering(const FixedDomainState& lower, const FixedDomainState& upper,
                                 double tol_factor, PairOrderingStats& acc) {
    acc.compared_times += 1;

    const double band_s = tol_factor * std::max(lower.s, upper.s);
    const double margin_s = upper.s - lower.s;
    acc.worst_margin = std::min(acc.worst_margin, margin_s);
    acc.max_abs_diff = std::max(acc.max_abs_diff, std::abs(margin_s));
    if (margin_s < -band_s) {
        OrderingViolationInfo v{lower.t, -1, "s", -margin_s, band_s};
        if (!acc.violation || v.magnitude > acc.violation->magnitude) acc.violation = v;
    }

    auto check_field = [&](const std::vector<double>& lo, const std::vector<double>& hi,
                           double sup_lo, double sup_hi, const char* name) {
        const double band = tol_factor * std::max(sup_lo, sup_hi);
        const std::size_t n = lo.size() - 1;
        const double dy = 1.0 / static_cast<double>(n);
        // Equal fronts mean the grids coincide; comparing nodes directly
        // keeps the reflexive pair at exactly zero margin.
        const bool same_front = lower.s == upper.s;
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = static_cast<double>(j) * dy * lower.s;
            const double hi_val = same_front ? hi[j] : interp_profile(hi, x / upper.s);
            const double margin = hi_val - lo[j];
            acc.worst_margin = std::min(acc.worst_margin, margin);
            acc.max_abs_diff = std::max(acc.max_abs_diff, std::abs(margin));
            if (margin < -band) {
                OrderingViolationInfo v{lower.t, static_cast<long>(j), name, -margin, band};
                if (!acc.violation || v.magnitude > acc.violation->magnitude) acc.violation = v;
            }
        }
    };
    check_field(lower.w, upper.w, lower.sup_w(), upper.sup_w(), "u");
    check_field(lower.z, upper.z, lower.sup_z(), upper.sup_z(), "v");
}

} // namespace frontsolve
