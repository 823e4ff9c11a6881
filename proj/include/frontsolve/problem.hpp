#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "frontsolve/errors.hpp"

namespace frontsolve {

/// Physical parameters of the coupled system
///
///   u_t - d1 u_xx = v^p,   v_t - d2 v_xx = u^q   on 0 < x < s(t),
///   s'(t) = -mu (u_x + rho v_x)                  at x = s(t),
///
/// with Neumann conditions at x = 0 and homogeneous Dirichlet at the front.
/// All seven fields are strictly positive.
struct ProblemSpec {
    double d1 = 1.0;
    double d2 = 1.0;
    double p = 1.0;
    double q = 1.0;
    double mu = 1.0;
    double rho = 1.0;
    double s0 = 1.0;

    /// Both reactions are locally Lipschitz iff p >= 1 and q >= 1. Below
    /// that the problem only has a maximal solution, approached through
    /// the shifted cascade.
    bool lipschitz() const { return p >= 1.0 && q >= 1.0; }

    void validate() const {
        if (!(d1 > 0.0)) throw NonPositiveParameter("d1");
        if (!(d2 > 0.0)) throw NonPositiveParameter("d2");
        if (!(p > 0.0)) throw NonPositiveParameter("p");
        if (!(q > 0.0)) throw NonPositiveParameter("q");
        if (!(mu > 0.0)) throw NonPositiveParameter("mu");
        if (!(rho > 0.0)) throw NonPositiveParameter("rho");
        if (!(s0 > 0.0)) throw NonPositiveParameter("s0");
    }

    bool operator==(const ProblemSpec&) const = default;
};

enum class FamilyKind { Cosine, Parabola };

/// Closed-form initial profile on [0, s0]. Both families satisfy the
/// compatibility conditions exactly: positive on [0, s0), zero value at
/// s0, zero slope at 0.
struct FamilyProfile {
    FamilyKind kind = FamilyKind::Parabola;
    double amplitude = 1.0;
};

/// Raw node values on the uniform grid x_i = i * s0 / N.
using SampledProfile = std::vector<double>;

using Profile = std::variant<FamilyProfile, SampledProfile>;

struct InitialData {
    Profile u0;
    Profile v0;
};

inline FamilyKind family_from_name(const std::string& name) {
    if (name == "cosine") return FamilyKind::Cosine;
    if (name == "parabola") return FamilyKind::Parabola;
    throw UnknownFamily(name);
}

inline double eval_family(const FamilyProfile& f, double x, double s0) {
    switch (f.kind) {
        case FamilyKind::Cosine:
            return f.amplitude * std::cos(std::numbers::pi * x / (2.0 * s0));
        case FamilyKind::Parabola:
            return f.amplitude * (1.0 - (x / s0) * (x / s0));
    }
    throw UnknownFamily("unreachable");
}

/// Sample a named family at N+1 uniform nodes on [0, s0]. The endpoint is
/// set to exactly zero rather than trusting cos(pi/2) to round to it.
inline SampledProfile make_initial_family(FamilyKind kind, double amplitude,
                                          double s0, std::size_t n) {
    if (!(amplitude > 0.0)) throw NonPositiveParameter("amplitude");
    if (!(s0 > 0.0)) throw NonPositiveParameter("s0");
    if (n < 2) throw GridTooCoarse("initial family needs N >= 2");
    FamilyProfile f{kind, amplitude};
    SampledProfile out(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = eval_family(f, static_cast<double>(i) * s0 / static_cast<double>(n), s0);
    }
    out[n] = 0.0;
    return out;
}

inline SampledProfile make_initial_family(const std::string& name, double amplitude,
                                          double s0, std::size_t n) {
    return make_initial_family(family_from_name(name), amplitude, s0, n);
}

namespace detail {

/// Compatibility checks for raw samples: strictly positive before the
/// front, exactly zero at it, and a second-order one-sided derivative at
/// x = 0 that vanishes relative to the profile scale. Families are exempt
/// from the discrete slope test because they satisfy the conditions at the
/// analytic level; the sampled stencil carries its own O(dx^4) truncation.
inline void check_sampled(const SampledProfile& f, const std::string& label) {
    if (f.size() < 3) {
        throw IncompatibleInitialData(label + " needs at least 3 samples");
    }
    const std::size_t n = f.size() - 1;
    if (f[n] != 0.0) {
        throw IncompatibleInitialData(label + "(s0) != 0", static_cast<long>(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(f[i] > 0.0)) {
            throw IncompatibleInitialData(label + " not strictly positive before the front",
                                          static_cast<long>(i));
        }
    }
    const double stencil = -3.0 * f[0] + 4.0 * f[1] - f[2];
    const double scale = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
    if (std::abs(stencil) > 1e-10 * scale) {
        throw IncompatibleInitialData(label + " slope at x = 0 not zero", 0);
    }
}

} // namespace detail

/// A problem normalized for the solver: parameters validated and both
/// profiles reduced to samples on the requested grid.
struct ValidatedProblem {
    ProblemSpec spec;
    SampledProfile u0;
    SampledProfile v0;
};

/// Validate parameters and initial data, sampling closed-form families
/// onto the N+1-node grid so downstream code sees one representation.
/// Raw samples must already live on that grid.
inline ValidatedProblem validate_spec(const ProblemSpec& spec, const InitialData& data,
                                      std::size_t n) {
    spec.validate();
    if (n < 2) throw GridTooCoarse("validation grid needs N >= 2");

    auto normalize = [&](const Profile& prof, const std::string& label) -> SampledProfile {
        if (const auto* fam = std::get_if<FamilyProfile>(&prof)) {
            if (!(fam->amplitude > 0.0)) throw NonPositiveParameter("amplitude");
            return make_initial_family(fam->kind, fam->amplitude, spec.s0, n);
        }
        const auto& samples = std::get<SampledProfile>(prof);
        if (samples.size() != n + 1) {
            throw IncompatibleInitialData(label + " sample count " +
                                          std::to_string(samples.size()) +
                                          " does not match grid size " + std::to_string(n + 1));
        }
        detail::check_sampled(samples, label);
        return samples;
    };

    return {spec, normalize(data.u0, "u0"), normalize(data.v0, "v0")};
}

/// Discrete sup norm.
inline double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Discrete C1 norm ||f||_inf + ||f'||_inf on the uniform grid over [0, s0],
/// with the derivative taken by central differences inside and one-sided
/// second-order stencils at the ends.
inline double c1_norm(const std::vector<double>& f, double s0) {
    const std::size_t n = f.size() - 1;
    const double dx = s0 / static_cast<double>(n);
    double fmax = sup_norm(f);
    double dmax = std::abs(-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    for (std::size_t i = 1; i < n; ++i) {
        dmax = std::max(dmax, std::abs(f[i + 1] - f[i - 1]) / (2.0 * dx));
    }
    dmax = std::max(dmax, std::abs(3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dx));
    return fmax + dmax;
}

} // namespace frontsolve
