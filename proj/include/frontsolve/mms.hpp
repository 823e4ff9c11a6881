#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "frontsolve/solver.hpp"

namespace frontsolve {

/// Manufactured moving-boundary solution
///
///   s*(t) = s0 + t,
///   u*(t,x) = A(t) (s*^2 - x^2),  v*(t,x) = B(t) (s*^2 - x^2),
///   A(t) = B(t) = 1 / (2 mu (1 + rho) s*(t)),
///
/// chosen so that u*_x(t,0) = 0, u*(t,s*) = 0 and the Stefan condition
/// gives exactly s*' = 2 mu s* (A + rho B) = 1 for every (mu, rho, s*).
/// Feeding the induced sources to the solver turns the closed form into a
/// convergence oracle.
struct MmsSolution {
    ProblemSpec spec;

    double amp_coeff() const { return 1.0 / (2.0 * spec.mu * (1.0 + spec.rho)); }
    double s(double t) const { return spec.s0 + t; }
    double amplitude(double t) const { return amp_coeff() / s(t); }

    double u(double t, double x) const {
        const double ss = s(t);
        return amplitude(t) * (ss * ss - x * x);
    }
    double v(double t, double x) const { return u(t, x); }

    /// Amplitude of the equivalent initial parabola family on [0, s0].
    double initial_amplitude() const { return amp_coeff() * spec.s0; }

    double source_u(double t, double x) const {
        const double ss = s(t);
        const double a = amplitude(t);
        const double a_dot = -amp_coeff() / (ss * ss);
        const double react = std::pow(std::max(u(t, x), 0.0), spec.p);
        return a_dot * (ss * ss - x * x) + 2.0 * a * ss + 2.0 * spec.d1 * a - react;
    }
    double source_v(double t, double x) const {
        const double ss = s(t);
        const double a = amplitude(t);
        const double a_dot = -amp_coeff() / (ss * ss);
        const double react = std::pow(std::max(u(t, x), 0.0), spec.q);
        return a_dot * (ss * ss - x * x) + 2.0 * a * ss + 2.0 * spec.d2 * a - react;
    }

    SourceTerms sources() const {
        return {[sol = *this](double t, double x) { return sol.source_u(t, x); },
                [sol = *this](double t, double x) { return sol.source_v(t, x); }};
    }
};

/// Left side of the manufactured Stefan identity 2 mu s (A + rho B); equals
/// one identically.
inline double stefan_identity(const ProblemSpec& spec, double s_star) {
    MmsSolution sol{spec};
    const double a = sol.amp_coeff() / s_star;
    return 2.0 * spec.mu * s_star * (a + spec.rho * a);
}

struct MmsRunConfig {
    std::vector<std::size_t> levels{32, 64, 128};
    double t_end = 0.25;
    double dt_coeff = 1.0; ///< dt = dt_coeff * dy^2
    bool first_order_front_stencil = false;
};

struct ConvergenceRow {
    std::size_t n = 0;
    double dt = 0.0;
    double err_u = 0.0;
    double err_v = 0.0;
    double err_s = 0.0;
    std::optional<double> order_u;
    std::optional<double> order_v;
    std::optional<double> order_s;
};

using ConvergenceTable = std::vector<ConvergenceRow>;

namespace detail {

/// Step with a fixed dt, landing exactly on t_end.
inline void drive_fixed_dt(Simulator& sim, double dt, double t_end) {
    double t = sim.state().t;
    while (true) {
        const bool landing = t_end - t <= dt;
        const double step = landing ? t_end - t : dt;
        auto pending = sim.prepare(step);
        if (!pending) {
            sim.finish(RunStatus::StepFailure, StopReason::None);
            return;
        }
        sim.commit(std::move(*pending));
        t = sim.state().t;
        if (landing) {
            sim.finish(RunStatus::Completed, StopReason::HorizonReached);
            return;
        }
    }
}

} // namespace detail

/// Run the refinement ladder against the manufactured solution and report
/// max-norm errors of u, v and the front at t_end with observed orders.
inline ConvergenceTable run_mms(const ProblemSpec& spec, const MmsRunConfig& config) {
    spec.validate();
    MmsSolution sol{spec};
    ConvergenceTable table;

    for (std::size_t n : config.levels) {
        const double dy = 1.0 / static_cast<double>(n);
        const double dt = config.dt_coeff * dy * dy;

        SolverConfig sc;
        sc.n = n;
        sc.dt_init = dt;
        sc.dt_max = std::max(dt, sc.dt_max);
        sc.dt_min = std::min(1e-16, dt / 4.0);
        sc.t_end = config.t_end;
        sc.mms = MmsDescriptor{config.dt_coeff};
        sc.first_order_front_stencil = config.first_order_front_stencil;

        InitialData data{FamilyProfile{FamilyKind::Parabola, sol.initial_amplitude()},
                         FamilyProfile{FamilyKind::Parabola, sol.initial_amplitude()}};
        auto prob = validate_spec(spec, data, n);
        Simulator sim(prob, sc, 0.0, 0.0, sol.sources());
        detail::drive_fixed_dt(sim, dt, config.t_end);

        const auto& st = sim.state();
        ConvergenceRow row;
        row.n = n;
        row.dt = dt;
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) * st.dy() * st.s;
            row.err_u = std::max(row.err_u, std::abs(st.w[i] - sol.u(st.t, x)));
            row.err_v = std::max(row.err_v, std::abs(st.z[i] - sol.v(st.t, x)));
        }
        row.err_s = std::abs(st.s - sol.s(st.t));
        if (!table.empty()) {
            const auto& prev = table.back();
            const double ratio = std::log(static_cast<double>(n) / static_cast<double>(prev.n));
            row.order_u = std::log(prev.err_u / row.err_u) / ratio;
            row.order_v = std::log(prev.err_v / row.err_v) / ratio;
            row.order_s = std::log(prev.err_s / row.err_s) / ratio;
        }
        table.push_back(row);
    }
    return table;
}

} // namespace frontsolve
