#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frontsolve/errors.hpp"
#include "frontsolve/problem.hpp"
#include "frontsolve/state.hpp"
#include "frontsolve/transform.hpp"
#include "frontsolve/tridiag.hpp"

namespace frontsolve {

/// Marks a run as manufactured: sources from mms.hpp are injected and the
/// step is fixed at dt_coeff * dy^2 instead of the adaptive controller.
struct MmsDescriptor {
    double dt_coeff = 1.0;
};

struct SolverConfig {
    std::size_t n = 64;          ///< spatial intervals; grid has n+1 nodes
    double dt_init = 1e-3;       ///< cap on the first step
    double dt_min = 1e-12;       ///< below this the step has collapsed
    double dt_max = 0.1;
    double cfl_advection = 0.5;
    double cfl_reaction = 0.2;
    double t_end = 10.0;
    double blowup_threshold = 1e8;
    std::vector<double> snapshot_times;
    std::optional<MmsDescriptor> mms;

    /// Stand-in shift used only inside the step controller when p < 1 or
    /// q < 1 and the equations themselves run unshifted, so the reaction
    /// stiffness estimate stays finite. Matches the last level of the
    /// default cascade schedule.
    double stiffness_shift = 1.0 / 16.0;

    /// Verification fixture: degrade the front stencil to first order.
    bool first_order_front_stencil = false;

    void validate() const {
        if (n < 8) throw ConfigError("N must be >= 8");
        if (!(dt_min > 0.0)) throw ConfigError("dt_min must be positive");
        if (!(dt_min <= dt_init && dt_init <= dt_max)) {
            throw ConfigError("require 0 < dt_min <= dt_init <= dt_max");
        }
        if (!(blowup_threshold > 0.0)) throw ConfigError("blowup_threshold must be positive");
        if (!(cfl_advection > 0.0) || !(cfl_reaction > 0.0)) {
            throw ConfigError("CFL factors must be positive");
        }
        if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    }
};

/// Analytic source terms added to the right-hand sides (manufactured
/// runs). Evaluated at the old time level at physical x = y * s.
struct SourceTerms {
    std::function<double(double t, double x)> su;
    std::function<double(double t, double x)> sv;
};

struct StepOptions {
    const SourceTerms* sources = nullptr;
    bool first_order_front_stencil = false;
};

struct StepStats {
    std::uint32_t clamps = 0;
    bool speed_floored = false;
};

/// Unfloored Stefan speed -mu/s * (w_y(1) + rho z_y(1)) from the discrete
/// boundary slopes.
inline double front_speed_raw(const FixedDomainState& state, const ProblemSpec& spec,
                              bool first_order = false) {
    const double dy = state.dy();
    const double wy = first_order ? boundary_slope_first_order(state.w, dy)
                                  : boundary_slope(state.w, dy);
    const double zy = first_order ? boundary_slope_first_order(state.z, dy)
                                  : boundary_slope(state.z, dy);
    return -(spec.mu / state.s) * (wy + spec.rho * zy);
}

/// One IMEX step: the front is advanced with the lagged Stefan speed,
/// diffusion is implicit (backward Euler, Neumann mirror at y = 0,
/// Dirichlet 0 at y = 1) with f = s_new^-2, and advection plus reactions
/// are explicit at the old level. Values in (-1e-14 * sup, 0) are clamped
/// to zero and counted; anything more negative rejects the step.
inline FixedDomainState advance_step(const FixedDomainState& state, const ProblemSpec& spec,
                                     double dt, const StepOptions& opts = {},
                                     StepStats* stats = nullptr) {
    const std::size_t n = state.intervals();
    const double dy = state.dy();

    double sp = front_speed_raw(state, spec, opts.first_order_front_stencil);
    const bool floored = sp < 0.0;
    if (floored) sp = 0.0;
    const double s_new = state.s + dt * sp;

    FixedDomainState next;
    next.t = state.t + dt;
    next.s = s_new;
    next.shift_a = state.shift_a;
    next.shift_b = state.shift_b;
    next.w.assign(n + 1, 0.0);
    next.z.assign(n + 1, 0.0);

    const double f_new = 1.0 / (s_new * s_new);
    const double lam_w = dt * spec.d1 * f_new / (dy * dy);
    const double lam_z = dt * spec.d2 * f_new / (dy * dy);

    std::vector<double> rhs_w(n), rhs_z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(i) * dy;
        const double g = y * sp / s_new;
        const double dw = (i == 0) ? 0.0 : (state.w[i + 1] - state.w[i - 1]) / (2.0 * dy);
        const double dz = (i == 0) ? 0.0 : (state.z[i + 1] - state.z[i - 1]) / (2.0 * dy);
        double fw = std::pow(state.z[i] + state.shift_b, spec.p);
        double fz = std::pow(state.w[i] + state.shift_a, spec.q);
        if (opts.sources) {
            const double x = y * state.s;
            fw += opts.sources->su(state.t, x);
            fz += opts.sources->sv(state.t, x);
        }
        rhs_w[i] = state.w[i] + dt * (g * dw + fw);
        rhs_z[i] = state.z[i] + dt * (g * dz + fz);
    }

    std::vector<double> scratch;
    solve_diffusion_tridiag(lam_w, rhs_w, std::span<double>(next.w.data(), n), scratch);
    solve_diffusion_tridiag(lam_z, rhs_z, std::span<double>(next.z.data(), n), scratch);

    if (!std::isfinite(s_new)) throw NonFiniteValue("front position");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(next.w[i]) || !std::isfinite(next.z[i])) {
            throw NonFiniteValue("profile at node " + std::to_string(i));
        }
    }

    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) sup = std::max({sup, next.w[i], next.z[i]});
    const double band = 1e-14 * sup;
    std::uint32_t clamps = 0;
    auto clamp = [&](std::vector<double>& field, const char* name) {
        for (std::size_t i = 0; i < n; ++i) {
            if (field[i] < 0.0) {
                if (field[i] < -band) {
                    throw StepRejected(field[i], static_cast<long>(i), name);
                }
                field[i] = 0.0;
                ++clamps;
            }
        }
    };
    clamp(next.w, "w");
    clamp(next.z, "z");

    next.s_prime = std::max(0.0, front_speed_raw(next, spec, opts.first_order_front_stencil));
    if (stats) {
        stats->clamps = clamps;
        stats->speed_floored = floored;
    }
    return next;
}

/// Raw stability-limited step: min of dt_max, the advection CFL
/// cfl * dy * s / s', and cfl_reaction / L with L the explicit-reaction
/// stiffness estimate. Sub-unit exponents with zero equation shift use
/// the configured stand-in shift so L stays finite.
inline double stability_dt(const FixedDomainState& state, const ProblemSpec& spec,
                           const SolverConfig& config) {
    double dt = config.dt_max;
    const double sp = std::max(state.s_prime, 0.0);
    if (sp > 0.0) {
        dt = std::min(dt, config.cfl_advection * state.dy() * state.s / sp);
    }
    const double eff_b =
        state.shift_b > 0.0 ? state.shift_b : (spec.p < 1.0 ? config.stiffness_shift : 0.0);
    const double eff_a =
        state.shift_a > 0.0 ? state.shift_a : (spec.q < 1.0 ? config.stiffness_shift : 0.0);
    const double lw = spec.p * std::pow(state.sup_z() + eff_b, spec.p - 1.0);
    const double lz = spec.q * std::pow(state.sup_w() + eff_a, spec.q - 1.0);
    const double stiffness = std::max({lw, lz, 1.0});
    dt = std::min(dt, config.cfl_reaction / stiffness);
    return dt;
}

/// Stability step with the collapse threshold enforced.
inline double choose_dt(const FixedDomainState& state, const ProblemSpec& spec,
                        const SolverConfig& config) {
    const double dt = stability_dt(state, spec, config);
    if (dt < config.dt_min) throw StepCollapse(dt, config.dt_min);
    return dt;
}

/// Owns one run: state, trajectory bookkeeping, and transactional
/// stepping so several simulators can be advanced in lockstep.
class Simulator {
public:
    struct Pending {
        FixedDomainState next;
        StepStats stats;
    };

    Simulator(const ValidatedProblem& prob, SolverConfig config, double shift_a = 0.0,
              double shift_b = 0.0, std::optional<SourceTerms> sources = std::nullopt)
        : spec_(prob.spec), config_(std::move(config)), sources_(std::move(sources)) {
        config_.validate();
        if (prob.u0.size() != config_.n + 1 || prob.v0.size() != config_.n + 1) {
            throw ConfigError("initial data does not match the solver grid");
        }
        state_.t = 0.0;
        state_.s = spec_.s0;
        state_.w = prob.u0;
        state_.z = prob.v0;
        state_.shift_a = shift_a;
        state_.shift_b = shift_b;
        state_.s_prime = std::max(0.0, front_speed_raw(state_, spec_, stencil_fixture()));
        traj_.spec = spec_;
        if (!spec_.lipschitz() && shift_a == 0.0 && shift_b == 0.0 && !sources_) {
            traj_.warnings.push_back("maximal-solution approximation; prefer cascade");
        }
        record();
        snapshot();
    }

    const FixedDomainState& state() const { return state_; }
    const ProblemSpec& spec() const { return spec_; }
    const SolverConfig& config() const { return config_; }
    const Trajectory& trajectory() const { return traj_; }
    Trajectory take_trajectory() && { return std::move(traj_); }

    double stability() const { return stability_dt(state_, spec_, config_); }

    /// Compute the candidate next state; nullopt when the step was
    /// rejected for a beyond-round-off negative value.
    std::optional<Pending> prepare(double dt) const {
        StepOptions opts{sources_ ? &*sources_ : nullptr, stencil_fixture()};
        try {
            Pending p;
            p.next = advance_step(state_, spec_, dt, opts, &p.stats);
            return p;
        } catch (const StepRejected&) {
            return std::nullopt;
        }
    }

    void commit(Pending&& p) {
        state_ = std::move(p.next);
        traj_.clamp_events += p.stats.clamps;
        traj_.node_updates += 2 * static_cast<std::uint64_t>(config_.n);
        record();
    }

    bool threshold_crossed() const {
        return state_.sup_w() >= config_.blowup_threshold ||
               state_.sup_z() >= config_.blowup_threshold;
    }

    void snapshot() {
        if (traj_.snapshots.empty() || traj_.snapshots.back().t != state_.t) {
            traj_.snapshots.push_back(state_);
        }
    }

    void finish(RunStatus status, StopReason reason) {
        traj_.status = status;
        traj_.stop_reason = reason;
        snapshot();
    }

private:
    bool stencil_fixture() const { return config_.first_order_front_stencil; }

    void record() {
        traj_.times.push_back(state_.t);
        traj_.fronts.push_back(state_.s);
        traj_.front_speeds.push_back(state_.s_prime);
        traj_.sup_u.push_back(state_.sup_w());
        traj_.sup_v.push_back(state_.sup_z());
        traj_.clamp_cumulative.push_back(traj_.clamp_events);
    }

    ProblemSpec spec_;
    SolverConfig config_;
    std::optional<SourceTerms> sources_;
    FixedDomainState state_;
    Trajectory traj_;
};

/// Called on the initial states and after every committed shared step.
using LockstepObserver = std::function<void(std::span<const Simulator>)>;

/// Advance a group of simulators on one shared step sequence. Each step
/// uses the most restrictive stability bound across the group, so the
/// sequence is stable for every member and pointwise comparisons between
/// members see identical time grids. Stops at the shared horizon, on a
/// sup-norm threshold crossing, or when the step collapses.
inline void drive_lockstep(std::span<Simulator> sims, const SolverConfig& shared,
                           const LockstepObserver& observe = {}) {
    std::vector<double> events;
    for (double t : shared.snapshot_times) {
        if (t > 0.0 && t < shared.t_end) events.push_back(t);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    events.push_back(shared.t_end);

    double t = sims[0].state().t;
    std::size_t ev = 0;
    while (ev < events.size() && events[ev] <= t) ++ev;
    bool first_step = true;

    auto finish_all = [&](RunStatus st, StopReason r) {
        for (auto& sim : sims) sim.finish(st, r);
    };

    if (observe) observe(sims);

    std::vector<std::optional<Simulator::Pending>> pending(sims.size());
    while (ev < events.size()) {
        const double target = events[ev];

        double dt = std::numeric_limits<double>::infinity();
        for (const auto& sim : sims) dt = std::min(dt, sim.stability());
        if (first_step) dt = std::min(dt, shared.dt_init);
        if (dt < shared.dt_min) {
            finish_all(RunStatus::BlowupDetected, StopReason::DtCollapse);
            return;
        }
        bool landing = false;
        if (target - t <= dt) {
            dt = target - t;
            landing = true;
        }

        for (;;) {
            bool all_ok = true;
            for (std::size_t i = 0; i < sims.size(); ++i) {
                pending[i] = sims[i].prepare(dt);
                if (!pending[i]) {
                    all_ok = false;
                    break;
                }
            }
            if (all_ok) break;
            dt *= 0.5;
            landing = false;
            if (dt < shared.dt_min) {
                finish_all(RunStatus::BlowupDetected, StopReason::DtCollapse);
                return;
            }
        }
        for (std::size_t i = 0; i < sims.size(); ++i) {
            sims[i].commit(std::move(*pending[i]));
        }
        first_step = false;
        t = sims[0].state().t;
        if (observe) observe(sims);

        bool crossed = false;
        for (auto& sim : sims) crossed = crossed || sim.threshold_crossed();
        if (crossed) {
            // The shared step sequence ends when any member crosses; only
            // the members that actually crossed are marked as blow-ups.
            for (auto& sim : sims) {
                if (sim.threshold_crossed()) {
                    sim.finish(RunStatus::BlowupDetected, StopReason::ThresholdCrossed);
                } else {
                    sim.finish(RunStatus::Running, StopReason::None);
                }
            }
            return;
        }
        if (landing) {
            for (auto& sim : sims) sim.snapshot();
            ++ev;
            if (ev == events.size()) {
                finish_all(RunStatus::Completed, StopReason::HorizonReached);
                return;
            }
        }
    }
}

struct Shifts {
    double a = 0.0;
    double b = 0.0;
};

/// Integrate the fixed-domain system from t = 0. Stops at t_end, at a
/// sup-norm threshold crossing, or on step collapse; the trajectory status
/// records which. NonFiniteValue propagates.
inline Trajectory simulate(const ProblemSpec& spec, const InitialData& data,
                           const SolverConfig& config, Shifts shifts = {}) {
    config.validate();
    auto prob = validate_spec(spec, data, config.n);
    Simulator sim(prob, config, shifts.a, shifts.b);
    drive_lockstep(std::span<Simulator>(&sim, 1), config);
    return std::move(sim).take_trajectory();
}

} // namespace frontsolve
