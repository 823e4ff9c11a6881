#pragma once

#include <optional>
#include <vector>

#include "frontsolve/compare.hpp"
#include "frontsolve/solver.hpp"

namespace frontsolve {

/// Effective shift feeding the step controller for a cascade level:
/// the 1/n of the active level while it runs, and the last finite level's
/// shift for a follow-up unshifted run, where it enters stiffness control
/// only, not the equations.
inline double shift_floor(int n) {
    if (n <= 0) throw ConfigError("cascade level must be positive");
    return 1.0 / static_cast<double>(n);
}

struct CascadeResult {
    std::vector<int> schedule;
    std::vector<Trajectory> levels; ///< one per schedule entry, in order
    /// Shared-sequence ordering stats per adjacent pair (level k+1 as the
    /// lower object against level k), accumulated over every shared step.
    std::vector<PairOrderingStats> ordering;
    /// Sup over shared times of |level k - level k+1| per adjacent pair.
    std::vector<double> consecutive_diffs;
    bool converged = false;
    std::optional<double> tol;
    bool delegated = false; ///< Lipschitz regime: plain simulate was used

    const Trajectory& limit() const { return levels.back(); }
};

/// Solve the shifted problems with shifts (1/n, 1/n) down the schedule on
/// a common grid and shared step sequence, verifying the monotone
/// component-wise ordering of successive levels at every shared step. The
/// last level is the limit estimate. Ordering deficits beyond
/// ordering_tol * sup throw; convergence against `tol` (when given) is
/// only reported here, never thrown.
inline CascadeResult run_cascade(const ProblemSpec& spec, const InitialData& data,
                                 const SolverConfig& config, std::vector<int> schedule = {1, 2, 4, 8, 16},
                                 std::optional<double> tol = 1e-4,
                                 double ordering_tol = 1e-6) {
    spec.validate();
    config.validate();

    CascadeResult result;
    result.tol = tol;

    if (spec.lipschitz()) {
        result.delegated = true;
        result.schedule = {0};
        result.levels.push_back(simulate(spec, data, config));
        result.levels.back().warnings.push_back(
            "Lipschitz regime (p >= 1 and q >= 1): cascade delegated to a single unshifted run");
        result.converged = true;
        return result;
    }

    if (schedule.empty()) throw ConfigError("cascade schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] <= 0) throw ConfigError("cascade levels must be positive");
        if (i > 0 && schedule[i] <= schedule[i - 1]) {
            throw ConfigError("cascade schedule must be strictly increasing");
        }
    }
    result.schedule = schedule;

    const auto prob = validate_spec(spec, data, config.n);
    std::vector<Simulator> sims;
    sims.reserve(schedule.size());
    for (int n : schedule) {
        const double shift = shift_floor(n);
        sims.emplace_back(prob, config, shift, shift);
    }

    result.ordering.resize(sims.size() > 0 ? sims.size() - 1 : 0);
    auto observe = [&result, ordering_tol](std::span<const Simulator> group) {
        for (std::size_t k = 0; k + 1 < group.size(); ++k) {
            // Larger n means smaller shift, hence the smaller solution.
            check_state_ordering(group[k + 1].state(), group[k].state(), ordering_tol,
                                 result.ordering[k]);
        }
    };
    drive_lockstep(std::span<Simulator>(sims.data(), sims.size()), config, observe);

    for (auto& sim : sims) {
        result.levels.push_back(std::move(sim).take_trajectory());
    }
    for (auto& stats : result.ordering) {
        result.consecutive_diffs.push_back(stats.max_abs_diff);
    }
    for (std::size_t k = 0; k + 1 < result.levels.size(); ++k) {
        if (auto& v = result.ordering[k].violation) {
            throw OrderingViolation(v->time, v->node, v->component, v->magnitude);
        }
    }
    if (tol && !result.consecutive_diffs.empty()) {
        result.converged = result.consecutive_diffs.back() < *tol;
    }
    return result;
}

/// run_cascade with the convergence tolerance made a hard requirement.
inline CascadeResult run_cascade_strict(const ProblemSpec& spec, const InitialData& data,
                                        const SolverConfig& config,
                                        std::vector<int> schedule = {1, 2, 4, 8, 16},
                                        double tol = 1e-4, double ordering_tol = 1e-6) {
    auto result = run_cascade(spec, data, config, std::move(schedule), tol, ordering_tol);
    if (!result.delegated && !result.converged) {
        throw NoConvergence(result.consecutive_diffs.empty() ? 0.0
                                                             : result.consecutive_diffs.back(),
                            tol);
    }
    return result;
}

} // namespace frontsolve
