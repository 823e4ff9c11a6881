#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "frontsolve/analysis.hpp"
#include "frontsolve/cascade.hpp"
#include "frontsolve/compare.hpp"
#include "frontsolve/mms.hpp"
#include "frontsolve/solver.hpp"

namespace frontsolve {

struct RunSetup {
    ProblemSpec spec;
    InitialData data;
    Shifts shifts;
};

/// Which hypothesis set admits the pair. StrictFront is the
/// strictly-larger-front case, StrictShifts the both-shifts-strict case,
/// PositiveShifts its relaxation with positive lower shifts and one strict
/// inequality, StrictData the ordered-solutions case with strictly larger
/// upper data on a shared front.
enum class PairVariant { Reflexive, StrictFront, StrictShifts, PositiveShifts, StrictData };

inline std::string to_string(PairVariant v) {
    switch (v) {
        case PairVariant::Reflexive: return "reflexive";
        case PairVariant::StrictFront: return "strict_front";
        case PairVariant::StrictShifts: return "strict_shifts";
        case PairVariant::PositiveShifts: return "positive_shifts";
        case PairVariant::StrictData: return "strict_data";
    }
    return "unknown";
}

struct OrderingReport {
    PairVariant variant = PairVariant::Reflexive;
    bool holds = false;
    double worst_margin = 0.0;
    std::optional<OrderingViolationInfo> worst_violation;
    double tol_factor = 1e-6;
    std::size_t compared_times = 0;
    Trajectory lower;
    Trajectory upper;
    std::string note;
};

/// Pure ordering re-check over the stored snapshots of two trajectories at
/// matched times. Never modifies the trajectories; rerunning is idempotent.
inline PairOrderingStats check_ordering(const Trajectory& lower, const Trajectory& upper,
                                        double tol_factor = 1e-6) {
    PairOrderingStats acc;
    std::size_t j = 0;
    for (const auto& lo : lower.snapshots) {
        while (j < upper.snapshots.size() && upper.snapshots[j].t < lo.t) ++j;
        if (j == upper.snapshots.size()) break;
        if (upper.snapshots[j].t == lo.t) {
            check_state_ordering(lo, upper.snapshots[j], tol_factor, acc);
        }
    }
    return acc;
}

/// Run a (lower, upper) pair on a shared step sequence and assert the
/// component-wise ordering of fronts and fields at every shared time, in
/// physical space on [0, s_lower(t)]. Preconditions mirror the comparison
/// hypotheses; an inadmissible pair throws HypothesisViolation. The
/// report carries the worst margin and any beyond-band violation.
inline OrderingReport compare_ordered_runs(const RunSetup& lower, const RunSetup& upper,
                                           const SolverConfig& config,
                                           double tol_factor = 1e-6) {
    config.validate();
    lower.spec.validate();
    upper.spec.validate();

    if (lower.spec.d1 != upper.spec.d1 || lower.spec.d2 != upper.spec.d2 ||
        lower.spec.p != upper.spec.p || lower.spec.q != upper.spec.q ||
        lower.spec.mu != upper.spec.mu || lower.spec.rho != upper.spec.rho) {
        throw HypothesisViolation("pair must share (d1, d2, p, q, mu, rho)");
    }
    if (lower.spec.s0 > upper.spec.s0) {
        throw HypothesisViolation("lower s0 exceeds upper s0");
    }
    if (lower.shifts.a > upper.shifts.a || lower.shifts.b > upper.shifts.b) {
        throw HypothesisViolation("lower shifts exceed upper shifts");
    }

    const auto lo_prob = validate_spec(lower.spec, lower.data, config.n);
    const auto up_prob = validate_spec(upper.spec, upper.data, config.n);

    // Initial-data ordering at matched physical positions.
    FixedDomainState lo0, up0;
    lo0.s = lower.spec.s0;
    lo0.w = lo_prob.u0;
    lo0.z = lo_prob.v0;
    up0.s = upper.spec.s0;
    up0.w = up_prob.u0;
    up0.z = up_prob.v0;
    PairOrderingStats data_stats;
    check_state_ordering(lo0, up0, tol_factor, data_stats);
    if (data_stats.violation) {
        throw HypothesisViolation("initial data not ordered: " + data_stats.violation->component +
                                  " at node " + std::to_string(data_stats.violation->node));
    }

    const bool same_shifts =
        lower.shifts.a == upper.shifts.a && lower.shifts.b == upper.shifts.b;
    const bool reflexive = lower.spec == upper.spec && same_shifts &&
                           lo_prob.u0 == up_prob.u0 && lo_prob.v0 == up_prob.v0;
    const bool data_strict = data_stats.max_abs_diff > 0.0;

    PairVariant variant;
    if (reflexive) {
        variant = PairVariant::Reflexive;
    } else if (lower.spec.s0 < upper.spec.s0) {
        variant = PairVariant::StrictFront;
    } else if (lower.shifts.a < upper.shifts.a && lower.shifts.b < upper.shifts.b) {
        variant = PairVariant::StrictShifts;
    } else if (lower.shifts.a > 0.0 && lower.shifts.b > 0.0 &&
               (lower.shifts.a < upper.shifts.a || lower.shifts.b < upper.shifts.b)) {
        variant = PairVariant::PositiveShifts;
    } else if (data_strict && same_shifts) {
        variant = PairVariant::StrictData;
    } else {
        throw HypothesisViolation("no admissible strict separation between the runs");
    }

    std::vector<Simulator> sims;
    sims.reserve(2);
    sims.emplace_back(lo_prob, config, lower.shifts.a, lower.shifts.b);
    sims.emplace_back(up_prob, config, upper.shifts.a, upper.shifts.b);

    PairOrderingStats stats;
    auto observe = [&stats, tol_factor](std::span<const Simulator> group) {
        check_state_ordering(group[0].state(), group[1].state(), tol_factor, stats);
    };
    drive_lockstep(std::span<Simulator>(sims.data(), sims.size()), config, observe);

    OrderingReport report;
    report.variant = variant;
    report.holds = stats.holds();
    report.worst_margin = stats.worst_margin;
    report.worst_violation = stats.violation;
    report.tol_factor = tol_factor;
    report.compared_times = stats.compared_times;
    report.lower = std::move(sims[0]).take_trajectory();
    report.upper = std::move(sims[1]).take_trajectory();
    report.note =
        "numerical runs satisfy homogeneous Neumann at x = 0, admissible as either ordered role";
    return report;
}

/// Front-monotonicity check on a recorded trajectory: per-step increments
/// at or above -1e-12 relative, and strictly positive recorded speeds past
/// the startup window.
struct FrontMonotoneResult {
    bool passed = true;
    std::string detail;
};

inline FrontMonotoneResult check_front_monotone(const Trajectory& traj,
                                                double strict_after = 0.01) {
    FrontMonotoneResult res;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double inc = traj.fronts[k] - traj.fronts[k - 1];
        if (inc < -1e-12 * traj.fronts[k - 1]) {
            res.passed = false;
            res.detail = "negative front increment at t = " + std::to_string(traj.times[k]);
            return res;
        }
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] > strict_after && !(traj.front_speeds[k] > 0.0)) {
            res.passed = false;
            res.detail = "front speed not strictly positive at t = " + std::to_string(traj.times[k]);
            return res;
        }
    }
    return res;
}

/// Relabeled problem under the component swap (u0,d1,p) <-> (v0,d2,q),
/// rho -> 1/rho, mu -> mu*rho. Simulating it reproduces the original run
/// with the components exchanged.
inline ProblemSpec swapped_spec(const ProblemSpec& s) {
    ProblemSpec out;
    out.d1 = s.d2;
    out.d2 = s.d1;
    out.p = s.q;
    out.q = s.p;
    out.mu = s.mu * s.rho;
    out.rho = 1.0 / s.rho;
    out.s0 = s.s0;
    return out;
}

enum class CheckKind { Normal, ToleranceSensitivity };

struct CheckResult {
    std::string id;
    bool passed = false;
    CheckKind kind = CheckKind::Normal;
    std::string detail;
};

struct SuiteReport {
    std::vector<CheckResult> checks;

    bool all_green() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
    /// True when something failed but every failure is a
    /// tolerance-sensitivity finding (e.g. the ordering band was tightened
    /// below scheme accuracy).
    bool only_tolerance_failures() const {
        bool any = false;
        for (const auto& c : checks) {
            if (!c.passed) {
                if (c.kind != CheckKind::ToleranceSensitivity) return false;
                any = true;
            }
        }
        return any;
    }
};

struct SuiteOptions {
    bool quick = false; ///< smaller grids and horizons, for unit tests
    double ordering_tol = 1e-6;
    bool corrupt_front_stencil = false; ///< fault-injection fixture for the MMS check
};

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace detail

/// Run the canonical problem set and evaluate every cross-module invariant
/// on it. Individual failures are collected; the suite never aborts early.
inline SuiteReport property_suite(const SuiteOptions& options = {}) {
    SuiteReport report;
    auto add = [&report](const std::string& id, bool passed, const std::string& detail = "",
                         CheckKind kind = CheckKind::Normal) {
        report.checks.push_back({id, passed, kind, detail});
    };
    // Ordering-band failures become tolerance findings when the band was
    // tightened below the default.
    const CheckKind ordering_kind = options.ordering_tol < 1e-6
                                        ? CheckKind::ToleranceSensitivity
                                        : CheckKind::Normal;

    const std::size_t n = options.quick ? 32 : 64;
    ProblemSpec base; // d1 = d2 = 1, p = q = 2, mu = rho = 1, s0 = 1
    base.p = 2.0;
    base.q = 2.0;

    // Transform invariants: round trip and boundary-stencil order.
    {
        bool ok = true;
        for (int i = 1; i <= 64; ++i) {
            const double x = 0.3 + 0.01 * i;
            const double s = 1.0 + 0.05 * i;
            const double back = from_fixed(to_fixed(x, s), s);
            if (std::abs(back - x) > 2.0 * std::abs(x) * 1e-16) ok = false;
        }
        add("transform.round_trip", ok);

        double prev_err = 0.0;
        bool order_ok = true;
        for (std::size_t m : {32, 64, 128, 256}) {
            std::vector<double> prof(m + 1);
            for (std::size_t i = 0; i <= m; ++i) {
                prof[i] = std::cos(std::numbers::pi * static_cast<double>(i) /
                                   (2.0 * static_cast<double>(m)));
            }
            prof[m] = 0.0;
            const double slope = boundary_slope(prof, 1.0 / static_cast<double>(m));
            const double err = std::abs(slope - (-std::numbers::pi / 2.0));
            if (m > 32) {
                const double order = std::log2(prev_err / err);
                if (order < 1.9) order_ok = false;
            }
            prev_err = err;
        }
        add("transform.boundary_slope_order", order_ok);

        auto c = coefficients(2.7, 1.3, 0.0);
        add("transform.advection_vanishes_at_origin", c.g == 0.0);
    }

    // MMS ladder.
    {
        MmsRunConfig mc;
        mc.levels = options.quick ? std::vector<std::size_t>{16, 32, 64}
                                  : std::vector<std::size_t>{32, 64, 128};
        mc.first_order_front_stencil = options.corrupt_front_stencil;
        auto table = run_mms(base, mc);
        const auto& final_row = table.back();
        const bool orders_ok = final_row.order_u.value_or(0.0) >= 1.8 &&
                               final_row.order_v.value_or(0.0) >= 1.8;
        bool s_monotone = true;
        for (std::size_t k = 1; k < table.size(); ++k) {
            if (!(table[k].err_s < table[k - 1].err_s)) s_monotone = false;
        }
        add("mms.spatial_order", orders_ok,
            "order_u = " + detail::format_double(final_row.order_u.value_or(0.0)) +
                ", order_v = " + detail::format_double(final_row.order_v.value_or(0.0)));
        add("mms.front_error_monotone", s_monotone);
    }

    // Small-data certified run.
    SolverConfig cert_cfg;
    cert_cfg.n = n;
    cert_cfg.t_end = options.quick ? 6.0 : 20.0;
    cert_cfg.snapshot_times = {1.0, cert_cfg.t_end / 2.0};
    InitialData cert_data{FamilyProfile{FamilyKind::Parabola, 1.0 / 64.0},
                          FamilyProfile{FamilyKind::Parabola, 1.0 / 64.0}};
    {
        auto traj = simulate(base, cert_data, cert_cfg);
        auto mono = check_front_monotone(traj);
        add("solver.front_monotone", mono.passed, mono.detail);
        add("solver.positivity_clamp_budget",
            traj.clamp_events * 1000 <= traj.node_updates,
            std::to_string(traj.clamp_events) + " clamps / " +
                std::to_string(traj.node_updates) + " node updates");

        double m = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            m = std::max({m, traj.sup_u[k], traj.sup_v[k]});
        }
        const auto prob = validate_spec(base, cert_data, n);
        const double bound =
            front_speed_bound(m, base, c1_norm(prob.u0, base.s0), c1_norm(prob.v0, base.s0));
        bool speed_ok = true;
        for (double sp : traj.front_speeds) {
            if (sp > 1.05 * bound) speed_ok = false;
        }
        add("analysis.front_speed_bound_holds", speed_ok,
            "bound = " + detail::format_double(bound));

        auto verdict = certify_global(traj, base);
        add("analysis.small_data_certified", verdict.kind == VerdictKind::GlobalCertified,
            to_string(verdict.kind) + (verdict.note.empty() ? "" : ": " + verdict.note));

        auto decay = decay_diagnostic(traj);
        add("analysis.decay_consistent", decay.consistent,
            "tail front speed = " + detail::format_double(decay.front_speed_tail_max));

        // Certification is monotone under shrinking amplitudes.
        InitialData half{FamilyProfile{FamilyKind::Parabola, 1.0 / 128.0},
                         FamilyProfile{FamilyKind::Parabola, 1.0 / 128.0}};
        auto traj2 = simulate(base, half, cert_cfg);
        auto verdict2 = certify_global(traj2, base);
        add("analysis.certify_monotone", verdict2.kind == VerdictKind::GlobalCertified,
            to_string(verdict2.kind));
    }

    // Supersolution residuals on a feasible amplitude sample.
    {
        auto fe = find_eps(base);
        bool ok = fe.eps.has_value();
        if (ok) {
            for (double scale : {0.5, 0.8, 0.95}) {
                auto ss = make_supersolution(base, *fe.eps * scale, *fe.eps * scale);
                for (int it = 0; it <= 40 && ok; ++it) {
                    const double t = cert_cfg.t_end * static_cast<double>(it) / 40.0;
                    for (int iy = 0; iy <= 32; ++iy) {
                        const double y = static_cast<double>(iy) / 32.0;
                        auto r = supersolution_residuals(ss, base, t, y);
                        if (r.ru < -1e-12 || r.rv < -1e-12 || !(r.rs > 0.0)) ok = false;
                    }
                }
            }
        }
        add("analysis.supersolution_residuals", ok);
    }

    // pq = 1 stays global.
    {
        ProblemSpec linear = base;
        linear.p = 1.0;
        linear.q = 1.0;
        SolverConfig cfg;
        cfg.n = n;
        cfg.t_end = options.quick ? 2.0 : 10.0;
        InitialData data{FamilyProfile{FamilyKind::Parabola, 10.0},
                         FamilyProfile{FamilyKind::Parabola, 10.0}};
        auto traj = simulate(linear, data, cfg);
        auto verdict = certify_global(traj, linear);
        add("solver.pq1_completes", traj.status == RunStatus::Completed, to_string(traj.status));
        add("analysis.pq1_heuristic", verdict.kind == VerdictKind::GlobalHeuristic,
            to_string(verdict.kind));
    }

    // Large-data blow-up.
    {
        SolverConfig cfg;
        cfg.n = n;
        cfg.t_end = 5.0;
        InitialData data{FamilyProfile{FamilyKind::Parabola, 50.0},
                         FamilyProfile{FamilyKind::Parabola, 50.0}};
        auto traj = simulate(base, data, cfg);
        auto verdict = certify_global(traj, base);
        const bool fired = verdict.kind == VerdictKind::BlowUp && verdict.blowup &&
                           verdict.blowup->t_cross < 1.0;
        add("analysis.blowup_detected", fired,
            verdict.blowup ? "t_cross = " + detail::format_double(verdict.blowup->t_cross)
                           : to_string(verdict.kind));
    }

    // T_max recovery on the analytic synthetic series.
    {
        Trajectory synth;
        synth.spec = base; // pq = 4
        const double t_max = 1.0;
        for (int k = 0; k < 10; ++k) {
            const double t = 0.8 + 0.15 * static_cast<double>(k) / 9.0;
            synth.times.push_back(t);
            synth.fronts.push_back(1.0);
            synth.front_speeds.push_back(0.0);
            synth.sup_u.push_back(std::pow(1.0 - t, -1.0 / (4.0 - 1.0)));
            synth.sup_v.push_back(synth.sup_u.back());
            synth.clamp_cumulative.push_back(0);
        }
        synth.status = RunStatus::BlowupDetected;
        synth.stop_reason = StopReason::DtCollapse;
        auto ev = detect_blowup(synth, 1e8);
        const bool ok = ev && ev->t_max_estimate &&
                        std::abs(*ev->t_max_estimate - t_max) <= 0.02 * t_max;
        add("analysis.tmax_recovery", ok,
            ev && ev->t_max_estimate ? "estimate = " + detail::format_double(*ev->t_max_estimate)
                                     : "no estimate");
    }

    // Cascade ordering and Cauchy contraction.
    {
        ProblemSpec sub = base;
        sub.p = 0.5;
        sub.q = 2.0;
        SolverConfig cfg;
        cfg.n = n;
        cfg.t_end = options.quick ? 0.5 : 2.0;
        InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                         FamilyProfile{FamilyKind::Parabola, 1.0}};
        try {
            auto res = run_cascade(sub, data, cfg, {1, 2, 4, 8}, std::nullopt,
                                   options.ordering_tol);
            add("cascade.ordering", true);
            bool cauchy = true;
            for (std::size_t k = 1; k < res.consecutive_diffs.size(); ++k) {
                if (res.consecutive_diffs[k] > res.consecutive_diffs[k - 1]) cauchy = false;
            }
            add("cascade.cauchy", cauchy);
            bool level_invariants = true;
            std::string det;
            for (const auto& lvl : res.levels) {
                auto mono = check_front_monotone(lvl);
                if (!mono.passed) {
                    level_invariants = false;
                    det = mono.detail;
                }
            }
            add("cascade.level_invariants", level_invariants, det);
        } catch (const OrderingViolation& e) {
            add("cascade.ordering", false, e.what(), ordering_kind);
            add("cascade.cauchy", false, "skipped: ordering failed", ordering_kind);
            add("cascade.level_invariants", false, "skipped: ordering failed", ordering_kind);
        }
    }

    // Ordered pairs.
    {
        SolverConfig cfg;
        cfg.n = n;
        cfg.t_end = options.quick ? 1.0 : 5.0;

        RunSetup small{base,
                       InitialData{FamilyProfile{FamilyKind::Parabola, 0.01},
                                   FamilyProfile{FamilyKind::Parabola, 0.01}},
                       {}};
        auto reflexive = compare_ordered_runs(small, small, cfg, options.ordering_tol);
        add("verify.reflexive_zero_margin",
            reflexive.holds && reflexive.worst_margin == 0.0,
            "worst margin = " + detail::format_double(reflexive.worst_margin), ordering_kind);

        RunSetup doubled{base,
                         InitialData{FamilyProfile{FamilyKind::Parabola, 0.02},
                                     FamilyProfile{FamilyKind::Parabola, 0.02}},
                         {}};
        auto pair = compare_ordered_runs(small, doubled, cfg, options.ordering_tol);
        add("verify.doubled_amplitude_ordered", pair.holds,
            pair.worst_violation ? pair.worst_violation->component + " deficit " +
                                       detail::format_double(pair.worst_violation->magnitude)
                                 : "",
            ordering_kind);

        ProblemSpec sub = base;
        sub.p = 0.5;
        sub.q = 2.0;
        SolverConfig scfg = cfg;
        scfg.t_end = options.quick ? 0.5 : 2.0;
        RunSetup lower{sub,
                       InitialData{FamilyProfile{FamilyKind::Parabola, 1.0},
                                   FamilyProfile{FamilyKind::Parabola, 1.0}},
                       {}};
        RunSetup upper = lower;
        upper.shifts = {0.1, 0.1};
        auto shifted = compare_ordered_runs(lower, upper, scfg, options.ordering_tol);
        add("verify.shifted_pair_ordered", shifted.holds, "", ordering_kind);

        RunSetup pos_lower = lower;
        pos_lower.shifts = {0.1, 0.1};
        RunSetup pos_upper = lower;
        pos_upper.shifts = {0.1, 0.2};
        auto positive = compare_ordered_runs(pos_lower, pos_upper, scfg, options.ordering_tol);
        add("verify.positive_shift_pair_ordered",
            positive.holds && positive.variant == PairVariant::PositiveShifts, "",
            ordering_kind);
    }

    // Determinism and the component-swap symmetry.
    {
        SolverConfig cfg;
        cfg.n = 32;
        cfg.t_end = 0.5;
        InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                         FamilyProfile{FamilyKind::Cosine, 0.5}};
        auto a = simulate(base, data, cfg);
        auto b = simulate(base, data, cfg);
        add("solver.deterministic",
            a.times == b.times && a.fronts == b.fronts && a.sup_u == b.sup_u &&
                a.sup_v == b.sup_v && a.front_speeds == b.front_speeds);

        InitialData swapped_data{data.v0, data.u0};
        auto c = simulate(swapped_spec(base), swapped_data, cfg);
        add("core.swap_symmetry_bitwise",
            c.times == a.times && c.fronts == a.fronts && c.sup_u == a.sup_v &&
                c.sup_v == a.sup_u);
    }

    return report;
}

} // namespace frontsolve
