#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontsolve/problem.hpp"

namespace frontsolve {

/// Solution state on the fixed unit interval at one time level.
/// w and z hold N+1 nodal values of the transformed fields, with
/// w[N] = z[N] = 0 (Dirichlet at the front image y = 1). shift_a and
/// shift_b are the additive constants entering the reactions
/// (z + shift_b)^p and (w + shift_a)^q; the cascade sets them to 1/n.
struct FixedDomainState {
    double t = 0.0;
    double s = 0.0;
    double s_prime = 0.0;
    std::vector<double> w;
    std::vector<double> z;
    double shift_a = 0.0;
    double shift_b = 0.0;

    std::size_t intervals() const { return w.size() - 1; }
    double dy() const { return 1.0 / static_cast<double>(intervals()); }

    double sup_w() const {
        double m = 0.0;
        for (double v : w) m = std::max(m, v);
        return m;
    }
    double sup_z() const {
        double m = 0.0;
        for (double v : z) m = std::max(m, v);
        return m;
    }
};

enum class RunStatus { Running, Completed, BlowupDetected, StepFailure };

enum class StopReason { None, HorizonReached, ThresholdCrossed, DtCollapse };

inline std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Running: return "running";
        case RunStatus::Completed: return "completed";
        case RunStatus::BlowupDetected: return "blowup_detected";
        case RunStatus::StepFailure: return "step_failure";
    }
    return "unknown";
}

/// Time series of one run: fronts, front speeds, sup norms, cumulative
/// clamp counts per recorded time, and full state snapshots at configured
/// output times (initial and final states are always included).
struct Trajectory {
    ProblemSpec spec;
    std::vector<double> times;
    std::vector<double> fronts;
    std::vector<double> front_speeds;
    std::vector<double> sup_u;
    std::vector<double> sup_v;
    std::vector<std::uint64_t> clamp_cumulative;
    std::vector<FixedDomainState> snapshots;
    std::uint64_t clamp_events = 0;
    std::uint64_t node_updates = 0;
    RunStatus status = RunStatus::Running;
    StopReason stop_reason = StopReason::None;
    std::vector<std::string> warnings;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double t_reached() const { return times.empty() ? 0.0 : times.back(); }
};

enum class VerdictKind { GlobalCertified, GlobalHeuristic, BlowUp, Undecided };

inline std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::GlobalCertified: return "GlobalCertified";
        case VerdictKind::GlobalHeuristic: return "GlobalHeuristic";
        case VerdictKind::BlowUp: return "BlowUp";
        case VerdictKind::Undecided: return "Undecided";
    }
    return "unknown";
}

enum class BlowupTrigger { Threshold, DtCollapse };

inline std::string to_string(BlowupTrigger t) {
    return t == BlowupTrigger::Threshold ? "threshold" : "dt_collapse";
}

struct BlowUpEvidence {
    double t_cross = 0.0;
    double threshold = 0.0;
    BlowupTrigger trigger = BlowupTrigger::Threshold;
    std::optional<double> t_max_estimate;
    std::optional<double> fit_residual;
};

struct CertifiedEvidence {
    double eps1 = 0.0;
    double eps2 = 0.0;
    /// Smallest observed gap in the domination check, over all checked
    /// times/nodes and components (positive means domination held).
    double domination_margin = 0.0;
};

struct HeuristicEvidence {
    double pq = 0.0;
    double horizon = 0.0;
};

/// Classification of a run with the evidence backing it.
struct RunVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    std::optional<CertifiedEvidence> certified;
    std::optional<BlowUpEvidence> blowup;
    std::optional<HeuristicEvidence> heuristic;
    std::string note;
};

} // namespace frontsolve
