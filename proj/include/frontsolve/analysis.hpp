#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frontsolve/errors.hpp"
#include "frontsolve/problem.hpp"
#include "frontsolve/state.hpp"

namespace frontsolve {

/// Closed-form barrier certifying global existence for small data in the
/// pq > 1 regime:
///
///   s_bar(t) = 2 s0 (2 - e^{-a t}),
///   u_bar(t,x) = eps1 e^{-b t} (1 - y^2),  v_bar(t,x) = eps2 e^{-g t} (1 - y^2),
///
/// with y = x / s_bar(t), b = gamma p = d / (16 s0^2), a = b and
/// d = min(d1, d2).
struct SuperSolution {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double s0 = 0.0;

    double s_bar(double t) const { return 2.0 * s0 * (2.0 - std::exp(-a * t)); }
    double s_bar_prime(double t) const { return 2.0 * s0 * a * std::exp(-a * t); }
    double sup_u(double t) const { return eps1 * std::exp(-b * t); }
    double sup_v(double t) const { return eps2 * std::exp(-gamma * t); }

    struct Values {
        double s_bar = 0.0;
        double u_bar = 0.0;
        double v_bar = 0.0;
    };

    Values eval(double t, double x) const {
        if (t < 0.0) throw OutOfDomain("t must be nonnegative");
        const double sb = s_bar(t);
        if (x < 0.0 || x > sb) throw OutOfDomain("x outside [0, s_bar(t)]");
        const double y = x / sb;
        const double shape = 1.0 - y * y;
        return {sb, sup_u(t) * shape, sup_v(t) * shape};
    }
};

struct Feasibility {
    bool feasible = false;
    std::string reason; ///< failing inequality when infeasible
};

/// Feasibility of the amplitude pair for the barrier: both inequalities
/// eps1 d - 16 s0^2 eps2^p >= 0, eps2 d - 16 s0^2 eps1^q >= 0 and the
/// strict cap eps < d / (8 mu (1 + rho)). Only meaningful for pq > 1.
inline Feasibility check_small_data(const ProblemSpec& spec, double eps1, double eps2) {
    if (!(spec.p * spec.q > 1.0)) {
        throw WrongRegime("small-data certificate needs pq > 1");
    }
    if (!(eps1 > 0.0)) throw NonPositiveParameter("eps1");
    if (!(eps2 > 0.0)) throw NonPositiveParameter("eps2");

    const double d = std::min(spec.d1, spec.d2);
    const double cap = d / (8.0 * spec.mu * (1.0 + spec.rho));
    const double s0sq = spec.s0 * spec.s0;
    if (eps1 * d - 16.0 * s0sq * std::pow(eps2, spec.p) < 0.0) {
        return {false, "eps1*d - 16*s0^2*eps2^p < 0"};
    }
    if (eps2 * d - 16.0 * s0sq * std::pow(eps1, spec.q) < 0.0) {
        return {false, "eps2*d - 16*s0^2*eps1^q < 0"};
    }
    if (!(eps1 < cap && eps2 < cap)) {
        return {false, "eps not strictly below d/(8*mu*(1+rho))"};
    }
    return {true, ""};
}

/// Build the barrier for a feasible amplitude pair.
inline SuperSolution make_supersolution(const ProblemSpec& spec, double eps1, double eps2) {
    auto feas = check_small_data(spec, eps1, eps2);
    if (!feas.feasible) throw InvalidBound("infeasible supersolution amplitudes: " + feas.reason);
    SuperSolution ss;
    ss.eps1 = eps1;
    ss.eps2 = eps2;
    ss.s0 = spec.s0;
    const double d = std::min(spec.d1, spec.d2);
    ss.b = d / (16.0 * spec.s0 * spec.s0);
    ss.gamma = ss.b / spec.p;
    ss.a = ss.b;
    return ss;
}

/// Residuals of the barrier inequalities, evaluable analytically on any
/// (t, y) sample: ru and rv must be nonnegative, rs strictly positive.
struct SuperResiduals {
    double ru = 0.0;
    double rv = 0.0;
    double rs = 0.0;
};

inline SuperResiduals supersolution_residuals(const SuperSolution& ss, const ProblemSpec& spec,
                                              double t, double y) {
    const double sb = ss.s_bar(t);
    const double sbp = ss.s_bar_prime(t);
    const double shape = 1.0 - y * y;
    const double eu = ss.eps1 * std::exp(-ss.b * t);
    const double ev = ss.eps2 * std::exp(-ss.gamma * t);
    SuperResiduals r;
    r.ru = eu * (-ss.b * shape + 2.0 * y * y * sbp / sb + 2.0 * spec.d1 / (sb * sb)) -
           std::pow(ss.eps2, spec.p) * std::exp(-ss.gamma * spec.p * t) * std::pow(shape, spec.p);
    r.rv = ev * (-ss.gamma * shape + 2.0 * y * y * sbp / sb + 2.0 * spec.d2 / (sb * sb)) -
           std::pow(ss.eps1, spec.q) * std::exp(-ss.b * spec.q * t) * std::pow(shape, spec.q);
    r.rs = sbp - 2.0 * spec.mu * (eu + spec.rho * ev) / sb;
    return r;
}

struct FindEpsResult {
    std::optional<double> eps;
    std::string failing; ///< failing inequality when no eps is feasible
};

/// Largest feasible symmetric amplitude eps1 = eps2 = eps, located by a
/// log-grid scan over (0, cap) followed by bisection of the upper
/// feasibility boundary, to relative tolerance 1e-6. The scan matters:
/// for p < 1 the feasible set is an interval bounded away from zero and
/// may be empty.
inline FindEpsResult find_eps(const ProblemSpec& spec) {
    if (!(spec.p * spec.q > 1.0)) {
        throw WrongRegime("small-data certificate needs pq > 1");
    }
    const double d = std::min(spec.d1, spec.d2);
    const double cap = d / (8.0 * spec.mu * (1.0 + spec.rho));

    auto feasible = [&](double e) { return check_small_data(spec, e, e).feasible; };

    constexpr int scan_points = 512;
    double lo = -1.0;
    for (int k = scan_points - 1; k >= 0; --k) {
        const double frac = static_cast<double>(k) / static_cast<double>(scan_points);
        const double e = cap * std::pow(10.0, -12.0 * (1.0 - frac));
        if (feasible(e)) {
            lo = e;
            break;
        }
    }
    if (lo < 0.0) {
        return {std::nullopt, check_small_data(spec, cap / 2.0, cap / 2.0).reason};
    }
    double hi = cap; // the strict cap itself is always infeasible
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, ""};
}

/// Front-speed bound from the quadratic comparison profiles: with M a sup
/// bound for both components,
///
///   K  = max(4 ||u0||_C1 / (3M), sqrt(M^{p-1} / (2 d1))),
///   Kt = max(4 ||v0||_C1 / (3M), sqrt(M^{q-1} / (2 d2))),
///   C  = mu (2 M K + rho 2 M Kt).
inline double front_speed_bound(double m, const ProblemSpec& spec, double u0_c1, double v0_c1) {
    if (!(m > 0.0)) throw InvalidBound("sup bound M must be positive");
    if (!(u0_c1 > 0.0) || !(v0_c1 > 0.0)) throw InvalidBound("C1 norms must be positive");
    const double k1 = std::max(4.0 * u0_c1 / (3.0 * m), std::sqrt(std::pow(m, spec.p - 1.0) / (2.0 * spec.d1)));
    const double k2 = std::max(4.0 * v0_c1 / (3.0 * m), std::sqrt(std::pow(m, spec.q - 1.0) / (2.0 * spec.d2)));
    return spec.mu * (2.0 * m * k1 + spec.rho * 2.0 * m * k2);
}

namespace detail {

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t m = t.size();
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double n = static_cast<double>(m);
    const double denom = n * stt - st * st;
    LineFit fit;
    fit.slope = (n * sty - st * sy) / denom;
    fit.intercept = (sy - fit.slope * st) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * t[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

} // namespace detail

/// Scan a trajectory for blow-up evidence: a stored sup norm at or above
/// the threshold, or a recorded step collapse. When at least 10 samples
/// with pq > 1 are available, 1/sup_u^{pq-1} is fit linearly in t over the
/// last 10 and extrapolated to zero for a T_max estimate; the estimate is
/// omitted if the fit residual exceeds 10% of the window range.
inline std::optional<BlowUpEvidence> detect_blowup(const Trajectory& traj,
                                                   double threshold = 1e8) {
    if (traj.size() < 3) throw TooShort("detect_blowup needs at least 3 samples");

    std::optional<std::size_t> cross;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.sup_u[k] >= threshold || traj.sup_v[k] >= threshold) {
            cross = k;
            break;
        }
    }
    const bool collapsed = traj.stop_reason == StopReason::DtCollapse;
    if (!cross && !collapsed) return std::nullopt;

    BlowUpEvidence ev;
    ev.threshold = threshold;
    if (cross) {
        ev.trigger = BlowupTrigger::Threshold;
        ev.t_cross = traj.times[*cross];
    } else {
        ev.trigger = BlowupTrigger::DtCollapse;
        ev.t_cross = traj.times.back();
    }

    const double pq = traj.spec.p * traj.spec.q;
    const std::size_t last = cross ? *cross : traj.size() - 1;
    if (pq > 1.0 && last + 1 >= 10) {
        std::vector<double> ts, ys;
        for (std::size_t k = last + 1 - 10; k <= last; ++k) {
            if (traj.sup_u[k] <= 0.0) break;
            ts.push_back(traj.times[k]);
            ys.push_back(std::pow(traj.sup_u[k], -(pq - 1.0)));
        }
        if (ts.size() == 10) {
            auto fit = detail::fit_line(ts, ys);
            double lo = ys[0], hi = ys[0];
            for (double y : ys) {
                lo = std::min(lo, y);
                hi = std::max(hi, y);
            }
            const double range = hi - lo;
            if (fit.slope < 0.0 && range > 0.0 && fit.residual_rms <= 0.1 * range) {
                ev.t_max_estimate = -fit.intercept / fit.slope;
                ev.fit_residual = fit.residual_rms;
            }
        }
    }
    return ev;
}

struct DecayReport {
    double s_inf_estimate = 0.0;
    double front_speed_tail_max = 0.0;
    double sup_u_end = 0.0;
    double sup_v_end = 0.0;
    double decay_rate = 0.0;   ///< slope of log sup_u over the tail
    double fit_residual = 0.0; ///< RMS residual of the log-linear fit
    bool sup_u_monotone = false;
    bool consistent = false; ///< decay consistent with a finite-front bounded run
    std::size_t tail_samples = 0;
};

/// Long-time diagnostics over the tail window of a completed run. The
/// consistency flag is set when the tail front speed stays below 1e-4 and
/// sup_u decreased monotonically across the tail; it is a consistency
/// statement on a finite horizon, not a proof of decay.
inline DecayReport decay_diagnostic(const Trajectory& traj, double tail_fraction = 0.5) {
    if (traj.empty()) throw TooShort("empty trajectory");
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const double cut = t1 - tail_fraction * (t1 - t0);
    std::size_t begin = 0;
    while (begin < traj.size() && traj.times[begin] < cut) ++begin;
    const std::size_t count = traj.size() - begin;
    if (count < 10) throw TooShort("tail window has fewer than 10 samples");

    DecayReport rep;
    rep.tail_samples = count;
    rep.s_inf_estimate = traj.fronts.back();
    rep.sup_u_end = traj.sup_u.back();
    rep.sup_v_end = traj.sup_v.back();

    bool monotone = true;
    std::vector<double> ts, ys;
    for (std::size_t k = begin; k < traj.size(); ++k) {
        rep.front_speed_tail_max = std::max(rep.front_speed_tail_max, std::abs(traj.front_speeds[k]));
        if (k > begin && traj.sup_u[k] > traj.sup_u[k - 1]) monotone = false;
        if (traj.sup_u[k] > 0.0) {
            ts.push_back(traj.times[k]);
            ys.push_back(std::log(traj.sup_u[k]));
        }
    }
    monotone = monotone && traj.sup_u.back() < traj.sup_u[begin];
    rep.sup_u_monotone = monotone;
    if (ts.size() >= 2) {
        auto fit = detail::fit_line(ts, ys);
        rep.decay_rate = fit.slope;
        rep.fit_residual = fit.residual_rms;
    }
    rep.consistent =
        traj.status == RunStatus::Completed && rep.front_speed_tail_max < 1e-4 && monotone;
    return rep;
}

/// Classify a run. Blow-up evidence wins; pq <= 1 yields the theorem-backed
/// heuristic verdict; otherwise the small-data certificate is attempted,
/// requiring both the half-amplitude hypothesis and numerical domination
/// by the barrier at every stored time (pointwise at stored snapshots).
inline RunVerdict certify_global(const Trajectory& traj, const ProblemSpec& spec,
                                 double threshold = 1e8) {
    RunVerdict verdict;

    auto blowup = detect_blowup(traj, threshold);
    if (blowup) {
        verdict.kind = VerdictKind::BlowUp;
        verdict.blowup = blowup;
        return verdict;
    }

    const double pq = spec.p * spec.q;
    if (pq <= 1.0) {
        verdict.kind = VerdictKind::GlobalHeuristic;
        verdict.heuristic = HeuristicEvidence{pq, traj.t_reached()};
        return verdict;
    }

    auto fe = find_eps(spec);
    if (!fe.eps) {
        verdict.kind = VerdictKind::Undecided;
        verdict.note = "certificate infeasible: " + fe.failing;
        return verdict;
    }
    const double eps = *fe.eps;
    if (traj.sup_u.front() > eps / 2.0 || traj.sup_v.front() > eps / 2.0) {
        verdict.kind = VerdictKind::Undecided;
        verdict.note = "initial amplitude exceeds eps/2 hypothesis";
        return verdict;
    }

    const auto ss = make_supersolution(spec, eps, eps);
    constexpr double tol = 1e-8; // absolute slack for the discrete domination check
    double margin = std::numeric_limits<double>::infinity();
    auto dominated = [&](double upper, double lower) {
        margin = std::min(margin, upper - lower);
        return upper - lower > -tol;
    };

    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (!dominated(ss.s_bar(t), traj.fronts[k]) ||
            !dominated(ss.sup_u(t), traj.sup_u[k]) ||
            !dominated(ss.sup_v(t), traj.sup_v[k])) {
            verdict.kind = VerdictKind::Undecided;
            verdict.note = "barrier domination violated at t = " + std::to_string(t);
            return verdict;
        }
    }
    for (const auto& snap : traj.snapshots) {
        const std::size_t n = snap.intervals();
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = static_cast<double>(j) * snap.dy() * snap.s;
            const auto vals = ss.eval(snap.t, std::min(x, ss.s_bar(snap.t)));
            if (!dominated(vals.u_bar, snap.w[j]) || !dominated(vals.v_bar, snap.z[j])) {
                verdict.kind = VerdictKind::Undecided;
                verdict.note = "pointwise domination violated at t = " + std::to_string(snap.t);
                return verdict;
            }
        }
    }

    verdict.kind = VerdictKind::GlobalCertified;
    verdict.certified = CertifiedEvidence{eps, eps, margin};
    return verdict;
}

} // namespace frontsolve
