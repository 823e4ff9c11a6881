#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontsolve/analysis.hpp"
#include "frontsolve/cascade.hpp"
#include "frontsolve/mms.hpp"
#include "frontsolve/solver.hpp"

namespace frontsolve {

/// Fixed 17-significant-digit rendering with '.' decimal separator,
/// independent of locale. Identical inputs give identical bytes.
inline std::string format_full(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

struct SweepConfig {
    std::vector<double> p{1.0};
    std::vector<double> q{1.0};
    std::vector<double> amplitude{1.0};
    std::size_t cap = 512;
};

struct CascadeConfig {
    std::vector<int> schedule{1, 2, 4, 8, 16};
    std::optional<double> tol = 1e-4;
};

struct VerifyConfig {
    double ordering_tol = 1e-6;
    bool quick = false;
};

/// Parsed configuration file. Every section is optional and defaulted;
/// unknown keys anywhere are errors.
struct RunConfig {
    ProblemSpec problem;
    InitialData initial{FamilyProfile{FamilyKind::Parabola, 1.0},
                        FamilyProfile{FamilyKind::Parabola, 1.0}};
    SolverConfig solver;
    SweepConfig sweep;
    CascadeConfig cascade;
    MmsRunConfig mms;
    VerifyConfig verify;
};

namespace detail {

using json = nlohmann::json;

inline void require_known_keys(const json& j, const std::vector<std::string>& allowed,
                               const std::string& section) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + it.key() + "' in section '" + section + "'");
        }
    }
}

inline double get_number(const json& j, const std::string& section, const std::string& key,
                         double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        throw ConfigError(section + "." + key + " must be a number");
    }
    return j[key].get<double>();
}

inline std::vector<double> get_number_list(const json& j, const std::string& section,
                                           const std::string& key,
                                           std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) throw ConfigError(section + "." + key + " must be an array");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(section + "." + key + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& root) {
    using detail::get_number;
    using detail::get_number_list;
    using detail::require_known_keys;

    if (!root.is_object()) throw ConfigError("top level must be an object");
    require_known_keys(root, {"problem", "initial", "solver", "sweep", "cascade", "mms", "verify"},
                       "(top level)");
    RunConfig cfg;

    if (root.contains("problem")) {
        const auto& j = root["problem"];
        require_known_keys(j, {"d1", "d2", "p", "q", "mu", "rho", "s0"}, "problem");
        cfg.problem.d1 = get_number(j, "problem", "d1", cfg.problem.d1);
        cfg.problem.d2 = get_number(j, "problem", "d2", cfg.problem.d2);
        cfg.problem.p = get_number(j, "problem", "p", cfg.problem.p);
        cfg.problem.q = get_number(j, "problem", "q", cfg.problem.q);
        cfg.problem.mu = get_number(j, "problem", "mu", cfg.problem.mu);
        cfg.problem.rho = get_number(j, "problem", "rho", cfg.problem.rho);
        cfg.problem.s0 = get_number(j, "problem", "s0", cfg.problem.s0);
    }

    if (root.contains("initial")) {
        const auto& j = root["initial"];
        require_known_keys(j, {"family", "amplitude", "samples_u", "samples_v"}, "initial");
        const bool sampled = j.contains("samples_u") || j.contains("samples_v");
        if (sampled) {
            if (j.contains("family") || j.contains("amplitude")) {
                throw ConfigError("initial: give either a family or samples, not both");
            }
            if (!j.contains("samples_u") || !j.contains("samples_v")) {
                throw ConfigError("initial: samples_u and samples_v must both be given");
            }
            cfg.initial.u0 = get_number_list(j, "initial", "samples_u", {});
            cfg.initial.v0 = get_number_list(j, "initial", "samples_v", {});
        } else {
            FamilyProfile fam;
            fam.kind = j.contains("family")
                           ? family_from_name(j["family"].get<std::string>())
                           : FamilyKind::Parabola;
            fam.amplitude = get_number(j, "initial", "amplitude", 1.0);
            cfg.initial.u0 = fam;
            cfg.initial.v0 = fam;
        }
    }

    if (root.contains("solver")) {
        const auto& j = root["solver"];
        require_known_keys(j,
                           {"N", "dt_init", "dt_min", "dt_max", "cfl_advection", "cfl_reaction",
                            "t_end", "blowup_threshold", "snapshot_times"},
                           "solver");
        if (j.contains("N")) {
            if (!j["N"].is_number_integer()) throw ConfigError("solver.N must be an integer");
            cfg.solver.n = j["N"].get<std::size_t>();
        }
        cfg.solver.dt_init = get_number(j, "solver", "dt_init", cfg.solver.dt_init);
        cfg.solver.dt_min = get_number(j, "solver", "dt_min", cfg.solver.dt_min);
        cfg.solver.dt_max = get_number(j, "solver", "dt_max", cfg.solver.dt_max);
        cfg.solver.cfl_advection = get_number(j, "solver", "cfl_advection", cfg.solver.cfl_advection);
        cfg.solver.cfl_reaction = get_number(j, "solver", "cfl_reaction", cfg.solver.cfl_reaction);
        cfg.solver.t_end = get_number(j, "solver", "t_end", cfg.solver.t_end);
        cfg.solver.blowup_threshold =
            get_number(j, "solver", "blowup_threshold", cfg.solver.blowup_threshold);
        cfg.solver.snapshot_times = get_number_list(j, "solver", "snapshot_times", {});
    }

    if (root.contains("sweep")) {
        const auto& j = root["sweep"];
        require_known_keys(j, {"p", "q", "amplitude", "cap"}, "sweep");
        cfg.sweep.p = get_number_list(j, "sweep", "p", cfg.sweep.p);
        cfg.sweep.q = get_number_list(j, "sweep", "q", cfg.sweep.q);
        cfg.sweep.amplitude = get_number_list(j, "sweep", "amplitude", cfg.sweep.amplitude);
        if (j.contains("cap")) {
            if (!j["cap"].is_number_integer()) throw ConfigError("sweep.cap must be an integer");
            cfg.sweep.cap = j["cap"].get<std::size_t>();
        }
        if (cfg.sweep.p.empty() || cfg.sweep.q.empty() || cfg.sweep.amplitude.empty()) {
            throw ConfigError("sweep grids must be nonempty");
        }
    }

    if (root.contains("cascade")) {
        const auto& j = root["cascade"];
        require_known_keys(j, {"schedule", "tol"}, "cascade");
        if (j.contains("schedule")) {
            if (!j["schedule"].is_array()) throw ConfigError("cascade.schedule must be an array");
            cfg.cascade.schedule.clear();
            for (const auto& v : j["schedule"]) {
                if (!v.is_number_integer()) {
                    throw ConfigError("cascade.schedule must hold integers");
                }
                cfg.cascade.schedule.push_back(v.get<int>());
            }
        }
        if (j.contains("tol")) {
            if (j["tol"].is_null()) {
                cfg.cascade.tol.reset();
            } else {
                cfg.cascade.tol = get_number(j, "cascade", "tol", 1e-4);
            }
        }
    }

    if (root.contains("mms")) {
        const auto& j = root["mms"];
        require_known_keys(j, {"levels", "t_end", "dt_coeff"}, "mms");
        if (j.contains("levels")) {
            if (!j["levels"].is_array()) throw ConfigError("mms.levels must be an array");
            cfg.mms.levels.clear();
            for (const auto& v : j["levels"]) {
                if (!v.is_number_integer()) throw ConfigError("mms.levels must hold integers");
                cfg.mms.levels.push_back(v.get<std::size_t>());
            }
        }
        cfg.mms.t_end = get_number(j, "mms", "t_end", cfg.mms.t_end);
        cfg.mms.dt_coeff = get_number(j, "mms", "dt_coeff", cfg.mms.dt_coeff);
    }

    if (root.contains("verify")) {
        const auto& j = root["verify"];
        require_known_keys(j, {"ordering_tol", "quick"}, "verify");
        cfg.verify.ordering_tol = get_number(j, "verify", "ordering_tol", cfg.verify.ordering_tol);
        if (j.contains("quick")) {
            if (!j["quick"].is_boolean()) throw ConfigError("verify.quick must be a boolean");
            cfg.verify.quick = j["quick"].get<bool>();
        }
    }

    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(root);
}

// ---------------------------------------------------------------------------
// CSV artifacts
// ---------------------------------------------------------------------------

inline void write_front_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    out << "t,s,s_prime,sup_u,sup_v,clamp_events_cumulative\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_full(traj.times[k]) << ',' << format_full(traj.fronts[k]) << ','
            << format_full(traj.front_speeds[k]) << ',' << format_full(traj.sup_u[k]) << ','
            << format_full(traj.sup_v[k]) << ',' << traj.clamp_cumulative[k] << '\n';
    }
}

inline void write_snapshots_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    out << "t,y,x,u,v\n";
    for (const auto& snap : traj.snapshots) {
        const std::size_t n = snap.intervals();
        for (std::size_t j = 0; j <= n; ++j) {
            const double y = static_cast<double>(j) * snap.dy();
            out << format_full(snap.t) << ',' << format_full(y) << ','
                << format_full(y * snap.s) << ',' << format_full(snap.w[j]) << ','
                << format_full(snap.z[j]) << '\n';
        }
    }
}

inline void write_convergence_csv(const std::filesystem::path& path,
                                  const ConvergenceTable& table) {
    std::ofstream out(path, std::ios::binary);
    out << "N,dt,err_u,err_v,err_s,order_u\n";
    for (const auto& row : table) {
        out << row.n << ',' << format_full(row.dt) << ',' << format_full(row.err_u) << ','
            << format_full(row.err_v) << ',' << format_full(row.err_s) << ','
            << (row.order_u ? format_full(*row.order_u) : std::string()) << '\n';
    }
}

struct RegimeRow {
    double p = 0.0;
    double q = 0.0;
    double amplitude = 0.0;
    std::string verdict;
    double t_reached = 0.0;
    double sup_u_end = 0.0;
    double sup_v_end = 0.0;
    std::optional<double> eps;
};

inline void write_regime_csv(const std::filesystem::path& path,
                             const std::vector<RegimeRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "p,q,amplitude,verdict,t_reached,sup_u_end,sup_v_end,eps\n";
    for (const auto& r : rows) {
        out << format_full(r.p) << ',' << format_full(r.q) << ',' << format_full(r.amplitude)
            << ',' << r.verdict << ',' << format_full(r.t_reached) << ','
            << format_full(r.sup_u_end) << ',' << format_full(r.sup_v_end) << ','
            << (r.eps ? format_full(*r.eps) : std::string()) << '\n';
    }
}

// ---------------------------------------------------------------------------
// verdict.json
// ---------------------------------------------------------------------------

inline nlohmann::json spec_to_json(const ProblemSpec& spec) {
    return {{"d1", spec.d1}, {"d2", spec.d2}, {"p", spec.p},   {"q", spec.q},
            {"mu", spec.mu}, {"rho", spec.rho}, {"s0", spec.s0}};
}

inline nlohmann::json verdict_to_json(const RunVerdict& verdict) {
    nlohmann::json j;
    j["kind"] = to_string(verdict.kind);
    if (verdict.certified) {
        j["eps1"] = verdict.certified->eps1;
        j["eps2"] = verdict.certified->eps2;
        j["domination_margin"] = verdict.certified->domination_margin;
    }
    if (verdict.blowup) {
        j["t_cross"] = verdict.blowup->t_cross;
        j["threshold"] = verdict.blowup->threshold;
        j["trigger"] = to_string(verdict.blowup->trigger);
        if (verdict.blowup->t_max_estimate) {
            j["t_max_estimate"] = *verdict.blowup->t_max_estimate;
            j["fit_residual"] = *verdict.blowup->fit_residual;
        }
    }
    if (verdict.heuristic) {
        j["pq"] = verdict.heuristic->pq;
        j["horizon"] = verdict.heuristic->horizon;
    }
    if (!verdict.note.empty()) j["note"] = verdict.note;
    return j;
}

struct PipelineResult {
    Trajectory traj;
    RunVerdict verdict;
    std::optional<DecayReport> decay;
};

/// validate -> simulate -> classify -> decay diagnostics.
inline PipelineResult run_pipeline(const ProblemSpec& spec, const InitialData& data,
                                   const SolverConfig& solver) {
    PipelineResult res;
    res.traj = simulate(spec, data, solver);
    res.verdict = certify_global(res.traj, spec, solver.blowup_threshold);
    try {
        res.decay = decay_diagnostic(res.traj);
    } catch (const TooShort&) {
        res.decay.reset();
    }
    return res;
}

inline nlohmann::json pipeline_to_json(const ProblemSpec& spec, const PipelineResult& res) {
    nlohmann::json j;
    j["problem"] = spec_to_json(spec);
    j["status"] = to_string(res.traj.status);
    j["t_reached"] = res.traj.t_reached();
    j["steps"] = res.traj.size() - 1;
    j["clamp_events"] = res.traj.clamp_events;
    j["warnings"] = res.traj.warnings;
    j["verdict"] = verdict_to_json(res.verdict);
    if (res.decay) {
        j["decay"] = {{"s_inf_estimate", res.decay->s_inf_estimate},
                      {"front_speed_tail_max", res.decay->front_speed_tail_max},
                      {"sup_u_end", res.decay->sup_u_end},
                      {"sup_v_end", res.decay->sup_v_end},
                      {"decay_rate", res.decay->decay_rate},
                      {"fit_residual", res.decay->fit_residual},
                      {"consistent_with_decay", res.decay->consistent}};
    } else {
        j["decay"] = nullptr;
    }
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
}

} // namespace frontsolve
