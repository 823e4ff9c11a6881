// Command-line front end: run orchestration, parameter sweeps and
// bit-exact artifact serialization for the free-boundary solver library.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "frontsolve/frontsolve.hpp"

namespace fs = std::filesystem;
using namespace frontsolve;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitToleranceOnly = 3;

int classify_error(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const NonPositiveParameter*>(&e) ||
        dynamic_cast<const IncompatibleInitialData*>(&e) ||
        dynamic_cast<const UnknownFamily*>(&e) || dynamic_cast<const GridTooCoarse*>(&e)) {
        return kExitConfig;
    }
    return kExitNumerical;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& out) {
    auto res = run_pipeline(cfg.problem, cfg.initial, cfg.solver);
    fs::create_directories(out);
    write_front_csv(out / "front.csv", res.traj);
    write_snapshots_csv(out / "snapshots.csv", res.traj);
    write_json(out / "verdict.json", pipeline_to_json(cfg.problem, res));
    std::cout << "status: " << to_string(res.traj.status)
              << ", verdict: " << to_string(res.verdict.kind)
              << ", t_reached: " << format_full(res.traj.t_reached()) << "\n";
    if (res.traj.status == RunStatus::StepFailure) return kExitNumerical;
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out, unsigned jobs) {
    if (std::holds_alternative<SampledProfile>(cfg.initial.u0)) {
        throw ConfigError("sweep requires a family initial block (amplitude varies per cell)");
    }
    auto sorted_unique = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto ps = sorted_unique(cfg.sweep.p);
    const auto qs = sorted_unique(cfg.sweep.q);
    const auto amps = sorted_unique(cfg.sweep.amplitude);
    const std::size_t total = ps.size() * qs.size() * amps.size();
    if (total > cfg.sweep.cap) {
        throw ConfigError("sweep size " + std::to_string(total) + " exceeds cap " +
                          std::to_string(cfg.sweep.cap));
    }

    const auto kind = std::get<FamilyProfile>(cfg.initial.u0).kind;
    struct Cell {
        double p, q, amplitude;
    };
    std::vector<Cell> cells;
    cells.reserve(total);
    for (double p : ps) {
        for (double q : qs) {
            for (double a : amps) cells.push_back({p, q, a});
        }
    }

    std::vector<RegimeRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const auto& cell = cells[i];
            RegimeRow row;
            row.p = cell.p;
            row.q = cell.q;
            row.amplitude = cell.amplitude;
            try {
                ProblemSpec spec = cfg.problem;
                spec.p = cell.p;
                spec.q = cell.q;
                InitialData data{FamilyProfile{kind, cell.amplitude},
                                 FamilyProfile{kind, cell.amplitude}};
                auto res = run_pipeline(spec, data, cfg.solver);
                row.verdict = to_string(res.verdict.kind);
                row.t_reached = res.traj.t_reached();
                row.sup_u_end = res.traj.sup_u.back();
                row.sup_v_end = res.traj.sup_v.back();
                if (res.verdict.certified) row.eps = res.verdict.certified->eps1;
            } catch (const std::exception& e) {
                row.verdict = std::string("error: ") + e.what();
            }
            rows[i] = std::move(row);
        }
    };

    const unsigned nthreads = std::max(1u, jobs);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    fs::create_directories(out);
    write_regime_csv(out / "regime_map.csv", rows);
    std::cout << "sweep: " << total << " cells -> " << (out / "regime_map.csv").string() << "\n";
    return kExitOk;
}

int cmd_cascade(const RunConfig& cfg, const fs::path& out) {
    if (cfg.problem.lipschitz()) {
        std::cout << "warning: Lipschitz regime (p >= 1 and q >= 1), running a single "
                     "unshifted simulation\n";
    }
    auto res = run_cascade(cfg.problem, cfg.initial, cfg.solver, cfg.cascade.schedule,
                           cfg.cascade.tol);
    fs::create_directories(out);
    write_front_csv(out / "front.csv", res.limit());
    write_snapshots_csv(out / "snapshots.csv", res.limit());
    for (std::size_t k = 0; k < res.levels.size(); ++k) {
        if (res.delegated) break;
        write_front_csv(out / ("front_n" + std::to_string(res.schedule[k]) + ".csv"),
                        res.levels[k]);
    }
    nlohmann::json j;
    j["problem"] = spec_to_json(cfg.problem);
    j["schedule"] = res.schedule;
    j["delegated"] = res.delegated;
    j["converged"] = res.converged;
    if (res.tol) j["tol"] = *res.tol;
    j["consecutive_diffs"] = res.consecutive_diffs;
    {
        std::vector<double> margins;
        for (const auto& o : res.ordering) margins.push_back(o.worst_margin);
        j["ordering_worst_margins"] = margins;
    }
    write_json(out / "cascade_summary.json", j);
    std::cout << "cascade: " << res.levels.size() << " level(s), converged = "
              << (res.converged ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_mms(const RunConfig& cfg, const fs::path& out) {
    auto table = run_mms(cfg.problem, cfg.mms);
    fs::create_directories(out);
    write_convergence_csv(out / "convergence.csv", table);
    for (const auto& row : table) {
        std::cout << "N = " << row.n << ", err_u = " << format_full(row.err_u)
                  << ", err_s = " << format_full(row.err_s);
        if (row.order_u) std::cout << ", order_u = " << format_full(*row.order_u);
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out) {
    SuiteOptions options;
    options.ordering_tol = cfg.verify.ordering_tol;
    options.quick = cfg.verify.quick;
    auto report = property_suite(options);

    fs::create_directories(out);
    nlohmann::json j;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        j["checks"].push_back({{"id", c.id},
                               {"passed", c.passed},
                               {"kind", c.kind == CheckKind::ToleranceSensitivity
                                            ? "tolerance_sensitivity"
                                            : "normal"},
                               {"detail", c.detail}});
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.id;
        if (!c.passed && c.kind == CheckKind::ToleranceSensitivity) {
            std::cout << " (tolerance sensitivity)";
        }
        if (!c.detail.empty()) std::cout << " — " << c.detail;
        std::cout << "\n";
    }
    j["all_green"] = report.all_green();
    write_json(out / "verify_report.json", j);

    if (report.all_green()) return kExitOk;
    if (report.only_tolerance_failures()) return kExitToleranceOnly;
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for a coupled reaction-diffusion system with a Stefan free boundary"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "./out";
    unsigned jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "worker threads for independent cells");
    };

    auto* sim = app.add_subcommand("simulate", "run one problem and classify the outcome");
    auto* sweep = app.add_subcommand("sweep", "regime map over (p, q, amplitude) grids");
    auto* cascade = app.add_subcommand("cascade", "shifted-problem cascade for p < 1 or q < 1");
    auto* verify = app.add_subcommand("verify", "run the cross-module property suite");
    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence ladder");
    for (auto* sub : {sim, sweep, cascade, verify, mms}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_path);
        const fs::path out(out_dir);
        if (sim->parsed()) return cmd_simulate(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out, jobs);
        if (cascade->parsed()) return cmd_cascade(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        if (mms->parsed()) return cmd_mms(cfg, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
    return kExitOk;
}
