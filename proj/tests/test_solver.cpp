#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frontsolve/solver.hpp"
#include "frontsolve/verify.hpp"

using namespace frontsolve;

namespace {

FixedDomainState make_state(std::size_t n, double s, double shift_a = 0.0, double shift_b = 0.0) {
    FixedDomainState st;
    st.s = s;
    st.w.assign(n + 1, 0.0);
    st.z.assign(n + 1, 0.0);
    st.shift_a = shift_a;
    st.shift_b = shift_b;
    return st;
}

} // namespace

TEST_CASE("zero state is a fixed point of the step", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    auto st = make_state(16, 1.0);
    auto next = advance_step(st, spec, 1e-3);
    CHECK(next.s == 1.0);
    CHECK(next.s_prime == 0.0);
    for (double v : next.w) CHECK(v == 0.0);
    for (double v : next.z) CHECK(v == 0.0);
}

TEST_CASE("one step keeps the boundary value and grows the front", "[solver]") {
    ProblemSpec spec; // p = q = 1, all ones
    auto prob = validate_spec(spec,
                              InitialData{FamilyProfile{FamilyKind::Parabola, 1.0},
                                          FamilyProfile{FamilyKind::Parabola, 1.0}},
                              64);
    FixedDomainState st;
    st.s = spec.s0;
    st.w = prob.u0;
    st.z = prob.v0;
    auto next = advance_step(st, spec, 1e-4);
    CHECK(next.w[64] == 0.0);
    CHECK(next.z[64] == 0.0);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(next.w[i] > 0.0);
        CHECK(next.z[i] > 0.0);
    }
    // parabola slope at the front is -2, so s' = -(mu/s)(w_y + rho z_y) = 4
    CHECK(st.s + 1e-4 * 4.0 == Catch::Approx(next.s).epsilon(1e-12));
    CHECK(next.s > st.s);
}

TEST_CASE("step controller follows the stiffness and advection bounds", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.dt_max = 0.5;

    // all-zero state: L floors at 1
    auto st = make_state(16, 1.0);
    CHECK(stability_dt(st, spec, cfg) == Catch::Approx(std::min(cfg.dt_max, cfg.cfl_reaction)));

    // sup z = 100 with p = 2: L = 200
    st.z[3] = 100.0;
    CHECK(stability_dt(st, spec, cfg) == Catch::Approx(cfg.cfl_reaction / 200.0));

    // huge sup forces the step under dt_min
    st.z[3] = 1e9;
    cfg.dt_min = 1e-9;
    CHECK_THROWS_AS(choose_dt(st, spec, cfg), StepCollapse);
}

TEST_CASE("advection CFL limits the step when the front moves", "[solver]") {
    ProblemSpec spec;
    SolverConfig cfg;
    cfg.dt_max = 10.0;
    cfg.cfl_reaction = 1e9; // disable the reaction bound for this check
    auto st = make_state(64, 2.0);
    st.s_prime = 4.0;
    CHECK(stability_dt(st, spec, cfg) ==
          Catch::Approx(cfg.cfl_advection * (1.0 / 64.0) * 2.0 / 4.0));
}

TEST_CASE("sub-unit exponents with zero shift use the stand-in stiffness shift", "[solver]") {
    ProblemSpec spec;
    spec.p = 0.5;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.dt_max = 10.0;
    cfg.stiffness_shift = 0.25;
    auto st = make_state(16, 1.0); // sup z = 0 would make 0.5 * z^{-0.5} blow up unshifted
    // L = max(0.5 * 0.25^{-1/2}, 2 * 0.25^{1}? no shift on q side, 1) = max(1, 0, 1) = 1
    CHECK(stability_dt(st, spec, cfg) == Catch::Approx(cfg.cfl_reaction / 1.0));
}

TEST_CASE("a step that would go far negative is rejected", "[solver]") {
    ProblemSpec spec; // p = q = 1
    const std::size_t n = 64;
    auto st = make_state(n, 1.0);
    // spike just inside the front plus a steep z-profile driving the advection
    st.w[n - 2] = 1.0;
    auto zprof = make_initial_family(FamilyKind::Parabola, 100.0, 1.0, n);
    st.z = zprof;
    CHECK_THROWS_AS(advance_step(st, spec, 0.01), StepRejected);
}

TEST_CASE("simulate is deterministic", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.n = 32;
    cfg.t_end = 0.5;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                     FamilyProfile{FamilyKind::Cosine, 0.5}};
    auto a = simulate(spec, data, cfg);
    auto b = simulate(spec, data, cfg);
    CHECK(a.times == b.times);
    CHECK(a.fronts == b.fronts);
    CHECK(a.front_speeds == b.front_speeds);
    CHECK(a.sup_u == b.sup_u);
    CHECK(a.sup_v == b.sup_v);
    CHECK(a.clamp_cumulative == b.clamp_cumulative);
}

TEST_CASE("fronts are monotone and positive data keeps the front moving", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.n = 32;
    cfg.t_end = 2.0;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 0.5},
                     FamilyProfile{FamilyKind::Parabola, 0.5}};
    auto traj = simulate(spec, data, cfg);
    REQUIRE(traj.status == RunStatus::Completed);
    auto mono = check_front_monotone(traj);
    CHECK(mono.passed);
    CHECK(traj.clamp_events * 1000 <= traj.node_updates);
}

TEST_CASE("sub-unit exponents without shifts are flagged", "[solver]") {
    ProblemSpec spec;
    spec.p = 0.5;
    SolverConfig cfg;
    cfg.n = 16;
    cfg.t_end = 0.1;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                     FamilyProfile{FamilyKind::Parabola, 1.0}};
    auto traj = simulate(spec, data, cfg);
    REQUIRE_FALSE(traj.warnings.empty());
    CHECK(traj.warnings.front().find("cascade") != std::string::npos);

    auto shifted = simulate(spec, data, cfg, {0.1, 0.1});
    CHECK(shifted.warnings.empty());
}

TEST_CASE("component swap symmetry is exact for dyadic rho", "[solver][property]") {
    SolverConfig cfg;
    cfg.n = 32;
    cfg.t_end = 0.5;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                     FamilyProfile{FamilyKind::Cosine, 0.5}};
    InitialData swapped_data{data.v0, data.u0};

    SECTION("rho = 1") {
        ProblemSpec spec;
        spec.p = 2.0;
        spec.q = 1.0;
        spec.d2 = 0.5;
        auto a = simulate(spec, data, cfg);
        auto b = simulate(swapped_spec(spec), swapped_data, cfg);
        CHECK(a.times == b.times);
        CHECK(a.fronts == b.fronts);
        CHECK(a.sup_u == b.sup_v);
        CHECK(a.sup_v == b.sup_u);
    }

    SECTION("rho = 2, mu = 0.5") {
        ProblemSpec spec;
        spec.p = 2.0;
        spec.q = 1.5;
        spec.rho = 2.0;
        spec.mu = 0.5;
        auto a = simulate(spec, data, cfg);
        auto b = simulate(swapped_spec(spec), swapped_data, cfg);
        CHECK(a.times == b.times);
        CHECK(a.fronts == b.fronts);
        CHECK(a.sup_u == b.sup_v);
        CHECK(a.sup_v == b.sup_u);
    }
}

TEST_CASE("component swap symmetry within round-off for general rho", "[solver][property]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    spec.rho = 1.5;
    SolverConfig cfg;
    cfg.n = 32;
    cfg.t_end = 0.2;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                     FamilyProfile{FamilyKind::Cosine, 0.5}};
    InitialData swapped_data{data.v0, data.u0};
    auto a = simulate(spec, data, cfg);
    auto b = simulate(swapped_spec(spec), swapped_data, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a.times[k] - b.times[k]) <= 1e-10 * (1.0 + a.times[k]));
        CHECK(std::abs(a.fronts[k] - b.fronts[k]) <= 1e-10 * a.fronts[k]);
        CHECK(std::abs(a.sup_u[k] - b.sup_v[k]) <= 1e-10 * (1e-12 + a.sup_u[k]));
        CHECK(std::abs(a.sup_v[k] - b.sup_u[k]) <= 1e-10 * (1e-12 + a.sup_v[k]));
    }
}

TEST_CASE("reaction stiffness can collapse the step into blow-up evidence", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.n = 32;
    cfg.t_end = 5.0;
    cfg.dt_min = 1e-6; // collapses once sup reaches ~ cfl_reaction / (2 dt_min)
    cfg.dt_init = 1e-5;
    InitialData data{FamilyProfile{FamilyKind::Parabola, 50.0},
                     FamilyProfile{FamilyKind::Parabola, 50.0}};
    auto traj = simulate(spec, data, cfg);
    CHECK(traj.status == RunStatus::BlowupDetected);
    CHECK(traj.stop_reason == StopReason::DtCollapse);
    auto ev = detect_blowup(traj, cfg.blowup_threshold);
    REQUIRE(ev.has_value());
    CHECK(ev->trigger == BlowupTrigger::DtCollapse);
}

TEST_CASE("overflow propagates as NonFiniteValue", "[solver]") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 2.0;
    SolverConfig cfg;
    cfg.n = 16;
    cfg.t_end = 100.0;
    cfg.dt_min = 1e-300;       // never collapse
    cfg.blowup_threshold = 1e300; // never cross before the reaction overflows
    InitialData data{FamilyProfile{FamilyKind::Parabola, 50.0},
                     FamilyProfile{FamilyKind::Parabola, 50.0}};
    CHECK_THROWS_AS(simulate(spec, data, cfg), NonFiniteValue);
}

TEST_CASE("config invariants are validated", "[solver]") {
    SolverConfig cfg;
    cfg.n = 4;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.dt_init = 1.0;
    cfg.dt_max = 0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.blowup_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("snapshots are taken at configured times", "[solver]") {
    ProblemSpec spec;
    SolverConfig cfg;
    cfg.n = 16;
    cfg.t_end = 1.0;
    cfg.snapshot_times = {0.25, 0.5};
    InitialData data{FamilyProfile{FamilyKind::Parabola, 1.0},
                     FamilyProfile{FamilyKind::Parabola, 1.0}};
    auto traj = simulate(spec, data, cfg);
    REQUIRE(traj.snapshots.size() == 4); // 0, 0.25, 0.5, 1.0
    CHECK(traj.snapshots[0].t == 0.0);
    CHECK(traj.snapshots[1].t == Catch::Approx(0.25).margin(1e-12));
    CHECK(traj.snapshots[2].t == Catch::Approx(0.5).margin(1e-12));
    CHECK(traj.snapshots[3].t == Catch::Approx(1.0).margin(1e-12));
    for (const auto& snap : traj.snapshots) {
        CHECK(snap.w[16] == 0.0);
        CHECK(snap.z[16] == 0.0);
    }
}
