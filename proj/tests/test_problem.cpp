#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frontsolve/problem.hpp"

using namespace frontsolve;

TEST_CASE("parameter positivity is enforced and names the field", "[problem]") {
    ProblemSpec spec;
    spec.d1 = 0.0;
    try {
        spec.validate();
        FAIL("expected NonPositiveParameter");
    } catch (const NonPositiveParameter& e) {
        CHECK(e.field() == "d1");
    }

    spec = ProblemSpec{};
    spec.p = -1.0;
    CHECK_THROWS_AS(spec.validate(), NonPositiveParameter);
    spec = ProblemSpec{};
    spec.s0 = 0.0;
    CHECK_THROWS_AS(spec.validate(), NonPositiveParameter);
}

TEST_CASE("lipschitz flag tracks the exponents", "[problem]") {
    ProblemSpec spec;
    spec.p = 1.0;
    spec.q = 1.0;
    CHECK(spec.lipschitz());
    spec.p = 0.5;
    CHECK_FALSE(spec.lipschitz());
    spec.p = 2.0;
    spec.q = 0.99;
    CHECK_FALSE(spec.lipschitz());
}

TEST_CASE("parabola family sampled at N = 4 matches the closed form", "[problem]") {
    auto prof = make_initial_family("parabola", 1.0, 1.0, 4);
    REQUIRE(prof.size() == 5);
    CHECK(prof[0] == 1.0);
    CHECK(prof[1] == 0.9375);
    CHECK(prof[2] == 0.75);
    CHECK(prof[3] == 0.4375);
    CHECK(prof[4] == 0.0);
}

TEST_CASE("cosine family sampled at N = 2 matches the closed form", "[problem]") {
    auto prof = make_initial_family("cosine", 2.0, 1.0, 2);
    REQUIRE(prof.size() == 3);
    CHECK(prof[0] == 2.0);
    CHECK(prof[1] == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(prof[2] == 0.0); // endpoint is exact, not cos(pi/2) round-off
}

TEST_CASE("family construction rejects bad arguments", "[problem]") {
    CHECK_THROWS_AS(make_initial_family("parabola", 0.0, 1.0, 8), NonPositiveParameter);
    CHECK_THROWS_AS(make_initial_family("witch_of_agnesi", 1.0, 1.0, 8), UnknownFamily);
    CHECK_THROWS_AS(make_initial_family("cosine", 1.0, 1.0, 1), GridTooCoarse);
}

TEST_CASE("validate_spec normalizes families onto the requested grid", "[problem]") {
    ProblemSpec spec;
    InitialData data{FamilyProfile{FamilyKind::Cosine, 1.0},
                     FamilyProfile{FamilyKind::Parabola, 2.0}};
    auto prob = validate_spec(spec, data, 64);
    REQUIRE(prob.u0.size() == 65);
    CHECK(prob.u0[0] == 1.0);
    CHECK(prob.u0[64] == 0.0);
    CHECK(prob.v0[0] == 2.0);
    // cosine value at the first interior node
    CHECK(prob.u0[1] == Catch::Approx(std::cos(std::numbers::pi / 128.0)).epsilon(1e-15));
}

TEST_CASE("sampled data with a nonzero endpoint is rejected", "[problem]") {
    ProblemSpec spec;
    auto good = make_initial_family("parabola", 1.0, 1.0, 16);
    auto bad = good;
    bad[16] = 0.1;
    try {
        validate_spec(spec, InitialData{good, bad}, 16);
        FAIL("expected IncompatibleInitialData");
    } catch (const IncompatibleInitialData& e) {
        CHECK(e.which().find("v0") != std::string::npos);
        CHECK(e.node() == 16);
    }
}

TEST_CASE("sampled data must be strictly positive before the front", "[problem]") {
    ProblemSpec spec;
    auto good = make_initial_family("parabola", 1.0, 1.0, 16);
    auto bad = good;
    bad[7] = 0.0;
    CHECK_THROWS_AS(validate_spec(spec, InitialData{bad, good}, 16), IncompatibleInitialData);
}

TEST_CASE("sampled data with a sloped left end is rejected", "[problem]") {
    ProblemSpec spec;
    SampledProfile tent(17);
    for (std::size_t i = 0; i < 17; ++i) {
        tent[i] = 1.0 - static_cast<double>(i) / 16.0; // slope -1 at x = 0
    }
    tent[16] = 0.0;
    CHECK_THROWS_AS(validate_spec(spec, InitialData{tent, tent}, 16), IncompatibleInitialData);
}

TEST_CASE("sample count must match the requested grid", "[problem]") {
    ProblemSpec spec;
    auto prof = make_initial_family("parabola", 1.0, 1.0, 16);
    CHECK_THROWS_AS(validate_spec(spec, InitialData{prof, prof}, 32), IncompatibleInitialData);
}

TEST_CASE("every family profile passes validation", "[problem][property]") {
    ProblemSpec spec;
    for (double amplitude : {0.01, 1.0, 17.5}) {
        for (double s0 : {0.5, 1.0, 3.0}) {
            for (std::size_t n : {std::size_t{8}, std::size_t{33}, std::size_t{64}}) {
                spec.s0 = s0;
                for (auto kind : {FamilyKind::Cosine, FamilyKind::Parabola}) {
                    InitialData data{FamilyProfile{kind, amplitude},
                                     FamilyProfile{kind, amplitude}};
                    CHECK_NOTHROW(validate_spec(spec, data, n));
                }
                // Parabola samples are exact for the one-sided slope stencil,
                // so they also pass when re-fed as raw samples.
                auto prof = make_initial_family(FamilyKind::Parabola, amplitude, s0, n);
                CHECK_NOTHROW(validate_spec(spec, InitialData{prof, prof}, n));
            }
        }
    }
}

TEST_CASE("c1 norm of the unit parabola", "[problem]") {
    auto prof = make_initial_family("parabola", 1.0, 1.0, 64);
    // sup 1, max slope 2 at x = 1; central differences are exact for quadratics
    CHECK(c1_norm(prof, 1.0) == Catch::Approx(3.0).epsilon(1e-12));
}
