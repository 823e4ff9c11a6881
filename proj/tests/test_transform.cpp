#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "frontsolve/transform.hpp"

using namespace frontsolve;

TEST_CASE("to_fixed maps endpoints and interior points", "[transform]") {
    CHECK(to_fixed(0.0, 3.0) == 0.0);
    CHECK(to_fixed(2.0, 2.0) == 1.0);
    CHECK(to_fixed(1.5, 2.0) == 0.75);
    CHECK_THROWS_AS(to_fixed(-0.1, 2.0), OutOfDomain);
    CHECK_THROWS_AS(to_fixed(2.1, 2.0), OutOfDomain);
    CHECK_THROWS_AS(to_fixed(1.0, 0.0), OutOfDomain);
}

TEST_CASE("from_fixed inverts to_fixed", "[transform]") {
    CHECK(from_fixed(1.0, 4.2) == 4.2);
    CHECK(from_fixed(0.75, 2.0) == 1.5);
    CHECK_THROWS_AS(from_fixed(1.5, 2.0), OutOfDomain);
    CHECK_THROWS_AS(from_fixed(-0.5, 2.0), OutOfDomain);

    const double x = 0.3, s = 1.7;
    const double back = from_fixed(to_fixed(x, s), s);
    CHECK(std::abs(back - x) <= std::abs(x) * 1e-16);
}

TEST_CASE("round trip stays within one ulp over a sample", "[transform][property]") {
    for (int i = 0; i <= 200; ++i) {
        const double s = 0.3 + 0.07 * i;
        const double x = s * (static_cast<double>(i % 17) / 17.0);
        const double back = from_fixed(to_fixed(x, s), s);
        CHECK(std::abs(back - x) <= std::abs(x) * 1e-16 + 1e-300);
    }
}

TEST_CASE("coefficients of the fixed-domain system", "[transform]") {
    auto c = coefficients(2.0, 0.0, 0.9);
    CHECK(c.f == 0.25);
    CHECK(c.g == 0.0);

    c = coefficients(1.0, 1.0, 1.0);
    CHECK(c.f == 1.0);
    CHECK(c.g == 1.0);

    c = coefficients(2.0, 0.5, 0.5);
    CHECK(c.f == 0.25);
    CHECK(c.g == 0.125);
}

TEST_CASE("advection coefficient vanishes at y = 0", "[transform][property]") {
    for (double s : {0.5, 1.0, 7.3}) {
        for (double sp : {0.0, 0.1, 42.0}) {
            CHECK(coefficients(s, sp, 0.0).g == 0.0);
        }
    }
}

TEST_CASE("physical gradient rescales the fixed-domain slope", "[transform]") {
    CHECK(physical_gradient(-2.0, 2.0) == -1.0);
    CHECK(physical_gradient(0.0, 123.0) == 0.0);
    // w(y) = 1 - y^2 with s = 2 is u(x) = 1 - (x/2)^2; u_x(2) = -1 = w_y(1)/s
    CHECK(physical_gradient(-2.0, 2.0) == -1.0);
}

TEST_CASE("boundary slope stencil is exact for quadratics and linears", "[transform]") {
    // w = 1 - y^2 on five nodes
    std::vector<double> quad{1.0, 0.9375, 0.75, 0.4375, 0.0};
    CHECK(boundary_slope(quad, 0.25) == -2.0);

    std::vector<double> lin{1.0, 0.75, 0.5, 0.25, 0.0};
    CHECK(boundary_slope(lin, 0.25) == -1.0);

    std::vector<double> zero(5, 0.0);
    CHECK(boundary_slope(zero, 0.25) == 0.0);

    std::vector<double> tiny{1.0, 0.0};
    CHECK_THROWS_AS(boundary_slope(tiny, 0.5), GridTooCoarse);
}

TEST_CASE("boundary slope converges at second order", "[transform][property]") {
    // cos(pi y / 2) vanishes at y = 1 with analytic slope -pi/2 there
    double prev_err = 0.0;
    for (std::size_t n : {std::size_t{32}, std::size_t{64}, std::size_t{128}, std::size_t{256}}) {
        std::vector<double> prof(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            prof[i] = std::cos(std::numbers::pi * static_cast<double>(i) /
                               (2.0 * static_cast<double>(n)));
        }
        prof[n] = 0.0;
        const double err =
            std::abs(boundary_slope(prof, 1.0 / static_cast<double>(n)) + std::numbers::pi / 2.0);
        if (n > 32) {
            const double order = std::log2(prev_err / err);
            CHECK(order >= 1.9);
        }
        prev_err = err;
    }
}
