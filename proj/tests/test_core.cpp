#include <doctest.h>

#include <cmath>

#include "fwm/core.hpp"

using namespace fwm;

TEST_CASE("params validate accepts the pulsed-regime reference set") {
    PhysParams p;
    p.alpha = 19.0;
    p.gamma31 = 1.25;
    p.gamma41 = 1.25;
    p.gamma21 = 5e-4;
    std::vector<std::string> warnings;
    p.validate(&warnings);
    CHECK(warnings.empty());
}

TEST_CASE("params validate rejects non-positive alpha") {
    PhysParams p;
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.alpha = -3.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("params validate warns on large ground-state dephasing") {
    PhysParams p;
    p.alpha = 19.0;
    p.gamma21 = 0.2;
    std::vector<std::string> warnings;
    p.validate(&warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("gamma21") != std::string::npos);
}

TEST_CASE("time conversion uses the physical Gamma") {
    PhysParams p;
    p.alpha = 19.0;
    // 351.33/Gamma at Gamma = 2pi x 6 MHz is 9.32 us
    CHECK(p.to_microseconds(351.3313609467456) == doctest::Approx(9.3193537).epsilon(1e-6));
}

TEST_CASE("build_grid produces uniform grids") {
    const Grids g = build_grid(3);
    REQUIRE(g.z.size() == 3);
    CHECK(g.z[0] == 0.0);
    CHECK(g.z[1] == 0.5);
    CHECK(g.z[2] == 1.0);
    CHECK(g.t.empty());
}

TEST_CASE("build_grid rejects degenerate inputs") {
    CHECK_THROWS_AS(build_grid(1), ConfigError);
    CHECK_THROWS_AS(build_grid(11, std::size_t{5}, -1.0), ConfigError);
    CHECK_THROWS_AS(build_grid(11, std::size_t{5}, 0.0), ConfigError);
}

TEST_CASE("build_grid shapes for a time-domain request") {
    const Grids g = build_grid(2001, std::size_t{4001}, 2000.0);
    CHECK(g.z.size() == 2001);
    CHECK(g.t.size() == 4001);
    CHECK(g.t.front() == 0.0);
    CHECK(g.t.back() == 2000.0);
}

TEST_CASE("grid spacing is uniform to round-off") {
    const auto z = uniform_grid(2001, 0.0, 1.0);
    const double h0 = z[1] - z[0];
    double worst = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        worst = std::max(worst, std::abs((z[i] - z[i - 1]) - h0));
    }
    CHECK(worst < 1e-12 * h0);
}

TEST_CASE("gaussian body integrates to one over its window") {
    const MediumBody body = MediumBody::gaussian(1.0, 1.0);
    CHECK(body.z_start == -1.0);
    CHECK(body.z_end == 2.0);
    const std::size_t n = 20001;
    const double h = (body.z_end - body.z_start) / static_cast<double>(n - 1);
    double integral = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        integral += w * h * body.density(body.z_start + h * static_cast<double>(i));
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("coherence magnitudes flag the perturbative regime") {
    CoherenceState ok{cplx{0.0, 0.01}, cplx{0.0, 0.005}, cplx{-0.04, 0.0}};
    CHECK(ok.perturbative());
    CHECK(ok.max_abs() == doctest::Approx(0.04));
    CoherenceState bad{cplx{0.0, 0.2}, cplx{0.0, 0.1}, cplx{-1.5, 0.0}};
    CHECK(!bad.perturbative());
}

TEST_CASE("field state validation catches shape mismatches") {
    FieldState f;
    f.z_grid = {0.0, 0.5, 1.0};
    f.omega_p = {1.0, 1.0, 1.0};
    f.omega_s = {0.0, 0.0};
    CHECK_THROWS_AS(f.validate(), SolverError);
    f.omega_s = {0.0, 0.0, 0.0};
    CHECK_NOTHROW(f.validate());
    f.z_grid = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(f.validate(), SolverError);
}
