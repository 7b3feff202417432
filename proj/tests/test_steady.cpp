#include <doctest.h>

#include <cmath>
#include <random>

#include "fwm/geometry.hpp"
#include "fwm/steady.hpp"

using namespace fwm;

namespace {

PhysParams params(double alpha, double g21 = 0.0) {
    PhysParams p;
    p.alpha = alpha;
    p.gamma31 = 1.25;
    p.gamma41 = 1.25;
    p.gamma21 = g21;
    return p;
}

}  // namespace

TEST_CASE("analytic sincos values at the medium exit") {
    // frozen from direct high-precision evaluation of the closed form
    const SincosIntensities r19 = analytic_sincos(19.0, 1.0);
    CHECK(r19.probe == doctest::Approx(0.0179826307599).epsilon(1e-9));
    CHECK(r19.signal == doctest::Approx(0.621418120453).epsilon(1e-9));

    const SincosIntensities r240 = analytic_sincos(240.0, 1.0);
    CHECK(r240.probe == doctest::Approx(0.000164555468303).epsilon(1e-9));
    CHECK(r240.signal == doctest::Approx(0.960033058677).epsilon(1e-9));

    // large-OD reduction sits within 0.2% of the exact value at alpha = 240
    const double reduced = sincos_large_od_signal(240.0);
    CHECK(reduced == doctest::Approx(0.958876648329).epsilon(1e-10));
    CHECK(std::abs(reduced - r240.signal) / r240.signal < 2e-3);
}

TEST_CASE("analytic sincos boundary forms at z = 0") {
    // the closed-form pair describes the normal modes away from z = L: the
    // signal expression evaluates to 1 at z = 0 and the probe one to 0
    const SincosIntensities r = analytic_sincos(19.0, 0.0);
    CHECK(r.signal == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.probe == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("analytic sincos is continuous through kappa = 0") {
    const double a0 = 2.0 * pi;  // kappa vanishes here
    const SincosIntensities mid = analytic_sincos(a0, 1.0);
    const SincosIntensities lo = analytic_sincos(a0 * (1.0 - 1e-9), 1.0);
    const SincosIntensities hi = analytic_sincos(a0 * (1.0 + 1e-9), 1.0);
    CHECK(mid.signal == doctest::Approx(lo.signal).epsilon(1e-7));
    CHECK(mid.signal == doctest::Approx(hi.signal).epsilon(1e-7));
    CHECK(mid.probe == doctest::Approx(lo.probe).epsilon(1e-7));
    CHECK(mid.probe == doctest::Approx(hi.probe).epsilon(1e-7));
    // below the threshold kappa is imaginary; values must stay real and sane
    const SincosIntensities low_od = analytic_sincos(5.0, 1.0);
    CHECK(low_od.probe == doctest::Approx(0.148357912397).epsilon(1e-9));
    CHECK(low_od.signal == doctest::Approx(0.223607118495).epsilon(1e-9));
}

TEST_CASE("steady integration reproduces the modulated closed form") {
    const ControlProfile prof = profile_sincos(0.5);
    const SteadySolution sol = integrate_steady(prof, params(240.0));
    CHECK(sol.conversion_efficiency == doctest::Approx(0.960033058677).epsilon(1e-7));
    CHECK(sol.probe_transmission == doctest::Approx(0.000164555468303).epsilon(1e-5));
    CHECK(std::abs(sol.conversion_efficiency - 0.9601) < 1e-4);
    CHECK(std::abs(sol.probe_transmission - 1.65e-4) < 1e-6);
}

TEST_CASE("uniform equal controls reach the closed-form conversion limit curve") {
    const ControlProfile prof = profile_uniform(0.3, 0.3);
    const SteadySolution sol = integrate_steady(prof, params(19.0));
    CHECK(sol.conversion_efficiency == doctest::Approx(0.249962575486).epsilon(1e-8));
    CHECK(sol.conversion_efficiency < 0.25);
}

TEST_CASE("no driving field means perfect transparency and no conversion") {
    const ControlProfile prof = profile_uniform(0.26, 0.0);
    for (double alpha : {5.0, 19.0, 120.0}) {
        const SteadySolution sol = integrate_steady(prof, params(alpha));
        CHECK(sol.probe_transmission == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.conversion_efficiency == 0.0);  // the signal channel never opens
    }
}

TEST_CASE("oracle equivalence between integration and the closed form") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(1.0, 300.0);
    const ControlProfile prof = profile_sincos(0.5);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = u(rng);
        const SteadySolution sol = integrate_steady(prof, params(alpha));
        const SincosIntensities ref = analytic_sincos(alpha, 1.0);
        CHECK(std::abs(sol.conversion_efficiency - ref.signal) < 1e-6);
        CHECK(std::abs(sol.probe_transmission - ref.probe) < 1e-6);
    }
}

TEST_CASE("propagated normal modes match the uniform-control solutions") {
    const ControlProfile prof = profile_uniform(0.3, 0.3);
    const PhysParams p = params(19.0);
    SteadyOptions opt;
    opt.omega_p0 = 0.01;
    const SteadySolution sol = integrate_steady(prof, p, 2001, opt);
    const double scale = std::abs(opt.omega_p0) / std::sqrt(2.0);
    double worst_t = 0.0, worst_d = 0.0;
    for (std::size_t i = 0; i < sol.fields.z_grid.size(); ++i) {
        const NormalModes m = to_normal_modes(sol.fields.omega_p[i], sol.fields.omega_s[i],
                                              prof.omega_c(0.0), prof.omega_d(0.0));
        const UniformClosedForm ref =
            uniform_closed_form(19.0, sol.fields.z_grid[i], opt.omega_p0);
        worst_t = std::max(worst_t, std::abs(m.omega_T - ref.omega_T));
        worst_d = std::max(worst_d, std::abs(m.omega_D - ref.omega_D));
    }
    CHECK(worst_t / scale < 1e-8);
    CHECK(worst_d / scale < 1e-8);
}

TEST_CASE("uniform closed form boundary and asymptotic values") {
    const UniformClosedForm z0 = uniform_closed_form(19.0, 0.0);
    CHECK(std::abs(z0.omega_p - cplx{1.0}) < 1e-15);
    CHECK(std::abs(z0.omega_s) < 1e-15);

    const UniformClosedForm zl = uniform_closed_form(19.0, 1.0);
    CHECK(zl.omega_D.real() == doctest::Approx(-5.29282365e-5).epsilon(1e-7));

    // conversion limit of one quarter as the optical density grows
    const UniformClosedForm deep = uniform_closed_form(500.0, 1.0);
    CHECK(std::norm(deep.omega_s) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("total field power never grows along z") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ua(2.0, 120.0);
    std::uniform_real_distribution<double> uo(0.15, 0.6);
    std::uniform_real_distribution<double> ug(0.0, 2e-3);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = ua(rng);
        ControlProfile prof;
        switch (trial % 3) {
            case 0: prof = profile_sincos(uo(rng)); break;
            case 1: prof = profile_uniform(uo(rng), uo(rng)); break;
            default: {
                BeamGeometry g;
                g.delta_s = 54.0;
                g.omega_c_peak = uo(rng);
                g.omega_d_peak = uo(rng);
                prof = profile_gaussian_pair(g);
            }
        }
        const SteadySolution sol = integrate_steady(prof, params(alpha, ug(rng)));
        std::size_t violations = 0;
        double prev = std::norm(sol.fields.omega_p[0]) + std::norm(sol.fields.omega_s[0]);
        for (std::size_t i = 1; i < sol.fields.z_grid.size(); ++i) {
            const double cur = std::norm(sol.fields.omega_p[i]) + std::norm(sol.fields.omega_s[i]);
            if (cur > prev * (1.0 + 1e-12)) ++violations;
            prev = cur;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("role swap mirrors the solution exactly") {
    BeamGeometry g;
    g.delta_s = 30.0;
    const ControlProfile prof = profile_gaussian_pair(g);
    PhysParams p = params(19.0, 8e-4);

    SteadyOptions probe_in;
    probe_in.omega_p0 = 0.01;
    probe_in.omega_s0 = 0.0;
    const SteadySolution a = integrate_steady(prof, p, 1001, probe_in);

    // swapped roles: control functions exchanged, injection on the signal port
    ControlProfile swapped;
    swapped.kind = prof.kind;
    swapped.omega_c = prof.omega_d;
    swapped.omega_d = prof.omega_c;
    SteadyOptions signal_in;
    signal_in.omega_p0 = 0.0;
    signal_in.omega_s0 = 0.01;
    const SteadySolution b = integrate_steady(swapped, p, 1001, signal_in);

    for (std::size_t i = 0; i < a.fields.z_grid.size(); ++i) {
        CHECK(a.fields.omega_p[i] == b.fields.omega_s[i]);
        CHECK(a.fields.omega_s[i] == b.fields.omega_p[i]);
    }
}

TEST_CASE("od sweep is monotone for the modulated profile") {
    const ControlProfile prof = profile_sincos(0.5);
    const auto rows = sweep_od({10.0, 50.0, 240.0}, prof, params(1.0));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ce < rows[1].ce);
    CHECK(rows[1].ce < rows[2].ce);
    CHECK(rows[2].ce == doctest::Approx(0.96).epsilon(1e-3));
    for (const auto& r : rows) {
        const SincosIntensities ref = analytic_sincos(r.alpha, 1.0);
        CHECK(std::abs(r.ce - ref.signal) < 1e-6);
    }
}

TEST_CASE("od sweep of an empty list is empty") {
    const ControlProfile prof = profile_sincos(0.5);
    CHECK(sweep_od({}, prof, params(1.0)).empty());
}

TEST_CASE("sweep results are identical across job counts") {
    const ControlProfile prof = profile_sincos(0.4);
    const auto serial = sweep_od({5.0, 19.0, 77.0, 240.0}, prof, params(1.0), 2001, {}, 1);
    const auto parallel = sweep_od({5.0, 19.0, 77.0, 240.0}, prof, params(1.0), 2001, {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].t_p == parallel[i].t_p);
        CHECK(serial[i].ce == parallel[i].ce);
    }
}
