#include "fwm/steady.hpp"

#include <array>
#include <cmath>

#include "fwm/io.hpp"

namespace fwm {

namespace {

struct Fields {
    cplx p, s;
};

Fields rhs(const Fields& y, cplx oc, cplx od, double dens, const PhysParams& pp) {
    const CoherenceState st = steady_coherences(y.p, y.s, oc, od, pp);
    const cplx i{0.0, 1.0};
    return {i * (pp.alpha * pp.gamma31 / 2.0) * dens * st.rho31,
            i * (pp.alpha * pp.gamma41 / 2.0) * dens * st.rho41};
}

// single RK4 march over n points; optionally records the full field profile
Fields march(const ControlProfile& prof, const PhysParams& pp, const MediumBody& body,
             std::size_t n, const SteadyOptions& opt, FieldState* record) {
    const double h = (body.z_end - body.z_start) / static_cast<double>(n - 1);
    Fields y{opt.omega_p0, opt.omega_s0};
    if (record) {
        record->z_grid.resize(n);
        record->omega_p.resize(n);
        record->omega_s.resize(n);
        record->z_grid[0] = body.z_start;
        record->omega_p[0] = y.p;
        record->omega_s[0] = y.s;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double z0 = body.z_start + h * static_cast<double>(k);
        const double zm = z0 + 0.5 * h;
        const double z1 = z0 + h;
        const cplx oc0 = prof.omega_c(z0), od0 = prof.omega_d(z0);
        const cplx ocm = prof.omega_c(zm), odm = prof.omega_d(zm);
        const cplx oc1 = prof.omega_c(z1), od1 = prof.omega_d(z1);
        const double d0 = body.density(z0), dm = body.density(zm), d1 = body.density(z1);

        const Fields k1 = rhs(y, oc0, od0, d0, pp);
        const Fields k2 = rhs({y.p + 0.5 * h * k1.p, y.s + 0.5 * h * k1.s}, ocm, odm, dm, pp);
        const Fields k3 = rhs({y.p + 0.5 * h * k2.p, y.s + 0.5 * h * k2.s}, ocm, odm, dm, pp);
        const Fields k4 = rhs({y.p + h * k3.p, y.s + h * k3.s}, oc1, od1, d1, pp);
        y.p += h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        y.s += h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
        if (record) {
            record->z_grid[k + 1] = (k + 2 == n) ? body.z_end : z1;
            record->omega_p[k + 1] = y.p;
            record->omega_s[k + 1] = y.s;
        }
    }
    return y;
}

}  // namespace

SteadySolution integrate_steady(const ControlProfile& profile, const PhysParams& params,
                                std::size_t n_z, const SteadyOptions& opt,
                                const MediumBody& body) {
    params.validate();
    if (n_z < 2) throw ConfigError("integrate_steady needs n_z >= 2");
    const double in = std::norm(opt.omega_p0) + std::norm(opt.omega_s0);
    if (!(in > 0.0)) throw ConfigError("no field injected at the boundary");

    SteadySolution sol;
    const Fields out = march(profile, params, body, n_z, opt, &sol.fields);
    sol.probe_transmission = std::norm(out.p) / in;
    sol.conversion_efficiency = std::norm(out.s) / in;

    if (opt.convergence_check) {
        const Fields fine = march(profile, params, body, 2 * (n_z - 1) + 1, opt, nullptr);
        const double dtp = std::abs(std::norm(fine.p) / in - sol.probe_transmission);
        const double dce = std::abs(std::norm(fine.s) / in - sol.conversion_efficiency);
        if (dtp >= opt.convergence_tol || dce >= opt.convergence_tol) {
            throw SolverError("steady integration not converged: step halving changes T_p by " +
                              format_double(dtp) + ", CE by " + format_double(dce));
        }
    }
    const double total = sol.probe_transmission + sol.conversion_efficiency;
    const double budget = 1.0 + 1e-9;
    if (total > budget) {
        throw SolverError("passive-medium budget violated: T_p + CE = " + format_double(total));
    }
    return sol;
}

SincosIntensities analytic_sincos(double alpha, double z) {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    const double eta = alpha / 2.0;
    const double beta = pi / 2.0;
    // kappa may be real or imaginary; complex evaluation covers both branches
    // and sinh(kz)/k is continued through kappa = 0 by its series.
    const cplx kappa = std::sqrt(cplx{(eta / 2.0) * (eta / 2.0) - beta * beta, 0.0});
    cplx sin_ratio;  // sinh(kappa z)/kappa
    if (std::abs(kappa) * std::abs(z) < 1e-6) {
        const cplx k2z2 = kappa * kappa * z * z;
        sin_ratio = z * (1.0 + k2z2 / 6.0 + k2z2 * k2z2 / 120.0);
    } else {
        sin_ratio = std::sinh(kappa * z) / kappa;
    }
    const cplx ch = std::cosh(kappa * z);
    const double damp = std::exp(-eta * z);
    SincosIntensities out;
    out.probe = (beta * beta) * (sin_ratio * sin_ratio).real() * damp;
    const cplx bracket = ch + (eta / 2.0) * sin_ratio;
    out.signal = (bracket * bracket).real() * damp;
    return out;
}

double sincos_large_od_probe(double alpha) {
    const double e = 1.0 - std::exp(-alpha / 2.0);
    return pi * pi / (alpha * alpha) * e * e;
}

double sincos_large_od_signal(double alpha) { return 1.0 - pi * pi / alpha; }

UniformClosedForm uniform_closed_form(double alpha, double z, cplx omega_p0) {
    UniformClosedForm u;
    const double root_half = 1.0 / std::sqrt(2.0);
    u.omega_T = omega_p0 * root_half;
    u.omega_D = -omega_p0 * root_half * std::exp(-alpha * z / 2.0);
    u.omega_p = (u.omega_T - u.omega_D) * root_half;
    u.omega_s = (u.omega_T + u.omega_D) * root_half;
    return u;
}

std::vector<OdSweepRow> sweep_od(const std::vector<double>& alphas, const ControlProfile& profile,
                                 PhysParams params, std::size_t n_z, const SteadyOptions& opt,
                                 int jobs) {
    std::vector<OdSweepRow> rows(alphas.size());
    parallel_for(alphas.size(), jobs, [&](std::size_t i) {
        PhysParams p = params;
        p.alpha = alphas[i];
        const SteadySolution sol = integrate_steady(profile, p, n_z, opt);
        rows[i] = {alphas[i], sol.probe_transmission, sol.conversion_efficiency};
    });
    return rows;
}

}  // namespace fwm
