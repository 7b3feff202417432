// steady.hpp - steady-state (CW) propagation of the probe/signal pair through
// the medium, plus the closed-form solutions used as oracles.

#pragma once

#include "fwm/bloch.hpp"
#include "fwm/core.hpp"

namespace fwm {

struct SteadySolution {
    FieldState fields;
    double probe_transmission = 0.0;     // |omega_p(end)|^2 / |omega_p0|^2
    double conversion_efficiency = 0.0;  // |omega_s(end)|^2 / |omega_p0|^2
};

struct SteadyOptions {
    cplx omega_p0 = 0.01;
    cplx omega_s0 = 0.0;  // boundary injection on the signal port
    bool convergence_check = true;
    double convergence_tol = 1e-8;  // step-halving change allowed in T_p, CE
};

// Marches d(omega_p)/dz = i(alpha gamma31/2) rho(z) rho31,
//         d(omega_s)/dz = i(alpha gamma41/2) rho(z) rho41
// with classical fixed-step RK4 on a uniform n_z grid over the body window,
// closing the right-hand side with steady_coherences at every stage. The
// built-in step-halving check rejects under-resolved runs.
SteadySolution integrate_steady(const ControlProfile& profile, const PhysParams& params,
                                std::size_t n_z = 2001, const SteadyOptions& opt = {},
                                const MediumBody& body = MediumBody::uniform());

// Closed-form intensities for the sine/cosine modulated controls, normalised
// to unit input probe intensity. Valid for gamma21 = 0 and gamma31 = gamma41;
// the expressions equal the physical |omega_p|^2, |omega_s|^2 at z = L only
// (elsewhere they are the normal-mode magnitudes, swapped at z = 0).
struct SincosIntensities {
    double probe = 0.0;
    double signal = 0.0;
};
SincosIntensities analytic_sincos(double alpha, double z);

// Large-optical-density reductions of the same solutions at z = L.
double sincos_large_od_probe(double alpha);
double sincos_large_od_signal(double alpha);

// Equal uniform controls, gamma21 = 0: constant TM, exponentially damped DM,
// and the probe/signal fields recovered through the inverse mode transform.
struct UniformClosedForm {
    cplx omega_T{};
    cplx omega_D{};
    cplx omega_p{};
    cplx omega_s{};
};
UniformClosedForm uniform_closed_form(double alpha, double z, cplx omega_p0 = 1.0);

struct OdSweepRow {
    double alpha = 0.0;
    double t_p = 0.0;
    double ce = 0.0;
};

// One steady solution per optical density; rows keep the input order.
std::vector<OdSweepRow> sweep_od(const std::vector<double>& alphas, const ControlProfile& profile,
                                 PhysParams params, std::size_t n_z = 2001,
                                 const SteadyOptions& opt = {}, int jobs = 1);

}  // namespace fwm
