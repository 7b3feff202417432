// bloch.hpp - point-wise steady state of the on-resonance optical Bloch
// equations for the double-Lambda system, and the transmission/dissipation
// normal-mode change of basis.

#pragma once

#include "fwm/core.hpp"

namespace fwm {

// Normal-mode amplitudes. omega_T rides the EIT-protected channel, omega_D
// sees plain two-level absorption.
struct NormalModes {
    cplx omega_T{};
    cplx omega_D{};
    double omega_tot = 0.0;  // sqrt(|omega_c|^2 + |omega_d|^2)
};

// Unique (rho31, rho41, rho21) with the time derivatives zeroed:
//   gamma41 rho41 = i(omega_s + omega_d rho21)
//   gamma31 rho31 = i(omega_p + omega_c rho21)
//   gamma21 rho21 = i(conj(omega_c) rho31 + conj(omega_d) rho41)
// When both controls vanish and gamma21 = 0 the ground-state coherence is
// undriven; the decoupled two-level solution with rho21 = 0 is returned.
CoherenceState steady_coherences(cplx omega_p, cplx omega_s, cplx omega_c, cplx omega_d,
                                 const PhysParams& p);

// 2x2 unitary map (probe, signal) -> (TM, DM); throws SolverError when the
// basis is undefined (omega_tot = 0).
NormalModes to_normal_modes(cplx omega_p, cplx omega_s, cplx omega_c, cplx omega_d);

// Conjugate-transpose of the map above; composition with to_normal_modes is
// the identity.
std::pair<cplx, cplx> from_normal_modes(const NormalModes& m, cplx omega_c, cplx omega_d);

}  // namespace fwm
