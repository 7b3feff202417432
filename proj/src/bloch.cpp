#include "fwm/bloch.hpp"

#include <cmath>

namespace fwm {

CoherenceState steady_coherences(cplx omega_p, cplx omega_s, cplx omega_c, cplx omega_d,
                                 const PhysParams& p) {
    const cplx i{0.0, 1.0};
    // Eliminate rho31 and rho41 from the rho21 equation; the remaining
    // scalar equation is solved directly. The grouping of the sums keeps the
    // probe<->signal role swap exact in floating point.
    const double denom =
        p.gamma21 + (std::norm(omega_c) / p.gamma31 + std::norm(omega_d) / p.gamma41);

    CoherenceState st;
    if (denom > 1e-300) {
        const cplx numer = std::conj(omega_c) * omega_p / p.gamma31 +
                           std::conj(omega_d) * omega_s / p.gamma41;
        st.rho21 = -numer / denom;
    } else {
        // both controls zero with gamma21 = 0: undriven ground-state
        // coherence, fields decouple into two-level responses
        st.rho21 = 0.0;
    }
    st.rho31 = i * (omega_p + omega_c * st.rho21) / p.gamma31;
    st.rho41 = i * (omega_s + omega_d * st.rho21) / p.gamma41;
    return st;
}

NormalModes to_normal_modes(cplx omega_p, cplx omega_s, cplx omega_c, cplx omega_d) {
    const double tot = std::sqrt(std::norm(omega_c) + std::norm(omega_d));
    if (!(tot > 0.0)) throw SolverError("normal-mode basis undefined: both controls are zero");
    NormalModes m;
    m.omega_tot = tot;
    m.omega_T = (std::conj(omega_c) * omega_p + std::conj(omega_d) * omega_s) / tot;
    m.omega_D = (-omega_d * omega_p + omega_c * omega_s) / tot;
    return m;
}

std::pair<cplx, cplx> from_normal_modes(const NormalModes& m, cplx omega_c, cplx omega_d) {
    const double tot = std::sqrt(std::norm(omega_c) + std::norm(omega_d));
    if (!(tot > 0.0)) throw SolverError("normal-mode basis undefined: both controls are zero");
    const cplx op = (omega_c * m.omega_T - std::conj(omega_d) * m.omega_D) / tot;
    const cplx os = (omega_d * m.omega_T + std::conj(omega_c) * m.omega_D) / tot;
    return {op, os};
}

}  // namespace fwm
