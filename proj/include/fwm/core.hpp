// core.hpp - shared domain types, unit conventions and grid construction.
//
// Unit system: Rabi frequencies and decay rates in units of Gamma, position
// in units of the medium length L (z in [0,1] for a slab), time in units of
// 1/Gamma. gamma_unit converts times to seconds when reports need them.

#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Error classes map to CLI exit codes (config=2, solver=3, io=4).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Atomic/medium constants. alpha is the common optical density of the probe
// and signal transitions.
struct PhysParams {
    double alpha = 0.0;
    double gamma31 = 1.25;
    double gamma41 = 1.25;
    double gamma21 = 0.0;
    double length = 1.0;                    // L, the unit of the z axis
    double gamma_unit = 2.0 * pi * 6.0e6;   // Gamma in rad/s

    // Throws ConfigError on non-physical values; appends soft warnings
    // (e.g. gamma21 not small against gamma31) when a sink is given.
    void validate(std::vector<std::string>* warnings = nullptr) const;

    double to_seconds(double t_gamma) const { return t_gamma / gamma_unit; }
    double to_microseconds(double t_gamma) const { return 1e6 * t_gamma / gamma_unit; }
};

// Pair of control Rabi-frequency functions over the solver window.
struct ControlProfile {
    std::function<cplx(double)> omega_c;
    std::function<cplx(double)> omega_d;
    std::string kind;  // uniform | sincos | gaussian-pair | custom-tabulated
};

// Axial weight of the medium body. density integrates to 1 over
// [z_start, z_end] so that the total optical depth stays alpha.
struct MediumBody {
    std::function<double(double)> density = [](double) { return 1.0; };
    double z_start = 0.0;
    double z_end = 1.0;

    static MediumBody uniform();
    // Gaussian axial density with e^-2 radius `radius` (units of L) centred
    // on the slab midpoint; the solver window is widened by `ext` on both
    // sides so the tails are integrated.
    static MediumBody gaussian(double radius, double ext);
};

// Slowly varying coherences at a point.
struct CoherenceState {
    cplx rho31{};
    cplx rho41{};
    cplx rho21{};

    double max_abs() const;
    // Magnitudes above 1 signal drive strengths outside the perturbative
    // regime the model assumes.
    bool perturbative() const { return max_abs() <= 1.0; }
};

// Complex field envelopes on a spatial (and optionally temporal) grid.
struct FieldState {
    std::vector<double> z_grid;
    std::vector<cplx> omega_p;
    std::vector<cplx> omega_s;
    std::vector<double> t_grid;  // empty for steady-state records

    void validate() const;  // grids strictly increasing, lengths consistent
};

struct Grids {
    std::vector<double> z;
    std::vector<double> t;  // empty when no time axis was requested
};

// Uniform grid of n points on [start, end]; n >= 2.
std::vector<double> uniform_grid(std::size_t n, double start, double end);

// z grid on [0,1] plus optional t grid on [0, t_span].
Grids build_grid(std::size_t n_z,
                 std::optional<std::size_t> n_t = std::nullopt,
                 std::optional<double> t_span = std::nullopt);

}  // namespace fwm
