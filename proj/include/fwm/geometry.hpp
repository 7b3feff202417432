// geometry.hpp - control-field spatial profiles from beam parameters and the
// transverse ray averaging behind the intensity-mismatch model.

#pragma once

#include "fwm/pulse.hpp"
#include "fwm/steady.hpp"

namespace fwm {

// Tilted-beam layout. The two control beams cross the probe at `angle`; their
// narrow (cylindrical-lens) waist maps onto the propagation axis with scale
// control_waist/sin(angle), and a transverse probe offset x slides the whole
// modulation pattern by x/tan(angle).
struct BeamGeometry {
    double angle = 2.0 * pi / 180.0;  // probe-control angle, radians
    double control_waist = 124.0;     // e^-2 intensity radius on the w axis, um
    double probe_waist = 141.0;       // e^-2 intensity radius of the probe, um
    double delta_s = 0.0;             // half peak separation along w, um
    double medium_length = 3.5;       // L, mm
    double omega_c_peak = 0.39;       // units of Gamma
    double omega_d_peak = 0.41;

    // Axial body of the atomic cloud seen by the solvers. The hard uniform
    // slab is the idealised default; the gaussian body models the soft MOT
    // density profile (e^-2 radius cloud_radius, in units of L) and widens
    // the integration window by window_ext on both sides.
    std::string axial_density = "uniform";  // uniform | gaussian
    double cloud_radius = 1.0;
    double window_ext = 1.0;

    void validate() const;
    MediumBody body() const;
    // longitudinal scale of the tilted control sheets, units of L
    double sheet_scale() const;
    // peak positions of the coupling (upstream) and driving (downstream)
    // profiles, units of L
    double z_peak_c() const;
    double z_peak_d() const;
};

ControlProfile profile_uniform(cplx omega_c, cplx omega_d);

// omega_c = omega0 cos(pi z/2), omega_d = omega0 sin(pi z/2) on z in [0,1].
ControlProfile profile_sincos(double omega0);

// Gaussian pair from the tilted-beam geometry, optionally pattern-shifted by
// ray_shift (units of L) for an off-axis probe ray. Warns when both peaks
// fall far outside the medium.
ControlProfile profile_gaussian_pair(const BeamGeometry& geom, double ray_shift = 0.0,
                                     std::vector<std::string>* warnings = nullptr);

// Linear interpolation through tabulated nodes (held at the end values
// outside the node range, so widened solver windows stay defined).
ControlProfile profile_tabulated(std::vector<double> z, std::vector<cplx> omega_c,
                                 std::vector<cplx> omega_d);

// What to run per ray: a CW steady solve or a pulse propagation.
struct RayRun {
    bool pulsed = false;
    PulseSpec pulse;
    PulseOptions pulse_opt;
    SteadyOptions steady_opt;
    std::size_t n_z = 2001;
};

struct RayResult {
    double offset = 0.0;  // um
    double weight = 0.0;
    double t_p = 0.0;
    double t_s = 0.0;
};

struct TransverseResult {
    double t_p = 0.0;  // intensity-weighted averages over the sampled rays
    double t_s = 0.0;
    std::vector<RayResult> rays;
};

// Decomposes the probe into n_rays parallel rays on +-2 probe waists, runs
// the 1D solver per ray against the shifted profiles, and averages the
// output intensities with the probe's Gaussian intensity weights. A failing
// ray aborts the whole average.
TransverseResult transverse_average(const BeamGeometry& geom, const PhysParams& params,
                                    const RayRun& run, int n_rays = 41, int jobs = 1);

// Same, for an arbitrary profile generator shift -> ControlProfile (the
// gaussian-pair generator is the production path; tests inject others).
TransverseResult transverse_average(const std::function<ControlProfile(double)>& make_profile,
                                    const MediumBody& body, double probe_waist_over_L,
                                    double shift_per_offset, const PhysParams& params,
                                    const RayRun& run, int n_rays, int jobs);

struct DsSweepRow {
    double ds_um = 0.0;
    double t_p = 0.0;
    double t_s = 0.0;
};

// One transverse-averaged run per separation value; per-ray tables are
// returned alongside when requested.
std::vector<DsSweepRow> sweep_ds(const std::vector<double>& ds_values_um, BeamGeometry geom,
                                 const PhysParams& params, const RayRun& run, int n_rays = 41,
                                 int jobs = 1,
                                 std::vector<TransverseResult>* details = nullptr);

}  // namespace fwm
