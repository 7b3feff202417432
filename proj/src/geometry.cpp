#include "fwm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fwm/io.hpp"

namespace fwm {

void BeamGeometry::validate() const {
    if (!(angle > 0.0) || !(angle < pi / 2.0)) throw ConfigError("angle must lie in (0, pi/2)");
    if (!(control_waist > 0.0)) throw ConfigError("control waist must be positive");
    if (!(probe_waist > 0.0)) throw ConfigError("probe waist must be positive");
    if (!(delta_s >= 0.0)) throw ConfigError("delta_s must be non-negative");
    if (!(medium_length > 0.0)) throw ConfigError("medium length must be positive");
    if (!(omega_c_peak >= 0.0) || !(omega_d_peak >= 0.0)) {
        throw ConfigError("peak Rabi frequencies must be non-negative");
    }
    if (axial_density != "uniform" && axial_density != "gaussian") {
        throw ConfigError("unknown axial density: " + axial_density);
    }
}

MediumBody BeamGeometry::body() const {
    if (axial_density == "gaussian") return MediumBody::gaussian(cloud_radius, window_ext);
    return MediumBody::uniform();
}

double BeamGeometry::sheet_scale() const {
    const double length_um = medium_length * 1e3;
    return control_waist / std::sin(angle) / length_um;
}

double BeamGeometry::z_peak_c() const {
    const double length_um = medium_length * 1e3;
    return 0.5 - delta_s / std::sin(angle) / length_um;
}

double BeamGeometry::z_peak_d() const {
    const double length_um = medium_length * 1e3;
    return 0.5 + delta_s / std::sin(angle) / length_um;
}

ControlProfile profile_uniform(cplx omega_c, cplx omega_d) {
    ControlProfile p;
    p.kind = "uniform";
    p.omega_c = [omega_c](double) { return omega_c; };
    p.omega_d = [omega_d](double) { return omega_d; };
    return p;
}

ControlProfile profile_sincos(double omega0) {
    if (!(omega0 > 0.0)) throw ConfigError("omega0 must be positive");
    ControlProfile p;
    p.kind = "sincos";
    const double beta = pi / 2.0;
    p.omega_c = [omega0, beta](double z) { return cplx{omega0 * std::cos(beta * z), 0.0}; };
    p.omega_d = [omega0, beta](double z) { return cplx{omega0 * std::sin(beta * z), 0.0}; };
    return p;
}

ControlProfile profile_gaussian_pair(const BeamGeometry& geom, double ray_shift,
                                     std::vector<std::string>* warnings) {
    geom.validate();
    const double w = geom.sheet_scale();
    const double zc = geom.z_peak_c() + ray_shift;
    const double zd = geom.z_peak_d() + ray_shift;
    if (warnings) {
        const double margin = 3.0 * w;
        if ((zc < -margin || zc > 1.0 + margin) && (zd < -margin || zd > 1.0 + margin)) {
            warnings->push_back("control profile negligible over the medium: both peaks sit "
                                "further than three sheet widths outside [0, L]");
        }
    }
    ControlProfile p;
    p.kind = "gaussian-pair";
    const double ac = geom.omega_c_peak, ad = geom.omega_d_peak;
    p.omega_c = [ac, zc, w](double z) {
        const double u = (z - zc) / w;
        return cplx{ac * std::exp(-u * u), 0.0};
    };
    p.omega_d = [ad, zd, w](double z) {
        const double u = (z - zd) / w;
        return cplx{ad * std::exp(-u * u), 0.0};
    };
    return p;
}

ControlProfile profile_tabulated(std::vector<double> z, std::vector<cplx> omega_c,
                                 std::vector<cplx> omega_d) {
    if (z.size() < 2 || z.size() != omega_c.size() || z.size() != omega_d.size()) {
        throw ConfigError("tabulated profile needs matching z/omega_c/omega_d nodes");
    }
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (!(z[i] > z[i - 1])) throw ConfigError("tabulated profile nodes must increase");
    }
    auto make = [](std::shared_ptr<std::vector<double>> zs,
                   std::shared_ptr<std::vector<cplx>> vs) {
        return [zs, vs](double zq) -> cplx {
            const auto& zn = *zs;
            const auto& vn = *vs;
            if (zq <= zn.front()) return vn.front();
            if (zq >= zn.back()) return vn.back();
            const auto it = std::upper_bound(zn.begin(), zn.end(), zq);
            const std::size_t j = static_cast<std::size_t>(it - zn.begin());
            const double w = (zq - zn[j - 1]) / (zn[j] - zn[j - 1]);
            return vn[j - 1] * (1.0 - w) + vn[j] * w;
        };
    };
    auto zs = std::make_shared<std::vector<double>>(std::move(z));
    auto cs = std::make_shared<std::vector<cplx>>(std::move(omega_c));
    auto ds = std::make_shared<std::vector<cplx>>(std::move(omega_d));
    ControlProfile p;
    p.kind = "custom-tabulated";
    p.omega_c = make(zs, cs);
    p.omega_d = make(zs, ds);
    return p;
}

TransverseResult transverse_average(const std::function<ControlProfile(double)>& make_profile,
                                    const MediumBody& body, double probe_waist_over_L,
                                    double shift_per_offset, const PhysParams& params,
                                    const RayRun& run, int n_rays, int jobs) {
    if (n_rays < 3 || n_rays % 2 == 0) throw ConfigError("n_rays must be odd and >= 3");
    TransverseResult out;
    out.rays.resize(static_cast<std::size_t>(n_rays));
    const double span = 2.0 * probe_waist_over_L;
    parallel_for(static_cast<std::size_t>(n_rays), jobs, [&](std::size_t i) {
        const double offset =
            -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(n_rays - 1);
        const double u = offset / probe_waist_over_L;
        RayResult ray;
        ray.offset = offset;
        ray.weight = std::exp(-2.0 * u * u);
        const ControlProfile prof = make_profile(offset * shift_per_offset);
        if (run.pulsed) {
            const PulseResult pr = simulate_pulse(run.pulse, prof, params, run.pulse_opt, body);
            ray.t_p = pr.metrics.t_p;
            ray.t_s = pr.metrics.t_s;
        } else {
            const SteadySolution ss =
                integrate_steady(prof, params, run.n_z, run.steady_opt, body);
            ray.t_p = ss.probe_transmission;
            ray.t_s = ss.conversion_efficiency;
        }
        out.rays[i] = ray;
    });
    // fixed-order weighted reduction keeps results identical across jobs;
    // accumulating differences against the centre ray makes the average of
    // identical rays exact
    const RayResult& centre = out.rays[out.rays.size() / 2];
    double wsum = 0.0, psum = 0.0, ssum = 0.0;
    for (const RayResult& r : out.rays) {
        wsum += r.weight;
        psum += r.weight * (r.t_p - centre.t_p);
        ssum += r.weight * (r.t_s - centre.t_s);
    }
    out.t_p = centre.t_p + psum / wsum;
    out.t_s = centre.t_s + ssum / wsum;
    return out;
}

TransverseResult transverse_average(const BeamGeometry& geom, const PhysParams& params,
                                    const RayRun& run, int n_rays, int jobs) {
    geom.validate();
    const double length_um = geom.medium_length * 1e3;
    const double waist_over_L = geom.probe_waist / length_um;
    // offsets are in units of L; an offset x slides the pattern by x/tan(angle)
    const double shift_per_offset = 1.0 / std::tan(geom.angle);
    auto make = [&geom](double shift) { return profile_gaussian_pair(geom, shift); };
    TransverseResult res = transverse_average(make, geom.body(), waist_over_L, shift_per_offset,
                                              params, run, n_rays, jobs);
    for (RayResult& r : res.rays) r.offset *= length_um;  // report offsets in um
    return res;
}

std::vector<DsSweepRow> sweep_ds(const std::vector<double>& ds_values_um, BeamGeometry geom,
                                 const PhysParams& params, const RayRun& run, int n_rays,
                                 int jobs, std::vector<TransverseResult>* details) {
    std::vector<DsSweepRow> rows(ds_values_um.size());
    if (details) details->resize(ds_values_um.size());
    for (std::size_t i = 0; i < ds_values_um.size(); ++i) {
        BeamGeometry g = geom;
        g.delta_s = ds_values_um[i];
        const TransverseResult r = transverse_average(g, params, run, n_rays, jobs);
        rows[i] = {ds_values_um[i], r.t_p, r.t_s};
        if (details) (*details)[i] = r;
    }
    return rows;
}

}  // namespace fwm
