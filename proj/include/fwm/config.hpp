// config.hpp - JSON configuration ingestion and validation shared by the CLI
// subcommands and the test suites.

#pragma once

#include <json.hpp>

#include "fwm/fit.hpp"
#include "fwm/geometry.hpp"

namespace fwm {

using json = nlohmann::json;

struct ProfileSpec {
    std::string kind = "uniform";  // uniform | sincos | gaussian-pair | custom-tabulated
    double omega0 = 0.5;           // sincos
    cplx omega_c{0.0};             // uniform
    cplx omega_d{0.0};
    BeamGeometry geom;  // gaussian-pair
    std::vector<double> z_nodes;  // custom-tabulated
    std::vector<cplx> omega_c_nodes;
    std::vector<cplx> omega_d_nodes;
};

struct GridSpec {
    std::size_t n_z = 2001;
    std::optional<std::size_t> n_t;
    std::optional<double> t_span;
};

struct SweepSpec {
    std::string axis;  // od | ds
    std::vector<double> values;
};

struct FitSpec {
    std::string mode = "ds-cw";  // ds-cw | od-cw
    std::vector<FreeParam> free_params;
    SimplexSettings settings;
};

struct RunConfig {
    PhysParams params;
    ProfileSpec profile;
    GridSpec grid;
    cplx omega_p0{0.01};
    bool pulsed = false;
    PulseSpec pulse;
    bool transverse = false;  // ray averaging for gaussian-pair runs
    int n_rays = 41;
    bool convergence_check = true;
    SweepSpec sweep;
    FitSpec fit;
};

// Parses and validates a configuration document, applying defaults; throws
// ConfigError with the offending key, collecting soft warnings.
RunConfig validate_config(const json& doc, std::vector<std::string>* warnings = nullptr);

// Resolved snapshot; validate_config(config_to_json(c)) round-trips exactly.
json config_to_json(const RunConfig& c);

// Builds the described control profile; ray_shift (units of L) slides
// gaussian-pair patterns for off-axis rays.
ControlProfile make_profile(const ProfileSpec& spec, double ray_shift = 0.0,
                            std::vector<std::string>* warnings = nullptr);

MediumBody make_body(const ProfileSpec& spec);

// Applies a dotted-path override like "profile.delta_s_um=54" onto a JSON
// document; the value is parsed as JSON when possible, else kept as string.
void apply_override(json& doc, const std::string& assignment);

}  // namespace fwm
