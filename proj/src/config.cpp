#include "fwm/config.hpp"

#include <cmath>
#include <set>

namespace fwm {

namespace {

// null values count as absent so overrides can drop whole blocks
bool has(const json& j, const std::string& key) {
    return j.contains(key) && !j.at(key).is_null();
}

double get_num(const json& j, const std::string& key, double fallback, bool required = false) {
    if (!has(j, key)) {
        if (required) throw ConfigError("missing required key: " + key);
        return fallback;
    }
    if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> get_array(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ConfigError("key '" + key + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError("key '" + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<cplx> complex_nodes(const json& j, const std::string& re_key,
                                const std::string& im_key, std::size_t n) {
    std::vector<double> re = get_array(j, re_key);
    std::vector<double> im(n, 0.0);
    if (j.contains(im_key)) im = get_array(j, im_key);
    if (re.size() != n || im.size() != n) {
        throw ConfigError("profile node arrays must have equal lengths");
    }
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {re[i], im[i]};
    return out;
}

}  // namespace

RunConfig validate_config(const json& doc, std::vector<std::string>* warnings) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    RunConfig c;

    c.params.alpha = get_num(doc, "alpha", 0.0, /*required=*/true);
    c.params.gamma31 = get_num(doc, "gamma31", 1.25);
    c.params.gamma41 = get_num(doc, "gamma41", 1.25);
    c.params.gamma21 = get_num(doc, "gamma21", 0.0);
    c.params.length = get_num(doc, "length", 1.0);
    c.params.gamma_unit = 2.0 * pi * get_num(doc, "gamma_unit_hz", 6.0e6);
    c.params.validate(warnings);

    c.omega_p0 = {get_num(doc, "omega_p0", 0.01), 0.0};

    if (has(doc, "profile")) {
        const json& p = doc.at("profile");
        if (!p.is_object() || !p.contains("kind") || !p.at("kind").is_string()) {
            throw ConfigError("profile needs a string 'kind'");
        }
        c.profile.kind = p.at("kind").get<std::string>();
        if (c.profile.kind == "sincos") {
            c.profile.omega0 = get_num(p, "omega0", 0.5);
            if (!(c.profile.omega0 > 0.0)) throw ConfigError("profile.omega0 must be positive");
        } else if (c.profile.kind == "uniform") {
            c.profile.omega_c = {get_num(p, "omega_c", 0.0, true), get_num(p, "omega_c_im", 0.0)};
            c.profile.omega_d = {get_num(p, "omega_d", 0.0, true), get_num(p, "omega_d_im", 0.0)};
        } else if (c.profile.kind == "gaussian-pair") {
            BeamGeometry& g = c.profile.geom;
            g.angle = get_num(p, "angle_deg", 2.0) * pi / 180.0;
            g.control_waist = get_num(p, "control_waist_um", 124.0);
            g.probe_waist = get_num(p, "probe_waist_um", 141.0);
            g.delta_s = get_num(p, "delta_s_um", 0.0);
            g.medium_length = get_num(p, "medium_length_mm", 3.5);
            g.omega_c_peak = get_num(p, "omega_c_peak", 0.39);
            g.omega_d_peak = get_num(p, "omega_d_peak", 0.41);
            if (has(p, "axial_density")) {
                g.axial_density = p.at("axial_density").get<std::string>();
            }
            g.cloud_radius = get_num(p, "cloud_radius", 1.0);
            g.window_ext = get_num(p, "window_ext", g.axial_density == "gaussian" ? 1.0 : 0.0);
            g.validate();
            c.transverse = true;
        } else if (c.profile.kind == "custom-tabulated") {
            c.profile.z_nodes = get_array(p, "z");
            const std::size_t n = c.profile.z_nodes.size();
            c.profile.omega_c_nodes = complex_nodes(p, "omega_c_re", "omega_c_im", n);
            c.profile.omega_d_nodes = complex_nodes(p, "omega_d_re", "omega_d_im", n);
        } else {
            throw ConfigError("unknown profile kind: " + c.profile.kind);
        }
    }

    if (has(doc, "grid")) {
        const json& g = doc.at("grid");
        const double n_z = get_num(g, "n_z", 2001.0);
        if (!(n_z >= 2.0)) throw ConfigError("grid.n_z must be at least 2");
        c.grid.n_z = static_cast<std::size_t>(n_z);
        if (has(g, "n_t")) c.grid.n_t = static_cast<std::size_t>(get_num(g, "n_t", 0.0));
        if (has(g, "t_span")) {
            const double span = get_num(g, "t_span", 0.0);
            if (!(span > 0.0)) throw ConfigError("grid.t_span must be positive");
            c.grid.t_span = span;
        }
    }

    if (has(doc, "pulse")) {
        const json& p = doc.at("pulse");
        c.pulsed = true;
        if (has(p, "shape")) c.pulse.shape = p.at("shape").get<std::string>();
        c.pulse.peak = get_num(p, "peak", 0.01);
        if (has(p, "fwhm_us")) {
            c.pulse.fwhm = get_num(p, "fwhm_us", 0.0) * 1e-6 * c.params.gamma_unit;
        } else {
            c.pulse.fwhm = get_num(p, "fwhm", 75.0);
        }
        c.pulse.t0 = get_num(p, "t0", -1.0);
        if (c.pulse.shape == "custom-tabulated") {
            c.pulse.t_nodes = get_array(p, "t");
            c.pulse.amp_nodes =
                complex_nodes(p, "amp_re", "amp_im", c.pulse.t_nodes.size());
        }
        c.pulse.validate();
    }

    if (has(doc, "run")) {
        const json& r = doc.at("run");
        if (has(r, "mode")) {
            const std::string mode = r.at("mode").get<std::string>();
            if (mode == "pulse") {
                c.pulsed = true;
            } else if (mode == "cw") {
                c.pulsed = false;
            } else {
                throw ConfigError("run.mode must be 'cw' or 'pulse'");
            }
        }
        if (has(r, "transverse")) c.transverse = r.at("transverse").get<bool>();
        const double n_rays = get_num(r, "n_rays", 41.0);
        c.n_rays = static_cast<int>(n_rays);
        if (c.n_rays < 3 || c.n_rays % 2 == 0) {
            throw ConfigError("run.n_rays must be odd and >= 3");
        }
        if (has(r, "convergence_check")) {
            c.convergence_check = r.at("convergence_check").get<bool>();
        }
    }
    if (c.transverse && c.profile.kind != "gaussian-pair") c.transverse = false;

    if (has(doc, "sweep")) {
        const json& s = doc.at("sweep");
        if (!s.contains("axis") || !s.at("axis").is_string()) {
            throw ConfigError("sweep needs a string 'axis'");
        }
        c.sweep.axis = s.at("axis").get<std::string>();
        if (c.sweep.axis != "od" && c.sweep.axis != "ds") {
            throw ConfigError("sweep.axis must be 'od' or 'ds'");
        }
        c.sweep.values = has(s, "values") ? get_array(s, "values") : std::vector<double>{};
        for (double v : c.sweep.values) {
            if (c.sweep.axis == "od" && !(v > 0.0)) throw ConfigError("sweep alpha values must be positive");
            if (c.sweep.axis == "ds" && !(v >= 0.0)) throw ConfigError("sweep ds values must be non-negative");
        }
    }

    if (has(doc, "fit")) {
        const json& f = doc.at("fit");
        if (has(f, "mode")) c.fit.mode = f.at("mode").get<std::string>();
        if (c.fit.mode != "ds-cw" && c.fit.mode != "od-cw") {
            throw ConfigError("fit.mode must be 'ds-cw' or 'od-cw'");
        }
        c.fit.settings.initial_scale = get_num(f, "initial_scale", 0.25);
        c.fit.settings.tolerance = get_num(f, "tolerance", 1e-6);
        c.fit.settings.max_evals = static_cast<std::size_t>(get_num(f, "max_evals", 400.0));
        const std::set<std::string> known{"omega_d_peak", "gamma21", "omega_c_peak", "alpha"};
        if (has(f, "free")) {
            for (const auto& fp : f.at("free")) {
                FreeParam param;
                param.name = fp.at("name").get<std::string>();
                if (!known.count(param.name)) {
                    throw ConfigError("unknown fit parameter: " + param.name);
                }
                param.lower = get_num(fp, "lower", 0.0, true);
                param.upper = get_num(fp, "upper", 0.0, true);
                param.start = get_num(fp, "start", 0.5 * (param.lower + param.upper));
                if (!(param.lower < param.upper)) {
                    throw ConfigError("fit parameter '" + param.name + "' needs lower < upper");
                }
                c.fit.free_params.push_back(param);
            }
        }
    }
    return c;
}

json config_to_json(const RunConfig& c) {
    json doc;
    doc["alpha"] = c.params.alpha;
    doc["gamma31"] = c.params.gamma31;
    doc["gamma41"] = c.params.gamma41;
    doc["gamma21"] = c.params.gamma21;
    doc["length"] = c.params.length;
    doc["gamma_unit_hz"] = c.params.gamma_unit / (2.0 * pi);
    doc["omega_p0"] = c.omega_p0.real();

    json p;
    p["kind"] = c.profile.kind;
    if (c.profile.kind == "sincos") {
        p["omega0"] = c.profile.omega0;
    } else if (c.profile.kind == "uniform") {
        p["omega_c"] = c.profile.omega_c.real();
        p["omega_c_im"] = c.profile.omega_c.imag();
        p["omega_d"] = c.profile.omega_d.real();
        p["omega_d_im"] = c.profile.omega_d.imag();
    } else if (c.profile.kind == "gaussian-pair") {
        const BeamGeometry& g = c.profile.geom;
        p["angle_deg"] = g.angle * 180.0 / pi;
        p["control_waist_um"] = g.control_waist;
        p["probe_waist_um"] = g.probe_waist;
        p["delta_s_um"] = g.delta_s;
        p["medium_length_mm"] = g.medium_length;
        p["omega_c_peak"] = g.omega_c_peak;
        p["omega_d_peak"] = g.omega_d_peak;
        p["axial_density"] = g.axial_density;
        p["cloud_radius"] = g.cloud_radius;
        p["window_ext"] = g.window_ext;
    } else if (c.profile.kind == "custom-tabulated") {
        p["z"] = c.profile.z_nodes;
        json re = json::array(), im = json::array();
        for (const cplx& v : c.profile.omega_c_nodes) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        p["omega_c_re"] = re;
        p["omega_c_im"] = im;
        re = json::array();
        im = json::array();
        for (const cplx& v : c.profile.omega_d_nodes) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        p["omega_d_re"] = re;
        p["omega_d_im"] = im;
    }
    doc["profile"] = p;

    json g;
    g["n_z"] = c.grid.n_z;
    if (c.grid.n_t) g["n_t"] = *c.grid.n_t;
    if (c.grid.t_span) g["t_span"] = *c.grid.t_span;
    doc["grid"] = g;

    if (c.pulsed) {
        json pu;
        pu["shape"] = c.pulse.shape;
        pu["peak"] = c.pulse.peak;
        pu["fwhm"] = c.pulse.fwhm;
        pu["t0"] = c.pulse.t0;
        if (c.pulse.shape == "custom-tabulated") {
            pu["t"] = c.pulse.t_nodes;
            json re = json::array(), im = json::array();
            for (const cplx& v : c.pulse.amp_nodes) {
                re.push_back(v.real());
                im.push_back(v.imag());
            }
            pu["amp_re"] = re;
            pu["amp_im"] = im;
        }
        doc["pulse"] = pu;
    }

    json r;
    r["mode"] = c.pulsed ? "pulse" : "cw";
    r["transverse"] = c.transverse;
    r["n_rays"] = c.n_rays;
    r["convergence_check"] = c.convergence_check;
    doc["run"] = r;

    if (!c.sweep.axis.empty()) {
        json s;
        s["axis"] = c.sweep.axis;
        s["values"] = c.sweep.values;
        doc["sweep"] = s;
    }
    if (!c.fit.free_params.empty()) {
        json f;
        f["mode"] = c.fit.mode;
        f["initial_scale"] = c.fit.settings.initial_scale;
        f["tolerance"] = c.fit.settings.tolerance;
        f["max_evals"] = c.fit.settings.max_evals;
        json free = json::array();
        for (const FreeParam& fp : c.fit.free_params) {
            free.push_back({{"name", fp.name},
                            {"lower", fp.lower},
                            {"upper", fp.upper},
                            {"start", fp.start}});
        }
        f["free"] = free;
        doc["fit"] = f;
    }
    return doc;
}

ControlProfile make_profile(const ProfileSpec& spec, double ray_shift,
                            std::vector<std::string>* warnings) {
    if (spec.kind == "uniform") return profile_uniform(spec.omega_c, spec.omega_d);
    if (spec.kind == "sincos") return profile_sincos(spec.omega0);
    if (spec.kind == "gaussian-pair") {
        return profile_gaussian_pair(spec.geom, ray_shift, warnings);
    }
    if (spec.kind == "custom-tabulated") {
        return profile_tabulated(spec.z_nodes, spec.omega_c_nodes, spec.omega_d_nodes);
    }
    throw ConfigError("unknown profile kind: " + spec.kind);
}

MediumBody make_body(const ProfileSpec& spec) {
    if (spec.kind == "gaussian-pair") return spec.geom.body();
    return MediumBody::uniform();
}

void apply_override(json& doc, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like path.key=value: " + assignment);
    }
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json* node = &doc;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("bad override path: " + path);
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

}  // namespace fwm
