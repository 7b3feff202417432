// fwm - command-line front end: steady/pulse/sweep/fit runs from JSON
// configuration files, with CSV/JSON outputs and a rerunnable manifest.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fwm/config.hpp"
#include "fwm/io.hpp"

namespace fs = std::filesystem;
using namespace fwm;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    int jobs = default_jobs();
};

json load_config_doc(const CommonArgs& args) {
    json doc;
    if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) throw IoError("cannot open config: " + args.config_path);
        doc = json::parse(is, nullptr, true, true);
        if (doc.contains("config") && doc.contains("subcommand")) {
            doc = doc.at("config");  // accept a manifest as config snapshot
        }
    }
    for (const std::string& ov : args.overrides) apply_override(doc, ov);
    return doc;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<std::string> csv_meta(const RunConfig& c, const std::string& what) {
    std::vector<std::string> meta;
    meta.push_back("fwm " + what);
    meta.push_back("alpha=" + format_double(c.params.alpha) +
                   " gamma31=" + format_double(c.params.gamma31) +
                   " gamma41=" + format_double(c.params.gamma41) +
                   " gamma21=" + format_double(c.params.gamma21));
    std::string prof = "profile=" + c.profile.kind;
    if (c.profile.kind == "gaussian-pair") {
        const BeamGeometry& g = c.profile.geom;
        prof += " angle_deg=" + format_double(g.angle * 180.0 / pi) +
                " delta_s_um=" + format_double(g.delta_s) +
                " omega_c_peak=" + format_double(g.omega_c_peak) +
                " omega_d_peak=" + format_double(g.omega_d_peak) +
                " axial_density=" + g.axial_density;
    }
    meta.push_back(prof);
    return meta;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const RunConfig& c,
                    const std::vector<std::string>& outputs, double wall_ms, bool converged) {
    json m;
    m["subcommand"] = subcommand;
    m["config"] = config_to_json(c);
    m["outputs"] = outputs;
    m["wall_ms"] = wall_ms;
    m["converged"] = converged;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
    for (const std::string& rel : outputs) {
        if (!fs::exists(dir / rel)) throw IoError("declared output missing: " + rel);
    }
}

RayRun make_ray_run(const RunConfig& c) {
    RayRun run;
    run.pulsed = c.pulsed;
    run.pulse = c.pulse;
    run.n_z = c.grid.n_z;
    run.steady_opt.omega_p0 = c.omega_p0;
    run.steady_opt.convergence_check = c.convergence_check;
    run.pulse_opt.n_z = std::max<std::size_t>(c.grid.n_z, 501);
    if (c.grid.n_t) run.pulse_opt.n_t = *c.grid.n_t;
    if (c.grid.t_span) run.pulse_opt.t_span = *c.grid.t_span;
    run.pulse_opt.convergence_check = c.convergence_check;
    return run;
}

int cmd_steady(const CommonArgs& args) {
    std::vector<std::string> warnings;
    const auto t_start = std::chrono::steady_clock::now();
    const RunConfig c = validate_config(load_config_doc(args), &warnings);
    print_warnings(warnings);
    fs::create_directories(args.out_dir);

    const ControlProfile prof = make_profile(c.profile, 0.0, &warnings);
    const MediumBody body = make_body(c.profile);
    SteadyOptions opt;
    opt.omega_p0 = c.omega_p0;
    opt.convergence_check = c.convergence_check;

    double t_p = 0.0, ce = 0.0;
    CsvTable table;
    table.meta = csv_meta(c, "steady");
    table.columns = {"z", "re_p", "im_p", "re_s", "im_s"};
    if (c.transverse) {
        const RayRun run = make_ray_run(c);
        const TransverseResult res =
            transverse_average(c.profile.geom, c.params, run, c.n_rays, args.jobs);
        t_p = res.t_p;
        ce = res.t_s;
        // z-resolved record of the centre ray
        const SteadySolution centre = integrate_steady(prof, c.params, c.grid.n_z, opt, body);
        for (std::size_t i = 0; i < centre.fields.z_grid.size(); ++i) {
            table.rows.push_back({centre.fields.z_grid[i], centre.fields.omega_p[i].real(),
                                  centre.fields.omega_p[i].imag(), centre.fields.omega_s[i].real(),
                                  centre.fields.omega_s[i].imag()});
        }
    } else {
        const SteadySolution sol = integrate_steady(prof, c.params, c.grid.n_z, opt, body);
        t_p = sol.probe_transmission;
        ce = sol.conversion_efficiency;
        for (std::size_t i = 0; i < sol.fields.z_grid.size(); ++i) {
            table.rows.push_back({sol.fields.z_grid[i], sol.fields.omega_p[i].real(),
                                  sol.fields.omega_p[i].imag(), sol.fields.omega_s[i].real(),
                                  sol.fields.omega_s[i].imag()});
        }
    }
    write_csv(fs::path(args.out_dir) / "steady_fields.csv", table);

    json summary;
    summary["alpha"] = c.params.alpha;
    summary["T_p"] = t_p;
    summary["CE"] = ce;
    summary["converged"] = true;
    write_text(fs::path(args.out_dir) / "steady_summary.json", summary.dump(2) + "\n");

    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_manifest(args.out_dir, "steady", c, {"steady_fields.csv", "steady_summary.json"}, wall,
                   true);
    std::cout << "T_p = " << format_double(t_p) << ", CE = " << format_double(ce) << "\n";
    return 0;
}

int cmd_pulse(const CommonArgs& args) {
    std::vector<std::string> warnings;
    const auto t_start = std::chrono::steady_clock::now();
    json doc = load_config_doc(args);
    if (!doc.contains("pulse") || doc.at("pulse").is_null()) {
        doc["pulse"] = json::object();  // defaults
    }
    RunConfig c = validate_config(doc, &warnings);
    c.pulsed = true;
    print_warnings(warnings);
    fs::create_directories(args.out_dir);

    const MediumBody body = make_body(c.profile);
    const RayRun run = make_ray_run(c);

    PulseResult trace;
    PulseMetrics metrics;
    if (c.transverse) {
        const TransverseResult res =
            transverse_average(c.profile.geom, c.params, run, c.n_rays, args.jobs);
        // averaged energy metrics; the recorded traces are the centre ray's
        trace = simulate_pulse(c.pulse, make_profile(c.profile), c.params, run.pulse_opt, body);
        metrics = trace.metrics;
        metrics.t_p = res.t_p;
        metrics.t_s = res.t_s;
    } else {
        trace = simulate_pulse(c.pulse, make_profile(c.profile), c.params, run.pulse_opt, body);
        metrics = trace.metrics;
    }
    if (metrics.clipped) std::cerr << "warning: pulse tails clipped by the time window\n";

    CsvTable table;
    table.meta = csv_meta(c, "pulse");
    table.columns = {"t_over_Gamma", "t_us",     "re_p_in",  "im_p_in",
                     "re_p_out",     "im_p_out", "re_s_out", "im_s_out"};
    for (std::size_t k = 0; k < trace.t_grid.size(); ++k) {
        table.rows.push_back({trace.t_grid[k], c.params.to_microseconds(trace.t_grid[k]),
                              trace.probe_in[k].real(), trace.probe_in[k].imag(),
                              trace.probe_out[k].real(), trace.probe_out[k].imag(),
                              trace.signal_out[k].real(), trace.signal_out[k].imag()});
    }
    write_csv(fs::path(args.out_dir) / "pulse_traces.csv", table);

    json summary;
    summary["T_p"] = metrics.t_p;
    summary["T_s"] = metrics.t_s;
    summary["delay_p"] = metrics.delay_p;
    summary["delay_s"] = metrics.delay_s;
    summary["delay_p_s"] = c.params.to_seconds(metrics.delay_p);
    summary["delay_s_s"] = c.params.to_seconds(metrics.delay_s);
    summary["clipped"] = metrics.clipped;
    summary["converged"] = true;
    write_text(fs::path(args.out_dir) / "pulse_metrics.json", summary.dump(2) + "\n");

    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_manifest(args.out_dir, "pulse", c, {"pulse_traces.csv", "pulse_metrics.json"}, wall,
                   true);
    std::cout << "T_p = " << format_double(metrics.t_p) << ", T_s = " << format_double(metrics.t_s)
              << ", delay_p = " << format_double(c.params.to_microseconds(metrics.delay_p))
              << " us\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis_flag) {
    std::vector<std::string> warnings;
    const auto t_start = std::chrono::steady_clock::now();
    json doc = load_config_doc(args);
    if (!axis_flag.empty()) doc["sweep"]["axis"] = axis_flag;
    const RunConfig c = validate_config(doc, &warnings);
    print_warnings(warnings);
    if (c.sweep.axis.empty()) throw ConfigError("sweep needs sweep.axis ('od' or 'ds')");
    fs::create_directories(args.out_dir);

    CsvTable table;
    table.meta = csv_meta(c, "sweep " + c.sweep.axis);
    json summary;
    std::vector<std::string> outputs;

    if (c.sweep.axis == "od") {
        SteadyOptions opt;
        opt.omega_p0 = c.omega_p0;
        opt.convergence_check = c.convergence_check;
        const ControlProfile prof = make_profile(c.profile);
        const auto rows = sweep_od(c.sweep.values, prof, c.params, c.grid.n_z, opt, args.jobs);
        table.columns = {"alpha", "T_p", "CE"};
        double peak = 0.0, peak_at = 0.0;
        for (const auto& r : rows) {
            table.rows.push_back({r.alpha, r.t_p, r.ce});
            if (r.ce > peak) {
                peak = r.ce;
                peak_at = r.alpha;
            }
        }
        write_csv(fs::path(args.out_dir) / "sweep_od.csv", table);
        outputs.push_back("sweep_od.csv");
        summary["axis"] = "od";
        summary["peak_CE"] = peak;
        summary["peak_at_alpha"] = peak_at;
    } else {
        if (c.profile.kind != "gaussian-pair") {
            throw ConfigError("ds sweep needs a gaussian-pair profile");
        }
        const RayRun run = make_ray_run(c);
        std::vector<TransverseResult> details;
        const auto rows = sweep_ds(c.sweep.values, c.profile.geom, c.params, run, c.n_rays,
                                   args.jobs, &details);
        table.columns = {"ds_um", "T_p", "T_s"};
        double peak = 0.0, peak_at = 0.0;
        for (const auto& r : rows) {
            table.rows.push_back({r.ds_um, r.t_p, r.t_s});
            if (r.t_s > peak) {
                peak = r.t_s;
                peak_at = r.ds_um;
            }
        }
        write_csv(fs::path(args.out_dir) / "sweep_ds.csv", table);
        outputs.push_back("sweep_ds.csv");

        CsvTable rays;
        rays.meta = table.meta;
        rays.columns = {"ds_um", "offset_um", "weight", "T_p", "T_s"};
        for (std::size_t i = 0; i < details.size(); ++i) {
            for (const RayResult& r : details[i].rays) {
                rays.rows.push_back({c.sweep.values[i], r.offset, r.weight, r.t_p, r.t_s});
            }
        }
        write_csv(fs::path(args.out_dir) / "sweep_rays.csv", rays);
        outputs.push_back("sweep_rays.csv");
        summary["axis"] = "ds";
        summary["peak_CE"] = peak;
        summary["peak_at_ds_um"] = peak_at;
    }
    summary["converged"] = true;
    write_text(fs::path(args.out_dir) / "sweep_summary.json", summary.dump(2) + "\n");
    outputs.push_back("sweep_summary.json");

    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_manifest(args.out_dir, "sweep", c, outputs, wall, true);
    std::cout << "peak " << format_double(summary["peak_CE"].get<double>()) << "\n";
    return 0;
}

int cmd_fit(const CommonArgs& args, const std::string& data_path, bool od_mode, double delay,
            double omega_c, double gamma31) {
    const auto t_start = std::chrono::steady_clock::now();
    if (od_mode) {
        const double alpha = od_from_delay(delay, omega_c, gamma31);
        json out;
        out["alpha"] = alpha;
        out["delay"] = delay;
        out["omega_c"] = omega_c;
        out["gamma31"] = gamma31;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::vector<std::string> warnings;
    const RunConfig c = validate_config(load_config_doc(args), &warnings);
    print_warnings(warnings);
    if (c.fit.free_params.empty()) throw ConfigError("fit needs fit.free parameters");
    if (data_path.empty()) throw ConfigError("fit needs --data FILE");
    fs::create_directories(args.out_dir);

    // data rows: x, T_p, T_s where x is ds_um (ds-cw) or alpha (od-cw)
    const auto rows = read_csv(data_path, 3);
    if (rows.empty()) throw IoError("no data rows in " + data_path);
    std::vector<double> xs, observed;
    for (const auto& r : rows) {
        xs.push_back(r[0]);
        observed.push_back(r[1]);
        observed.push_back(r[2]);
    }

    FitProblem problem;
    problem.free_params = c.fit.free_params;
    problem.observed = observed;
    problem.settings = c.fit.settings;
    const int jobs = args.jobs;
    problem.model = [&c, &xs, jobs](const std::vector<double>& values) {
        RunConfig m = c;
        for (std::size_t i = 0; i < c.fit.free_params.size(); ++i) {
            const std::string& name = c.fit.free_params[i].name;
            const double v = values[i];
            if (name == "alpha") m.params.alpha = v;
            if (name == "gamma21") m.params.gamma21 = v;
            if (name == "omega_c_peak") {
                m.profile.geom.omega_c_peak = v;
                m.profile.omega_c = {v, 0.0};
            }
            if (name == "omega_d_peak") {
                m.profile.geom.omega_d_peak = v;
                m.profile.omega_d = {v, 0.0};
            }
        }
        std::vector<double> pred;
        if (c.fit.mode == "ds-cw") {
            const RayRun run = make_ray_run(m);
            const auto swept = sweep_ds(xs, m.profile.geom, m.params, run, m.n_rays, jobs);
            for (const auto& r : swept) {
                pred.push_back(r.t_p);
                pred.push_back(r.t_s);
            }
        } else {
            SteadyOptions opt;
            opt.omega_p0 = m.omega_p0;
            opt.convergence_check = m.convergence_check;
            const ControlProfile prof = make_profile(m.profile);
            const auto swept = sweep_od(xs, prof, m.params, m.grid.n_z, opt, jobs);
            for (const auto& r : swept) {
                pred.push_back(r.t_p);
                pred.push_back(r.ce);
            }
        }
        return pred;
    };

    const FitResult res = fit_params(problem);

    json report;
    json best;
    for (std::size_t i = 0; i < res.best.size(); ++i) {
        best[c.fit.free_params[i].name] = res.best[i];
    }
    report["best"] = best;
    report["loss"] = res.loss;
    report["evaluations"] = res.evaluations;
    report["converged"] = res.converged;
    report["loss_trace"] = res.loss_trace;
    report["settings"] = {{"initial_scale", c.fit.settings.initial_scale},
                          {"tolerance", c.fit.settings.tolerance},
                          {"max_evals", c.fit.settings.max_evals},
                          {"mode", c.fit.mode}};
    write_text(fs::path(args.out_dir) / "fit_report.json", report.dump(2) + "\n");

    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_manifest(args.out_dir, "fit", c, {"fit_report.json"}, wall, res.converged);
    std::cout << report.dump(2) << "\n";
    return res.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonant double-Lambda four-wave mixing simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "JSON configuration file");
        cmd->add_option("--set", args.overrides, "dotted-path override, e.g. profile.delta_s_um=54");
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--jobs", args.jobs, "worker threads for sweeps/rays");
    };

    CLI::App* steady = app.add_subcommand("steady", "steady-state transmission run");
    add_common(steady);
    CLI::App* pulse = app.add_subcommand("pulse", "time-domain pulse run");
    add_common(pulse);
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep (od or ds)");
    add_common(sweep);
    std::string axis;
    sweep->add_option("--axis", axis, "sweep axis: od or ds");

    CLI::App* fit = app.add_subcommand("fit", "parameter recovery from data");
    add_common(fit);
    std::string data_path;
    bool od_mode = false;
    double delay = 0.0, omega_c = 0.0, gamma31 = 1.25;
    fit->add_option("--data", data_path, "CSV data file: x,T_p,T_s");
    fit->add_flag("--od-from-delay", od_mode, "invert a slow-light delay to alpha");
    fit->add_option("--delay", delay, "measured delay, units 1/Gamma");
    fit->add_option("--omega-c", omega_c, "coupling Rabi frequency, units Gamma");
    fit->add_option("--gamma31", gamma31, "coherence decay rate, units Gamma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (steady->parsed()) return cmd_steady(args);
        if (pulse->parsed()) return cmd_pulse(args);
        if (sweep->parsed()) return cmd_sweep(args, axis);
        if (fit->parsed()) return cmd_fit(args, data_path, od_mode, delay, omega_c, gamma31);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
