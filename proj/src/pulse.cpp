#include "fwm/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "fwm/bloch.hpp"
#include "fwm/io.hpp"

namespace fwm {

cplx PulseSpec::amplitude(double t) const {
    if (shape == "gaussian") {
        const double u = (t - t0) / fwhm;
        return peak * std::exp(-4.0 * std::numbers::ln2 * u * u);
    }
    // custom-tabulated: linear interpolation, zero outside the nodes
    if (t_nodes.empty()) return 0.0;
    if (t <= t_nodes.front() || t >= t_nodes.back()) {
        return (t == t_nodes.front()) ? amp_nodes.front()
               : (t == t_nodes.back()) ? amp_nodes.back()
                                       : cplx{0.0};
    }
    const auto it = std::upper_bound(t_nodes.begin(), t_nodes.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - t_nodes.begin());
    const double w = (t - t_nodes[j - 1]) / (t_nodes[j] - t_nodes[j - 1]);
    return amp_nodes[j - 1] * (1.0 - w) + amp_nodes[j] * w;
}

void PulseSpec::validate() const {
    if (shape == "gaussian") {
        if (!(fwhm > 0.0)) throw ConfigError("pulse fwhm must be positive");
        if (!std::isfinite(peak)) throw ConfigError("pulse peak must be finite");
    } else if (shape == "custom-tabulated") {
        if (t_nodes.size() < 2 || t_nodes.size() != amp_nodes.size()) {
            throw ConfigError("tabulated pulse needs matching t/amplitude nodes");
        }
        for (std::size_t i = 1; i < t_nodes.size(); ++i) {
            if (!(t_nodes[i] > t_nodes[i - 1])) {
                throw ConfigError("tabulated pulse nodes must increase");
            }
        }
    } else {
        throw ConfigError("unknown pulse shape: " + shape);
    }
}

double delay_estimate(const ControlProfile& profile, const PhysParams& params,
                      const MediumBody& body) {
    const std::size_t n = 2001;
    const double h = (body.z_end - body.z_start) / static_cast<double>(n - 1);
    double tau = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double z = body.z_start + h * static_cast<double>(k);
        const double tot2 = std::norm(profile.omega_c(z)) + std::norm(profile.omega_d(z));
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;  // trapezoid
        tau += w * h * params.alpha * params.gamma31 * body.density(z) /
               std::max(tot2, 1e-4);
    }
    return std::min(tau, 2.0e4);
}

namespace {

// amplitude FWHM measured from a trace, for the resolution precondition on
// tabulated pulses
double trace_fwhm(const std::vector<double>& t, const std::vector<cplx>& amp) {
    double peak = 0.0;
    for (const cplx& a : amp) peak = std::max(peak, std::abs(a));
    if (!(peak > 0.0)) return 0.0;
    const double half = 0.5 * peak;
    double first = t.front(), last = t.back();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(amp[i]) >= half) {
            first = t[i];
            break;
        }
    }
    for (std::size_t i = t.size(); i-- > 0;) {
        if (std::abs(amp[i]) >= half) {
            last = t[i];
            break;
        }
    }
    return last - first;
}

struct RunOutput {
    std::vector<cplx> probe_out, signal_out;
    double max_coherence = 0.0;
};

// Integrates the local Bloch equations over the whole time grid for fixed
// controls, writing i(alpha gamma/2) rho(z) rho_31/41 into the derivative
// traces. Field values between grid points are linearly interpolated.
void coherence_response(const std::vector<cplx>& p, const std::vector<cplx>& s, cplx oc, cplx od,
                        double dens, double dt, const PhysParams& pp, std::vector<cplx>& dp,
                        std::vector<cplx>& ds, double& max_coh) {
    const cplx i{0.0, 1.0};
    const std::size_t n = p.size();
    const double g31 = pp.gamma31, g41 = pp.gamma41, g21 = pp.gamma21;
    const cplx cp = i * (pp.alpha * g31 / 2.0) * dens;
    const cplx cs = i * (pp.alpha * g41 / 2.0) * dens;

    cplx r31 = 0.0, r41 = 0.0, r21 = 0.0;
    dp[0] = cp * r31;
    ds[0] = cs * r41;

    auto deriv = [&](cplx a31, cplx a41, cplx a21, cplx fp, cplx fs, cplx& d31, cplx& d41,
                     cplx& d21) {
        d41 = 0.5 * i * fs + 0.5 * i * od * a21 - 0.5 * g41 * a41;
        d31 = 0.5 * i * fp + 0.5 * i * oc * a21 - 0.5 * g31 * a31;
        d21 = 0.5 * i * std::conj(oc) * a31 + 0.5 * i * std::conj(od) * a41 - 0.5 * g21 * a21;
    };

    double peak = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const cplx p0 = p[k], p1 = p[k + 1], pm = 0.5 * (p0 + p1);
        const cplx s0 = s[k], s1 = s[k + 1], sm = 0.5 * (s0 + s1);
        cplx d31a, d41a, d21a, d31b, d41b, d21b, d31c, d41c, d21c, d31d, d41d, d21d;
        deriv(r31, r41, r21, p0, s0, d31a, d41a, d21a);
        deriv(r31 + 0.5 * dt * d31a, r41 + 0.5 * dt * d41a, r21 + 0.5 * dt * d21a, pm, sm, d31b,
              d41b, d21b);
        deriv(r31 + 0.5 * dt * d31b, r41 + 0.5 * dt * d41b, r21 + 0.5 * dt * d21b, pm, sm, d31c,
              d41c, d21c);
        deriv(r31 + dt * d31c, r41 + dt * d41c, r21 + dt * d21c, p1, s1, d31d, d41d, d21d);
        r31 += dt / 6.0 * (d31a + 2.0 * d31b + 2.0 * d31c + d31d);
        r41 += dt / 6.0 * (d41a + 2.0 * d41b + 2.0 * d41c + d41d);
        r21 += dt / 6.0 * (d21a + 2.0 * d21b + 2.0 * d21c + d21d);
        dp[k + 1] = cp * r31;
        ds[k + 1] = cs * r41;
        peak = std::max(peak, std::max(std::abs(r21), std::max(std::abs(r31), std::abs(r41))));
    }
    max_coh = std::max(max_coh, peak);
}

RunOutput run_grid(const PulseSpec& pulse, const ControlProfile& prof, const PhysParams& pp,
                   const MediumBody& body, std::size_t n_z, const std::vector<double>& t_grid) {
    const std::size_t n_t = t_grid.size();
    const double dt = t_grid[1] - t_grid[0];
    const double h = (body.z_end - body.z_start) / static_cast<double>(n_z - 1);

    std::vector<cplx> p(n_t), s(n_t, cplx{0.0});
    for (std::size_t k = 0; k < n_t; ++k) p[k] = pulse.amplitude(t_grid[k]);

    RunOutput out;
    out.probe_out = p;  // entry traces; overwritten by the march

    std::vector<cplx> k1p(n_t), k1s(n_t), k2p(n_t), k2s(n_t), k3p(n_t), k3s(n_t), k4p(n_t),
        k4s(n_t), tp(n_t), ts(n_t);

    for (std::size_t j = 0; j + 1 < n_z; ++j) {
        const double z0 = body.z_start + h * static_cast<double>(j);
        const double zm = z0 + 0.5 * h;
        const double z1 = z0 + h;
        const cplx oc0 = prof.omega_c(z0), od0 = prof.omega_d(z0);
        const cplx ocm = prof.omega_c(zm), odm = prof.omega_d(zm);
        const cplx oc1 = prof.omega_c(z1), od1 = prof.omega_d(z1);
        const double d0 = body.density(z0), dm = body.density(zm), d1 = body.density(z1);

        coherence_response(p, s, oc0, od0, d0, dt, pp, k1p, k1s, out.max_coherence);
        for (std::size_t k = 0; k < n_t; ++k) {
            tp[k] = p[k] + 0.5 * h * k1p[k];
            ts[k] = s[k] + 0.5 * h * k1s[k];
        }
        coherence_response(tp, ts, ocm, odm, dm, dt, pp, k2p, k2s, out.max_coherence);
        for (std::size_t k = 0; k < n_t; ++k) {
            tp[k] = p[k] + 0.5 * h * k2p[k];
            ts[k] = s[k] + 0.5 * h * k2s[k];
        }
        coherence_response(tp, ts, ocm, odm, dm, dt, pp, k3p, k3s, out.max_coherence);
        for (std::size_t k = 0; k < n_t; ++k) {
            tp[k] = p[k] + h * k3p[k];
            ts[k] = s[k] + h * k3s[k];
        }
        coherence_response(tp, ts, oc1, od1, d1, dt, pp, k4p, k4s, out.max_coherence);
        for (std::size_t k = 0; k < n_t; ++k) {
            p[k] += h / 6.0 * (k1p[k] + 2.0 * k2p[k] + 2.0 * k3p[k] + k4p[k]);
            s[k] += h / 6.0 * (k1s[k] + 2.0 * k2s[k] + 2.0 * k3s[k] + k4s[k]);
        }
    }
    out.probe_out = std::move(p);
    out.signal_out = std::move(s);
    return out;
}

double energy(const std::vector<cplx>& a, double dt) {
    double e = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double w = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
        e += w * std::norm(a[k]);
    }
    return e * dt;
}

double centroid(const std::vector<double>& t, const std::vector<cplx>& a) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double w = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
        num += w * t[k] * std::norm(a[k]);
        den += w * std::norm(a[k]);
    }
    return den > 0.0 ? num / den : 0.0;
}

bool tail_clipped(const std::vector<cplx>& a) {
    double peak = 0.0;
    for (const cplx& v : a) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) return false;
    return std::abs(a.front()) > 1e-4 * peak || std::abs(a.back()) > 1e-4 * peak;
}

}  // namespace

PulseMetrics pulse_metrics(const std::vector<double>& t_grid, const std::vector<cplx>& probe_in,
                           const std::vector<cplx>& probe_out,
                           const std::vector<cplx>& signal_out) {
    if (t_grid.size() < 2 || probe_in.size() != t_grid.size() ||
        probe_out.size() != t_grid.size() || signal_out.size() != t_grid.size()) {
        throw SolverError("pulse metrics need equally sized traces with >= 2 samples");
    }
    const double dt = t_grid[1] - t_grid[0];
    PulseMetrics m;
    const double e_in = energy(probe_in, dt);
    if (!(e_in > 0.0)) return m;  // zero input: all-zero metrics
    m.t_p = energy(probe_out, dt) / e_in;
    m.t_s = energy(signal_out, dt) / e_in;
    const double c_in = centroid(t_grid, probe_in);
    m.delay_p = m.t_p > 0.0 ? centroid(t_grid, probe_out) - c_in : 0.0;
    m.delay_s = m.t_s > 0.0 ? centroid(t_grid, signal_out) - c_in : 0.0;
    m.clipped = tail_clipped(probe_in) || tail_clipped(probe_out) || tail_clipped(signal_out);
    return m;
}

PulseResult simulate_pulse(const PulseSpec& pulse_in, const ControlProfile& profile,
                           const PhysParams& params, const PulseOptions& opt,
                           const MediumBody& body) {
    params.validate();
    PulseSpec pulse = pulse_in;
    pulse.validate();

    if (pulse.shape == "gaussian" && pulse.t0 < 0.0) pulse.t0 = 2.0 * pulse.fwhm;

    double t_span = opt.t_span;
    std::size_t n_t = opt.n_t;
    if (t_span <= 0.0) {
        const double width =
            pulse.shape == "gaussian" ? pulse.fwhm : (pulse.t_nodes.back() - pulse.t_nodes.front());
        const double head = pulse.shape == "gaussian" ? pulse.t0 : pulse.t_nodes.front();
        t_span = head + delay_estimate(profile, params, body) + 3.0 * width;
    }
    if (n_t == 0) {
        const double width = pulse.shape == "gaussian" ? pulse.fwhm : t_span;
        const double dt = std::min(width / 160.0, 2.0);
        n_t = static_cast<std::size_t>(std::ceil(t_span / dt)) + 1;
    }
    if (n_t < 2) throw ConfigError("time grid needs at least 2 points");

    const std::vector<double> t_grid = uniform_grid(n_t, 0.0, t_span);

    // resolution preconditions
    if (opt.n_z < 500) {
        throw SolverError("resolution check failure: need at least 500 z points, got " +
                          std::to_string(opt.n_z));
    }
    std::vector<cplx> in(n_t);
    for (std::size_t k = 0; k < n_t; ++k) in[k] = pulse.amplitude(t_grid[k]);
    const double fwhm_measured =
        pulse.shape == "gaussian" ? pulse.fwhm : trace_fwhm(t_grid, in);
    const double dt = t_grid[1] - t_grid[0];
    if (fwhm_measured > 0.0 && fwhm_measured / dt < 40.0) {
        throw SolverError("resolution check failure: fewer than 40 time points per pulse FWHM");
    }

    PulseResult res;
    res.t_grid = t_grid;
    res.probe_in = in;

    RunOutput coarse = run_grid(pulse, profile, params, body, opt.n_z, t_grid);
    res.probe_out = std::move(coarse.probe_out);
    res.signal_out = std::move(coarse.signal_out);
    res.max_coherence = coarse.max_coherence;
    if (res.max_coherence > 0.5) {
        throw SolverError("perturbative-regime violation: max coherence magnitude " +
                          format_double(res.max_coherence));
    }
    res.metrics = pulse_metrics(t_grid, res.probe_in, res.probe_out, res.signal_out);

    if (opt.convergence_check) {
        const std::vector<double> t_fine = uniform_grid(2 * (n_t - 1) + 1, 0.0, t_span);
        RunOutput fine = run_grid(pulse, profile, params, body, 2 * (opt.n_z - 1) + 1, t_fine);
        std::vector<cplx> in_fine(t_fine.size());
        for (std::size_t k = 0; k < t_fine.size(); ++k) in_fine[k] = pulse.amplitude(t_fine[k]);
        const PulseMetrics mf =
            pulse_metrics(t_fine, in_fine, fine.probe_out, fine.signal_out);
        const double rp = std::abs(mf.t_p - res.metrics.t_p) / std::max(mf.t_p, 1e-6);
        const double rs = std::abs(mf.t_s - res.metrics.t_s) / std::max(mf.t_s, 1e-6);
        if (rp >= opt.convergence_tol || rs >= opt.convergence_tol) {
            throw SolverError("pulse run not converged under grid refinement: rel dT_p = " +
                              format_double(rp) + ", rel dT_s = " + format_double(rs));
        }
    }
    if (res.metrics.t_p + res.metrics.t_s > 1.0 + 1e-6) {
        throw SolverError("energy budget violated: T_p + T_s = " +
                          format_double(res.metrics.t_p + res.metrics.t_s));
    }
    return res;
}

}  // namespace fwm
