#include "fwm/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fwm {

void PhysParams::validate(std::vector<std::string>* warnings) const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(gamma31 > 0.0)) throw ConfigError("gamma31 must be positive");
    if (!(gamma41 > 0.0)) throw ConfigError("gamma41 must be positive");
    if (!(gamma21 >= 0.0)) throw ConfigError("gamma21 must be non-negative");
    if (!(length > 0.0)) throw ConfigError("length must be positive");
    if (!(gamma_unit > 0.0)) throw ConfigError("gamma_unit must be positive");
    if (!std::isfinite(alpha) || !std::isfinite(gamma31) || !std::isfinite(gamma41) ||
        !std::isfinite(gamma21)) {
        throw ConfigError("parameters must be finite");
    }
    if (warnings && gamma21 > 0.1 * gamma31) {
        std::ostringstream os;
        os << "gamma21 = " << gamma21 << " is not small against gamma31 = " << gamma31
           << "; the ground-state coherence is strongly damped";
        warnings->push_back(os.str());
    }
}

MediumBody MediumBody::uniform() { return MediumBody{}; }

MediumBody MediumBody::gaussian(double radius, double ext) {
    if (!(radius > 0.0)) throw ConfigError("cloud radius must be positive");
    if (!(ext >= 0.0)) throw ConfigError("window extension must be non-negative");
    MediumBody body;
    body.z_start = -ext;
    body.z_end = 1.0 + ext;
    // normalise so the integral over the window equals 1
    const double s = std::sqrt(2.0) / radius;
    const double area = radius * std::sqrt(pi / 2.0) / 2.0 *
                        (std::erf(s * (body.z_end - 0.5)) - std::erf(s * (body.z_start - 0.5)));
    const double norm = 1.0 / area;
    body.density = [radius, norm](double z) {
        const double u = (z - 0.5) / radius;
        return norm * std::exp(-2.0 * u * u);
    };
    return body;
}

double CoherenceState::max_abs() const {
    return std::max({std::abs(rho31), std::abs(rho41), std::abs(rho21)});
}

void FieldState::validate() const {
    if (z_grid.size() < 2) throw SolverError("field state needs at least two z points");
    for (std::size_t i = 1; i < z_grid.size(); ++i) {
        if (!(z_grid[i] > z_grid[i - 1])) throw SolverError("z grid not strictly increasing");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw SolverError("t grid not strictly increasing");
    }
    if (t_grid.empty()) {
        if (omega_p.size() != z_grid.size() || omega_s.size() != z_grid.size()) {
            throw SolverError("field arrays must match the z grid length");
        }
    } else {
        if (omega_p.size() != t_grid.size() || omega_s.size() != t_grid.size()) {
            throw SolverError("field traces must match the t grid length");
        }
    }
}

std::vector<double> uniform_grid(std::size_t n, double start, double end) {
    if (n < 2) throw ConfigError("grid needs at least 2 points");
    if (!(end > start)) throw ConfigError("grid span must be positive");
    std::vector<double> g(n);
    const double h = (end - start) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = start + h * static_cast<double>(i);
    g.back() = end;
    return g;
}

Grids build_grid(std::size_t n_z, std::optional<std::size_t> n_t, std::optional<double> t_span) {
    Grids g;
    g.z = uniform_grid(n_z, 0.0, 1.0);
    if (n_t || t_span) {
        if (!n_t || !t_span) throw ConfigError("time grid needs both n_t and t_span");
        if (!(*t_span > 0.0)) throw ConfigError("t_span must be positive");
        g.t = uniform_grid(*n_t, 0.0, *t_span);
    }
    return g;
}

}  // namespace fwm
