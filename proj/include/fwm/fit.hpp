// fit.hpp - inverse problems: derivative-free least-squares recovery of model
// parameters from transmission data, and the slow-light delay inversion used
// to calibrate the optical density.

#pragma once

#include "fwm/core.hpp"

namespace fwm {

struct FreeParam {
    std::string name;  // one of omega_d_peak, gamma21, omega_c_peak, alpha
    double lower = 0.0;
    double upper = 0.0;
    double start = 0.0;
};

struct SimplexSettings {
    double initial_scale = 0.25;  // first simplex step, in scaled coordinates
    double tolerance = 1e-6;      // simplex diameter, scaled coordinates
    std::size_t max_evals = 400;
};

struct FitProblem {
    std::vector<FreeParam> free_params;
    // forward model: parameter vector (natural units) -> predicted observables
    std::function<std::vector<double>(const std::vector<double>&)> model;
    std::vector<double> observed;
    SimplexSettings settings;
};

struct FitResult {
    std::vector<double> best;
    double loss = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> loss_trace;  // best loss after each simplex iteration
};

// Nelder-Mead descent over the bounded box in coordinates scaled by the bound
// widths, with projection onto the box. Deterministic for identical inputs;
// on budget exhaustion the best point so far is returned with converged
// false.
FitResult fit_params(const FitProblem& problem);

// alpha = delay * |omega_c|^2 / gamma31, the narrowband slow-light relation.
double od_from_delay(double delay, double omega_c, double gamma31);

}  // namespace fwm
