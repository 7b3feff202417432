#include "fwm/fit.hpp"

#include <algorithm>
#include <cmath>

namespace fwm {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

FitResult fit_params(const FitProblem& problem) {
    const std::size_t n = problem.free_params.size();
    if (n == 0) throw ConfigError("fit needs at least one free parameter");
    for (const FreeParam& fp : problem.free_params) {
        if (!std::isfinite(fp.lower) || !std::isfinite(fp.upper) || !(fp.lower < fp.upper)) {
            throw ConfigError("fit parameter '" + fp.name + "' needs finite bounds with lower < upper");
        }
    }
    if (!problem.model) throw ConfigError("fit needs a forward model");
    if (problem.observed.empty()) throw ConfigError("fit needs observed data");

    auto to_natural = [&](const std::vector<double>& u) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const FreeParam& fp = problem.free_params[i];
            x[i] = fp.lower + clamp01(u[i]) * (fp.upper - fp.lower);
        }
        return x;
    };

    FitResult result;
    auto loss_at = [&](const std::vector<double>& u) {
        const std::vector<double> pred = problem.model(to_natural(u));
        if (pred.size() != problem.observed.size()) {
            throw SolverError("forward model returned " + std::to_string(pred.size()) +
                              " predictions for " + std::to_string(problem.observed.size()) +
                              " observations");
        }
        double ssr = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const double r = pred[i] - problem.observed[i];
            ssr += r * r;
        }
        ++result.evaluations;
        return ssr;
    };

    const SimplexSettings& st = problem.settings;

    // initial simplex: start point plus one step along each scaled axis,
    // stepping inward when the start sits at the upper bound
    std::vector<std::vector<double>> pts;
    std::vector<double> u0(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FreeParam& fp = problem.free_params[i];
        u0[i] = clamp01((fp.start - fp.lower) / (fp.upper - fp.lower));
    }
    pts.push_back(u0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> u = u0;
        u[i] = (u0[i] + st.initial_scale <= 1.0) ? u0[i] + st.initial_scale
                                                 : u0[i] - st.initial_scale;
        u[i] = clamp01(u[i]);
        pts.push_back(u);
    }

    std::vector<double> losses(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) losses[i] = loss_at(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(pts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
        std::vector<std::vector<double>> p2(pts.size());
        std::vector<double> l2(pts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            p2[i] = pts[idx[i]];
            l2[i] = losses[idx[i]];
        }
        pts = std::move(p2);
        losses = std::move(l2);
    };

    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double dx = pts[i][k] - pts[0][k];
                s += dx * dx;
            }
            d = std::max(d, std::sqrt(s));
        }
        return d;
    };

    order();
    result.loss_trace.push_back(losses[0]);

    while (result.evaluations < st.max_evals) {
        if (diameter() < st.tolerance) {
            result.converged = true;
            break;
        }
        // centroid of all but the worst vertex
        std::vector<double> cen(n, 0.0);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            for (std::size_t k = 0; k < n; ++k) cen[k] += pts[i][k];
        }
        for (std::size_t k = 0; k < n; ++k) cen[k] /= static_cast<double>(n);

        auto blend = [&](double c) {
            std::vector<double> u(n);
            for (std::size_t k = 0; k < n; ++k) {
                u[k] = clamp01(cen[k] + c * (cen[k] - pts.back()[k]));
            }
            return u;
        };

        const std::vector<double> refl = blend(1.0);
        const double f_refl = loss_at(refl);
        if (f_refl < losses[0]) {
            const std::vector<double> expd = blend(2.0);
            const double f_expd = loss_at(expd);
            if (f_expd < f_refl) {
                pts.back() = expd;
                losses.back() = f_expd;
            } else {
                pts.back() = refl;
                losses.back() = f_refl;
            }
        } else if (f_refl < losses[losses.size() - 2]) {
            pts.back() = refl;
            losses.back() = f_refl;
        } else {
            const bool outside = f_refl < losses.back();
            const std::vector<double> ctr = blend(outside ? 0.5 : -0.5);
            const double f_ctr = loss_at(ctr);
            if (f_ctr < std::min(f_refl, losses.back())) {
                pts.back() = ctr;
                losses.back() = f_ctr;
            } else {
                // shrink towards the best vertex
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    for (std::size_t k = 0; k < n; ++k) {
                        pts[i][k] = clamp01(pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]));
                    }
                    losses[i] = loss_at(pts[i]);
                    if (result.evaluations >= st.max_evals) break;
                }
            }
        }
        order();
        result.loss_trace.push_back(losses[0]);
    }
    if (diameter() < st.tolerance) result.converged = true;

    result.best = to_natural(pts[0]);
    result.loss = losses[0];
    return result;
}

double od_from_delay(double delay, double omega_c, double gamma31) {
    if (!(delay >= 0.0)) throw ConfigError("delay must be non-negative");
    if (!(omega_c > 0.0)) throw ConfigError("omega_c must be positive");
    if (!(gamma31 > 0.0)) throw ConfigError("gamma31 must be positive");
    return delay * omega_c * omega_c / gamma31;
}

}  // namespace fwm
