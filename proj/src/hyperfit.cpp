#include "c2lse/hyperfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace c2lse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498948482;  // 1/golden ratio

// Maximize f over [lo, hi] by golden-section search. f need not be unimodal;
// this is a bounded deterministic refinement, and callers only accept
// improvements.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return (f1 >= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

KernelSpec spec_from_log(const KernelSpec& base, const Vector& log_params) {
    KernelSpec spec = base;
    const Index d = base.dim();
    spec.lengthscales = log_params.head(d).array().exp();
    spec.outputscale = std::exp(log_params[d]);
    return spec;
}

}  // namespace

HyperFitOptions HyperFitOptions::for_box(const DomainBounds& bounds) {
    HyperFitOptions opt;
    opt.lengthscale_lower = 1e-3 * bounds.widths();
    opt.lengthscale_upper = 1e3 * bounds.widths();
    return opt;
}

void HyperFitOptions::validate() const {
    if (lengthscale_lower.size() == 0 || lengthscale_lower.size() != lengthscale_upper.size())
        throw std::invalid_argument("HyperFitOptions: lengthscale bounds missing or mismatched");
    if (!(lengthscale_lower.array() > 0.0).all() ||
        !(lengthscale_upper.array() > lengthscale_lower.array()).all())
        throw std::invalid_argument("HyperFitOptions: lengthscale bounds must satisfy 0 < lower < upper");
    if (!(outputscale_lower > 0.0) || !(outputscale_upper > outputscale_lower))
        throw std::invalid_argument("HyperFitOptions: outputscale bounds must satisfy 0 < lower < upper");
    if (ascent_sweeps < 0 || golden_iters < 1)
        throw std::invalid_argument("HyperFitOptions: ascent_sweeps >= 0 and golden_iters >= 1 required");
}

HyperFitResult fit_hyperparameters(const ObservationSet& obs,
                                   const std::vector<KernelSpec>& init_grid,
                                   const HyperFitOptions& options, double prior_mean) {
    if (obs.count() == 0) throw std::invalid_argument("fit_hyperparameters: observations empty");
    if (init_grid.empty()) throw std::invalid_argument("fit_hyperparameters: init_grid empty");
    options.validate();
    const Index d = obs.dim();
    if (options.lengthscale_lower.size() != d)
        throw std::invalid_argument("fit_hyperparameters: bounds dimension mismatch");

    auto score = [&](const KernelSpec& spec) -> double {
        try {
            const double ll = log_marginal_likelihood(spec, obs, prior_mean);
            return std::isfinite(ll) ? ll : kNegInf;
        } catch (const NumericalError&) {
            return kNegInf;
        }
    };

    // Raw init entries are always candidates so the contract
    // "result >= every init_grid entry" holds even when bounds clip a start.
    double best_ll = kNegInf;
    KernelSpec best_spec = init_grid.front();
    for (const KernelSpec& spec : init_grid) {
        spec.validate();
        if (spec.dim() != d)
            throw std::invalid_argument("fit_hyperparameters: init_grid dimension mismatch");
        const double ll = score(spec);
        if (ll > best_ll) {
            best_ll = ll;
            best_spec = spec;
        }
    }

    Vector log_lo(d + 1), log_hi(d + 1);
    log_lo.head(d) = options.lengthscale_lower.array().log();
    log_hi.head(d) = options.lengthscale_upper.array().log();
    log_lo[d] = std::log(options.outputscale_lower);
    log_hi[d] = std::log(options.outputscale_upper);

    bool any_ascent_succeeded = false;
    for (const KernelSpec& start : init_grid) {
        Vector theta(d + 1);
        theta.head(d) = start.lengthscales.array().log();
        theta[d] = std::log(start.outputscale);
        theta = theta.cwiseMax(log_lo).cwiseMin(log_hi);

        double current = score(spec_from_log(start, theta));
        if (current == kNegInf) continue;
        any_ascent_succeeded = true;

        for (int sweep = 0; sweep < options.ascent_sweeps; ++sweep) {
            for (Index c = 0; c < d + 1; ++c) {
                auto line = [&](double v) {
                    Vector probe = theta;
                    probe[c] = v;
                    return score(spec_from_log(start, probe));
                };
                auto [v, fv] = golden_max(line, log_lo[c], log_hi[c], options.golden_iters);
                if (fv > current) {
                    theta[c] = v;
                    current = fv;
                }
            }
        }
        if (current > best_ll) {
            best_ll = current;
            best_spec = spec_from_log(start, theta);
        }
    }

    HyperFitResult result;
    result.spec = best_spec;
    result.log_likelihood = best_ll;
    result.fallback = !any_ascent_succeeded;
    return result;
}

std::vector<KernelSpec> default_init_grid(const DomainBounds& bounds, const ObservationSet& obs,
                                          KernelFamily family, double prior_mean) {
    const Index d = bounds.dim();
    double response_var = 1.0;
    if (obs.count() > 1) {
        const Vector centered = obs.responses.array() - prior_mean;
        const double mean = centered.mean();
        response_var = (centered.array() - mean).square().sum() /
                       static_cast<double>(centered.size() - 1);
    }
    response_var = std::clamp(response_var, 1e-4, 1e3);

    std::vector<KernelSpec> grid;
    for (double frac : {0.05, 0.1, 0.25, 0.5}) {
        KernelSpec spec;
        spec.family = family;
        spec.lengthscales = frac * bounds.widths();
        spec.outputscale = response_var;
        grid.push_back(std::move(spec));
    }
    return grid;
}

}  // namespace c2lse
