#pragma once

#include <vector>

#include "c2lse/gp.hpp"
#include "c2lse/types.hpp"

namespace c2lse {

/// Box constraints and ascent controls for maximum-likelihood fitting.
/// Optimization runs in log-hyperparameter space, coordinate-wise, with a
/// golden-section line search per coordinate: derivative-free and
/// deterministic.
struct HyperFitOptions {
    Vector lengthscale_lower;  // per input dimension
    Vector lengthscale_upper;
    double outputscale_lower = 1e-6;
    double outputscale_upper = 1e3;
    int ascent_sweeps = 2;   // coordinate sweeps per start; 0 = score starts only
    int golden_iters = 24;   // golden-section iterations per line search

    /// Lengthscale bounds [1e-3, 1e3] x domain width per dimension.
    static HyperFitOptions for_box(const DomainBounds& bounds);

    void validate() const;
};

struct HyperFitResult {
    KernelSpec spec;
    double log_likelihood;
    bool fallback = false;  // set when every ascent start failed numerically
};

/// Best-likelihood kernel found by multistart coordinate ascent seeded from
/// init_grid. The result never scores below any init_grid entry.
HyperFitResult fit_hyperparameters(const ObservationSet& obs,
                                   const std::vector<KernelSpec>& init_grid,
                                   const HyperFitOptions& options, double prior_mean = 0.0);

/// Small deterministic start grid: isotropic lengthscales at a few fractions
/// of the domain width, outputscale seeded from the response variance.
std::vector<KernelSpec> default_init_grid(const DomainBounds& bounds, const ObservationSet& obs,
                                          KernelFamily family, double prior_mean = 0.0);

}  // namespace c2lse
