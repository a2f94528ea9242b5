#pragma once

#include <cstdint>
#include <functional>

#include "c2lse/types.hpp"

namespace c2lse {

/// Budget for continuous acquisition maximization. n_raw_samples = 0 picks the
/// default 512 * dim. max_refine_iters = 0 disables local refinement (the
/// result is then the best raw probe).
struct SearchBudget {
    int n_restarts = 10;
    int n_raw_samples = 0;
    int max_refine_iters = 40;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_restarts < 1) throw std::invalid_argument("SearchBudget: n_restarts must be >= 1");
        if (n_raw_samples < 0)
            throw std::invalid_argument("SearchBudget: n_raw_samples must be >= 0 (0 = default)");
        if (max_refine_iters < 0)
            throw std::invalid_argument("SearchBudget: max_refine_iters must be >= 0");
    }
};

using ScoreFn = std::function<double(const Vector&)>;

struct SearchResult {
    Vector argmax;
    double value = 0.0;
    long evaluations = 0;  // how many times the score function was called
};

/// Best-seen maximization over the box: a prefix-extendable quasi-random probe
/// sweep followed by derivative-free coordinate refinement of the top probes.
/// Deterministic given the budget seed; the returned value is never below any
/// probed score. Non-finite scores are discarded; if every probe is
/// non-finite, throws NumericalError.
SearchResult maximize_continuous(const ScoreFn& score, const DomainBounds& bounds,
                                 const SearchBudget& budget);

/// Exact argmax over a finite candidate list (rows); first index wins ties.
SearchResult maximize_on_grid(const ScoreFn& score, const Matrix& candidates);

/// Latin-hypercube design of n points in the box; one point per stratum along
/// each axis. Deterministic given seed.
Matrix sample_initial_design(const DomainBounds& bounds, int n, std::uint64_t seed);

/// The probe sequence used by maximize_continuous: a Halton sequence with a
/// seeded toroidal shift. Prefixes agree across different n.
Matrix quasirandom_probes(const DomainBounds& bounds, int n, std::uint64_t seed);

}  // namespace c2lse
