#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "c2lse/acquisition.hpp"
#include "c2lse/rng.hpp"
#include "c2lse/types.hpp"

namespace c2lse {

/// Finite dataset standing in for an expensive simulator. Queries are
/// restricted to stored points (within tolerance).
struct TabularOracle {
    Matrix points;  // rows
    Vector values;
    double tolerance = 1e-9;  // absolute, per coordinate

    /// Row index of the stored point matching x; throws with the nearest
    /// stored point reported on a miss.
    Index lookup(const Vector& x) const;
};

/// A level-set benchmark: box domain, threshold, an oracle (analytic formula
/// or tabular rows), observation noise and the evaluation grid shape.
struct LevelSetProblem {
    std::string name;
    DomainBounds bounds;
    double threshold = 0.0;
    std::function<double(const Vector&)> analytic;  // empty when tabular
    std::optional<TabularOracle> tabular;
    double noise_variance = 1e-4;
    std::vector<Index> truth_grid_shape;  // per-dimension point counts; empty tabular = all rows

    bool is_tabular() const { return tabular.has_value(); }
    Index dim() const { return bounds.dim(); }
    double evaluate_noiseless(const Vector& x) const;
};

/// Truth labels on the evaluation grid; SUPER exactly when the noiseless value
/// exceeds the threshold.
struct GroundTruth {
    Matrix points;
    Vector values;
    std::vector<Label> labels;  // Super or Sub only

    Index count() const { return points.rows(); }
    Index count_super() const;
};

// Synthetic benchmark functions.
double mc2d_eval(const Vector& x);   // exp(sin^2 x1 * sin^2 x2)
double mc3d_eval(const Vector& x);   // exp(sin^2 x1 * sin^2 x2 * sin^2 x3)
double sin2d_eval(const Vector& x);  // sin(10 x1) + cos(4 x2) - cos(3 x1 x2)

/// Named benchmark problem: "mc2d" (h=2.2 on [0,9]^2, 100x100 truth grid),
/// "mc3d" (h=1.6 on [0,6]^3, 30^3), "sin2d" (h=0.5 on [0,2]x[0,3], 100x100).
LevelSetProblem make_problem(const std::string& name, double noise_variance = 1e-4);

/// Endpoint-inclusive uniform grid over the box; rows are enumerated in
/// row-major order (last dimension fastest).
Matrix uniform_grid(const DomainBounds& bounds, const std::vector<Index>& shape);

/// Evaluate the truth grid. For tabular problems with an explicit grid shape,
/// missing grid points raise an error listing the gaps; with no shape, the
/// stored rows are the grid.
GroundTruth build_ground_truth(const LevelSetProblem& problem);

/// One noisy observation y = f(x) + eta, eta ~ N(0, noise_variance).
/// Deterministic for a given rng state.
double observe(const LevelSetProblem& problem, const Vector& x, Rng& rng);

/// Load a CSV dataset (header row, decimal-point numerics) as a tabular
/// problem: bounds are per-column extremes and the truth grid is all rows.
LevelSetProblem load_tabular_dataset(const std::string& path,
                                     const std::vector<std::string>& point_columns,
                                     const std::string& value_column, double threshold,
                                     double noise_variance = 1e-4, double tolerance = 1e-9);

}  // namespace c2lse
