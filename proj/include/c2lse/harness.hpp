#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "c2lse/acquisition.hpp"
#include "c2lse/gp.hpp"
#include "c2lse/problems.hpp"
#include "c2lse/search.hpp"

namespace c2lse {

/// Everything a seeded run needs. Zero-valued n_init / n_raw_samples select
/// the documented defaults (2d+1 and 512d).
struct ExperimentConfig {
    // problem selection: a named benchmark or a tabular dataset
    std::string problem;
    std::string data;
    std::vector<std::string> point_columns;
    std::string value_column;
    double threshold = std::numeric_limits<double>::quiet_NaN();  // tabular only

    AcquisitionMethod method = AcquisitionMethod::C2LSE;
    double epsilon = 0.1;
    double beta = 3.0;
    double straddle_kappa = 1.96;

    int budget = 100;  // T
    int n_init = 0;    // 0 -> 2*dim + 1
    double noise_variance = 1e-4;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int refit_every = 1;
    int eval_every = 1;

    int n_raw_samples = 0;  // 0 -> 512*dim
    int n_restarts = 10;
    int max_refine_iters = 40;

    bool record_timings = false;

    void validate() const;  // throws std::invalid_argument citing the violated constraint
    LevelSetProblem make_problem_instance() const;
    AcquisitionSpec acquisition_spec() const;
    SearchBudget search_budget(std::uint64_t seed) const;
    int resolved_n_init(Index dim) const { return n_init > 0 ? n_init : 2 * static_cast<int>(dim) + 1; }
};

/// Per-class F1 on the truth grid plus the raw band-rule counts.
struct MetricsRow {
    double f1_super = 0.0;
    double f1_sub = 0.0;
    double f1_macro = 0.0;
    Index n_super = 0;    // band-rule counts, Unknown left unresolved
    Index n_sub = 0;
    Index n_unknown = 0;
    bool vacuous_super = false;  // class absent from truth and predictions
    bool vacuous_sub = false;
};

/// F1 of resolved predictions (no Unknown) against truth labels. A class
/// absent from both truth and predictions scores 1 with its vacuous flag set.
MetricsRow f1_scores(const std::vector<Label>& truth, const std::vector<Label>& predicted);

/// Band-rule classification of every truth point; Unknown is resolved to the
/// sign of the posterior mean for scoring while the raw counts stay in the row.
MetricsRow evaluate_f1(const GPosterior& gp, const GroundTruth& truth, double h, double beta);

struct IterationRow {
    int iteration = 0;
    Vector query;
    double observation = 0.0;
    double acq_value = 0.0;
    double cum_info_gain = 0.0;
    double f1_macro = std::numeric_limits<double>::quiet_NaN();  // NaN when not evaluated
    double wall_ms = 0.0;
    long gp_inferences = 0;
    // posterior state at the query before observing, for the theory checks
    double variance_before = 0.0;
    double margin_before = 0.0;  // |mu_{t-1}(x_t) - h|
    double outputscale = 1.0;    // of the kernel used at this iteration
};

/// Truth-grid diagnostics captured at an evaluation iteration.
struct LinkagePoint {
    int iteration = 0;
    double max_acq_truth = 0.0;        // max over the grid of the Eq-1 ratio
    double min_confidence_clear = 2.0; // min confidence where |mu-h| > eps (2 = none such)
    double max_margin_unknown = 0.0;   // max |mu-h| over Unknown points (0 = none)
    Index n_unknown = 0;
    bool triggered = false;            // max_acq_truth <= 1/beta
};

struct RunRecord {
    std::uint64_t seed = 0;
    bool aborted = false;
    std::string abort_reason;
    Matrix initial_points;
    Vector initial_responses;
    std::vector<IterationRow> rows;
    std::vector<LinkagePoint> linkage;
    KernelSpec final_kernel;
    // F1 of the final posterior, recorded even when the loop stops before the
    // budget (the grid-restricted baseline can classify everything early)
    double final_f1_macro = std::numeric_limits<double>::quiet_NaN();
    double total_wall_ms = 0.0;
};

/// One seeded run of the active loop: initial design, then budget iterations
/// of refit / fit / acquisition-argmax / observe, with diagnostics every
/// iteration and truth-grid evaluation on the eval_every schedule.
/// Numerical failure aborts with a partial record and the failure flag set.
RunRecord run_active_loop(const ExperimentConfig& config, const LevelSetProblem& problem,
                          const GroundTruth& truth, std::uint64_t seed);

/// Identical loop with the argmax replaced by a uniform query from the box;
/// the paired baseline for effectiveness comparisons.
RunRecord run_random_baseline(const ExperimentConfig& config, const LevelSetProblem& problem,
                              const GroundTruth& truth, std::uint64_t seed);

struct ReplicateTable {
    std::vector<RunRecord> runs;  // one per seed, config order
    std::vector<int> eval_iterations;
    std::vector<double> f1_mean;  // across seeds, per eval iteration
    std::vector<double> f1_std;   // population standard deviation
    std::vector<std::uint64_t> aborted_seeds;
};

ReplicateTable run_replicates(const ExperimentConfig& config, const LevelSetProblem& problem,
                              const GroundTruth& truth);

/// Aggregate a set of completed runs (used by the emitters as well).
ReplicateTable aggregate_runs(std::vector<RunRecord> runs);

struct EpsilonSweepRow {
    double epsilon = 0.0;
    ReplicateTable table;
    double mean_pairwise_distance = 0.0;  // among loop queries, averaged over seeds
    double final_f1_mean = 0.0;
    double final_f1_std = 0.0;
};

std::vector<EpsilonSweepRow> sweep_epsilon(const ExperimentConfig& base,
                                           const std::vector<double>& epsilons,
                                           const LevelSetProblem& problem,
                                           const GroundTruth& truth);

/// Mean pairwise Euclidean distance among this run's loop queries.
double mean_pairwise_query_distance(const RunRecord& record);

struct GridCompareRow {
    std::string grid_label;
    std::vector<Index> shape;
    double lse_final_f1_mean = 0.0;
    double lse_cum_inferences_mean = 0.0;
    double c2lse_final_f1_mean = 0.0;      // identical across rows by construction
    double c2lse_cum_inferences_mean = 0.0;
};

/// Grid-restricted ambiguity baseline with online classification: points whose
/// band clears the threshold are classified once and drop out of the candidate
/// set; the acquisition is evaluated on the remaining points each iteration
/// (that evaluation count is the reported inference cost).
RunRecord run_grid_restricted_lse(const ExperimentConfig& config, const LevelSetProblem& problem,
                                  const GroundTruth& truth, const std::vector<Index>& grid_shape,
                                  std::uint64_t seed);

std::vector<GridCompareRow> grid_compare(const ExperimentConfig& base,
                                         const std::vector<std::vector<Index>>& grid_shapes,
                                         const LevelSetProblem& problem, const GroundTruth& truth);

}  // namespace c2lse
