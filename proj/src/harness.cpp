#include "c2lse/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "c2lse/hyperfit.hpp"
#include "c2lse/rng.hpp"

namespace c2lse {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// rng stream ids per seed
constexpr std::uint64_t kStreamInitDesign = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamRandomQuery = 3;
constexpr std::uint64_t kStreamSearchBase = 100;

std::vector<Index> sample_distinct_rows(Index n_rows, int n, Rng& rng) {
    std::vector<Index> idx(static_cast<std::size_t>(n_rows));
    std::iota(idx.begin(), idx.end(), Index{0});
    const int take = std::min<int>(n, static_cast<int>(n_rows));
    for (int i = 0; i < take; ++i) {
        const Index j = i + static_cast<Index>(uniform01(rng) * static_cast<double>(n_rows - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(take));
    return idx;
}

struct TruthEval {
    MetricsRow metrics;
    LinkagePoint linkage;
};

TruthEval evaluate_truth_grid(const GPosterior& gp, const GroundTruth& truth, double h,
                              double beta, double epsilon, int iteration) {
    Vector means, variances;
    posterior_batch(gp, truth.points, means, variances);

    TruthEval out;
    out.linkage.iteration = iteration;
    std::vector<Label> predicted(static_cast<std::size_t>(truth.count()));
    for (Index i = 0; i < truth.count(); ++i) {
        const double stddev = std::sqrt(variances[i]);
        const double margin = std::abs(means[i] - h);
        const Label raw = classify_point(means[i], stddev, h, beta);
        switch (raw) {
            case Label::Super: ++out.metrics.n_super; break;
            case Label::Sub: ++out.metrics.n_sub; break;
            case Label::Unknown:
                ++out.metrics.n_unknown;
                out.linkage.max_margin_unknown = std::max(out.linkage.max_margin_unknown, margin);
                break;
        }
        predicted[static_cast<std::size_t>(i)] =
            (raw == Label::Unknown) ? (means[i] > h ? Label::Super : Label::Sub) : raw;

        out.linkage.max_acq_truth =
            std::max(out.linkage.max_acq_truth, c2lse_score(means[i], stddev, h, epsilon));
        if (margin > epsilon)
            out.linkage.min_confidence_clear =
                std::min(out.linkage.min_confidence_clear, confidence_score(means[i], stddev, h));
    }
    out.linkage.n_unknown = out.metrics.n_unknown;
    out.linkage.triggered = out.linkage.max_acq_truth <= 1.0 / beta;

    const MetricsRow scores = f1_scores(truth.labels, predicted);
    out.metrics.f1_super = scores.f1_super;
    out.metrics.f1_sub = scores.f1_sub;
    out.metrics.f1_macro = scores.f1_macro;
    out.metrics.vacuous_super = scores.vacuous_super;
    out.metrics.vacuous_sub = scores.vacuous_sub;
    return out;
}

enum class QueryMode { Acquisition, UniformRandom };

RunRecord run_loop(const ExperimentConfig& config, const LevelSetProblem& problem,
                   const GroundTruth& truth, std::uint64_t seed, QueryMode mode) {
    config.validate();
    const auto run_start = Clock::now();
    const Index d = problem.dim();
    const double h = problem.threshold;
    const int n_init = config.resolved_n_init(d);
    const AcquisitionSpec acq = config.acquisition_spec();

    RunRecord record;
    record.seed = seed;

    // initial design: space-filling for analytic problems, distinct stored
    // rows for tabular ones
    Rng init_rng(sub_seed(seed, kStreamInitDesign));
    if (problem.is_tabular()) {
        const auto rows = sample_distinct_rows(problem.tabular->points.rows(), n_init, init_rng);
        record.initial_points.resize(static_cast<Index>(rows.size()), d);
        for (std::size_t i = 0; i < rows.size(); ++i)
            record.initial_points.row(static_cast<Index>(i)) = problem.tabular->points.row(rows[i]);
    } else {
        record.initial_points = sample_initial_design(problem.bounds, n_init, sub_seed(seed, kStreamInitDesign));
    }

    Rng noise_rng(sub_seed(seed, kStreamNoise));
    Rng query_rng(sub_seed(seed, kStreamRandomQuery));

    ObservationSet data;
    data.noise_variance = config.noise_variance;
    data.points.resize(0, d);
    for (Index i = 0; i < record.initial_points.rows(); ++i) {
        const Vector x = record.initial_points.row(i).transpose();
        data.append(x, observe(problem, x, noise_rng));
    }
    record.initial_responses = data.responses;

    const HyperFitOptions hyper_opts = HyperFitOptions::for_box(problem.bounds);
    KernelSpec kernel = KernelSpec::isotropic(KernelFamily::Matern52, d,
                                              0.1 * problem.bounds.widths().mean(), 1.0);
    double cum_info_gain = 0.0;

    try {
        for (int t = 1; t <= config.budget; ++t) {
            const auto iter_start = Clock::now();
            if ((t - 1) % config.refit_every == 0) {
                kernel = fit_hyperparameters(
                             data, default_init_grid(problem.bounds, data, kernel.family, h),
                             hyper_opts, h)
                             .spec;
            }
            const GPosterior gp = fit(kernel, data, h);

            long inferences = 0;
            ScoreFn score = [&](const Vector& x) {
                const PosteriorValue pv = posterior_mean_var(gp, x);
                return acquisition_score(acq, pv.mean, std::sqrt(pv.variance), h);
            };

            Vector query;
            double acq_value = 0.0;
            if (mode == QueryMode::UniformRandom) {
                query.resize(d);
                for (Index j = 0; j < d; ++j)
                    query[j] = uniform(query_rng, problem.bounds.lower[j], problem.bounds.upper[j]);
                if (problem.is_tabular()) {
                    Rng pick(sub_seed(seed, kStreamSearchBase + static_cast<std::uint64_t>(t)));
                    const Index r = static_cast<Index>(
                        uniform01(pick) * static_cast<double>(problem.tabular->points.rows()));
                    query = problem.tabular->points.row(r).transpose();
                }
                acq_value = score(query);
                inferences = 1;
            } else if (problem.is_tabular()) {
                const SearchResult sr = maximize_on_grid(score, problem.tabular->points);
                query = sr.argmax;
                acq_value = sr.value;
                inferences = sr.evaluations;
            } else {
                const SearchResult sr =
                    maximize_continuous(score, problem.bounds, config.search_budget(
                        sub_seed(seed, kStreamSearchBase + static_cast<std::uint64_t>(t))));
                query = sr.argmax;
                acq_value = sr.value;
                inferences = sr.evaluations;
            }

            const PosteriorValue before = posterior_mean_var(gp, query);
            ++inferences;
            const double y = observe(problem, query, noise_rng);
            data.append(query, y);
            cum_info_gain += 0.5 * std::log1p(before.variance / config.noise_variance);

            IterationRow row;
            row.iteration = t;
            row.query = query;
            row.observation = y;
            row.acq_value = acq_value;
            row.cum_info_gain = cum_info_gain;
            row.gp_inferences = inferences;
            row.variance_before = before.variance;
            row.margin_before = std::abs(before.mean - h);
            row.outputscale = kernel.outputscale;

            if (t % config.eval_every == 0 || t == config.budget) {
                const GPosterior gp_post = fit(kernel, data, h);
                const TruthEval ev =
                    evaluate_truth_grid(gp_post, truth, h, config.beta, config.epsilon, t);
                row.f1_macro = ev.metrics.f1_macro;
                record.linkage.push_back(ev.linkage);
            }
            row.wall_ms = ms_since(iter_start);
            record.rows.push_back(std::move(row));
        }
        if (!record.rows.empty()) record.final_f1_macro = record.rows.back().f1_macro;
    } catch (const NumericalError& err) {
        record.aborted = true;
        record.abort_reason = err.what();
    }
    record.final_kernel = kernel;
    record.total_wall_ms = ms_since(run_start);
    return record;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (problem.empty() == data.empty())
        throw std::invalid_argument(
            "config: exactly one of 'problem' and 'data' must be set");
    if (!data.empty()) {
        if (point_columns.empty())
            throw std::invalid_argument("config: point_columns required with data");
        if (value_column.empty())
            throw std::invalid_argument("config: value_column required with data");
        if (!std::isfinite(threshold))
            throw std::invalid_argument("config: threshold required with data (finite)");
    } else if (std::isfinite(threshold)) {
        throw std::invalid_argument(
            "config: threshold is set by the named problem, not the config");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon > 0 required");
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta > 0 required");
    if (budget < 1) throw std::invalid_argument("config: budget >= 1 required");
    if (n_init < 0) throw std::invalid_argument("config: n_init >= 1 required (0 = default)");
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("config: noise_variance > 0 required");
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
    if (refit_every < 1) throw std::invalid_argument("config: refit_every >= 1 required");
    if (eval_every < 1) throw std::invalid_argument("config: eval_every >= 1 required");
    if (n_restarts < 1) throw std::invalid_argument("config: n_restarts >= 1 required");
    if (n_raw_samples < 0)
        throw std::invalid_argument("config: n_raw_samples >= 1 required (0 = default)");
    if (max_refine_iters < 0)
        throw std::invalid_argument("config: max_refine_iters >= 0 required");
    if (!(straddle_kappa > 0.0))
        throw std::invalid_argument("config: straddle_kappa > 0 required");
}

LevelSetProblem ExperimentConfig::make_problem_instance() const {
    if (!data.empty())
        return load_tabular_dataset(data, point_columns, value_column, threshold, noise_variance);
    return make_problem(problem, noise_variance);
}

AcquisitionSpec ExperimentConfig::acquisition_spec() const {
    AcquisitionSpec spec;
    spec.method = method;
    spec.epsilon = epsilon;
    spec.beta = beta;
    spec.straddle_kappa = straddle_kappa;
    spec.validate();
    return spec;
}

SearchBudget ExperimentConfig::search_budget(std::uint64_t seed) const {
    SearchBudget budget;
    budget.n_restarts = n_restarts;
    budget.n_raw_samples = n_raw_samples;
    budget.max_refine_iters = max_refine_iters;
    budget.seed = seed;
    return budget;
}

MetricsRow f1_scores(const std::vector<Label>& truth, const std::vector<Label>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("f1_scores: label vectors differ in length");
    auto per_class = [&](Label cls, bool& vacuous) {
        Index tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool is_true = truth[i] == cls;
            const bool is_pred = predicted[i] == cls;
            tp += (is_true && is_pred) ? 1 : 0;
            fp += (!is_true && is_pred) ? 1 : 0;
            fn += (is_true && !is_pred) ? 1 : 0;
        }
        if (tp == 0 && fp == 0 && fn == 0) {
            vacuous = true;  // class absent everywhere
            return 1.0;
        }
        vacuous = false;
        return (2.0 * tp) / static_cast<double>(2 * tp + fp + fn);
    };
    MetricsRow row;
    row.f1_super = per_class(Label::Super, row.vacuous_super);
    row.f1_sub = per_class(Label::Sub, row.vacuous_sub);
    row.f1_macro = 0.5 * (row.f1_super + row.f1_sub);
    return row;
}

MetricsRow evaluate_f1(const GPosterior& gp, const GroundTruth& truth, double h, double beta) {
    if (truth.count() == 0) throw std::invalid_argument("evaluate_f1: truth grid is empty");
    return evaluate_truth_grid(gp, truth, h, beta, /*epsilon=*/1.0, /*iteration=*/0).metrics;
}

RunRecord run_active_loop(const ExperimentConfig& config, const LevelSetProblem& problem,
                          const GroundTruth& truth, std::uint64_t seed) {
    return run_loop(config, problem, truth, seed, QueryMode::Acquisition);
}

RunRecord run_random_baseline(const ExperimentConfig& config, const LevelSetProblem& problem,
                              const GroundTruth& truth, std::uint64_t seed) {
    return run_loop(config, problem, truth, seed, QueryMode::UniformRandom);
}

ReplicateTable aggregate_runs(std::vector<RunRecord> runs) {
    ReplicateTable table;
    table.runs = std::move(runs);
    for (const RunRecord& run : table.runs)
        if (run.aborted) table.aborted_seeds.push_back(run.seed);

    // the eval schedule shared by every completed run
    std::vector<int> iters;
    for (const RunRecord& run : table.runs) {
        if (run.aborted) continue;
        std::vector<int> mine;
        for (const IterationRow& row : run.rows)
            if (!std::isnan(row.f1_macro)) mine.push_back(row.iteration);
        if (iters.empty())
            iters = mine;
        else if (mine != iters)
            iters.erase(std::remove_if(iters.begin(), iters.end(),
                                       [&](int it) {
                                           return std::find(mine.begin(), mine.end(), it) ==
                                                  mine.end();
                                       }),
                        iters.end());
    }
    table.eval_iterations = iters;
    for (int it : iters) {
        double sum = 0.0, sum_sq = 0.0;
        int n = 0;
        for (const RunRecord& run : table.runs) {
            if (run.aborted) continue;
            for (const IterationRow& row : run.rows)
                if (row.iteration == it && !std::isnan(row.f1_macro)) {
                    sum += row.f1_macro;
                    sum_sq += row.f1_macro * row.f1_macro;
                    ++n;
                    break;
                }
        }
        const double mean = n ? sum / n : 0.0;
        const double var = n ? std::max(0.0, sum_sq / n - mean * mean) : 0.0;
        table.f1_mean.push_back(mean);
        table.f1_std.push_back(std::sqrt(var));
    }
    return table;
}

ReplicateTable run_replicates(const ExperimentConfig& config, const LevelSetProblem& problem,
                              const GroundTruth& truth) {
    config.validate();
    std::vector<RunRecord> runs;
    runs.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds)
        runs.push_back(run_active_loop(config, problem, truth, seed));
    return aggregate_runs(std::move(runs));
}

double mean_pairwise_query_distance(const RunRecord& record) {
    const std::size_t n = record.rows.size();
    if (n < 2) return 0.0;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            total += (record.rows[i].query - record.rows[j].query).norm();
            ++pairs;
        }
    return total / static_cast<double>(pairs);
}

std::vector<EpsilonSweepRow> sweep_epsilon(const ExperimentConfig& base,
                                           const std::vector<double>& epsilons,
                                           const LevelSetProblem& problem,
                                           const GroundTruth& truth) {
    if (epsilons.empty()) throw std::invalid_argument("sweep_epsilon: epsilons must be nonempty");
    for (double eps : epsilons)
        if (!(eps > 0.0)) throw std::invalid_argument("sweep_epsilon: epsilon > 0 required");

    std::vector<EpsilonSweepRow> rows;
    for (double eps : epsilons) {
        ExperimentConfig config = base;
        config.epsilon = eps;
        EpsilonSweepRow row;
        row.epsilon = eps;
        row.table = run_replicates(config, problem, truth);
        double dist = 0.0;
        int n = 0;
        for (const RunRecord& run : row.table.runs) {
            if (run.aborted) continue;
            dist += mean_pairwise_query_distance(run);
            ++n;
        }
        row.mean_pairwise_distance = n ? dist / n : 0.0;
        if (!row.table.f1_mean.empty()) {
            row.final_f1_mean = row.table.f1_mean.back();
            row.final_f1_std = row.table.f1_std.back();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RunRecord run_grid_restricted_lse(const ExperimentConfig& config, const LevelSetProblem& problem,
                                  const GroundTruth& truth, const std::vector<Index>& grid_shape,
                                  std::uint64_t seed) {
    config.validate();
    const auto run_start = Clock::now();
    const Index d = problem.dim();
    const double h = problem.threshold;
    const Matrix candidates = uniform_grid(problem.bounds, grid_shape);
    const int n_init = config.resolved_n_init(d);

    RunRecord record;
    record.seed = seed;

    Rng init_rng(sub_seed(seed, kStreamInitDesign));
    const auto init_rows = sample_distinct_rows(candidates.rows(), n_init, init_rng);
    record.initial_points.resize(static_cast<Index>(init_rows.size()), d);
    for (std::size_t i = 0; i < init_rows.size(); ++i)
        record.initial_points.row(static_cast<Index>(i)) = candidates.row(init_rows[i]);

    Rng noise_rng(sub_seed(seed, kStreamNoise));
    ObservationSet data;
    data.noise_variance = config.noise_variance;
    data.points.resize(0, d);
    for (Index i = 0; i < record.initial_points.rows(); ++i) {
        const Vector x = record.initial_points.row(i).transpose();
        data.append(x, observe(problem, x, noise_rng));
    }
    record.initial_responses = data.responses;

    std::vector<Index> unclassified(static_cast<std::size_t>(candidates.rows()));
    std::iota(unclassified.begin(), unclassified.end(), Index{0});

    const HyperFitOptions hyper_opts = HyperFitOptions::for_box(problem.bounds);
    KernelSpec kernel = KernelSpec::isotropic(KernelFamily::Matern52, d,
                                              0.1 * problem.bounds.widths().mean(), 1.0);
    double cum_info_gain = 0.0;

    try {
        for (int t = 1; t <= config.budget && !unclassified.empty(); ++t) {
            const auto iter_start = Clock::now();
            if ((t - 1) % config.refit_every == 0) {
                kernel = fit_hyperparameters(
                             data, default_init_grid(problem.bounds, data, kernel.family, h),
                             hyper_opts, h)
                             .spec;
            }
            const GPosterior gp = fit(kernel, data, h);

            Matrix open(static_cast<Index>(unclassified.size()), d);
            for (std::size_t i = 0; i < unclassified.size(); ++i)
                open.row(static_cast<Index>(i)) = candidates.row(unclassified[i]);
            Vector means, variances;
            posterior_batch(gp, open, means, variances);
            const long inferences = static_cast<long>(unclassified.size());

            // online classification: confidently banded points leave the pool
            std::vector<Index> still_open;
            Index best = -1;
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < unclassified.size(); ++i) {
                const Index r = static_cast<Index>(i);
                const double stddev = std::sqrt(variances[r]);
                if (classify_point(means[r], stddev, h, config.beta) == Label::Unknown) {
                    still_open.push_back(unclassified[i]);
                    const double score = lse_ambiguity_score(means[r], stddev, h, config.beta);
                    if (score > best_score) {
                        best_score = score;
                        best = r;
                    }
                }
            }
            if (best < 0) {  // everything classified this round
                unclassified.clear();
                break;
            }
            const Vector query = open.row(best).transpose();
            const double variance_before = variances[best];
            const double margin_before = std::abs(means[best] - h);
            unclassified = std::move(still_open);

            const double y = observe(problem, query, noise_rng);
            data.append(query, y);
            cum_info_gain += 0.5 * std::log1p(variance_before / config.noise_variance);

            IterationRow row;
            row.iteration = t;
            row.query = query;
            row.observation = y;
            row.acq_value = best_score;
            row.cum_info_gain = cum_info_gain;
            row.gp_inferences = inferences;
            row.variance_before = variance_before;
            row.margin_before = margin_before;
            row.outputscale = kernel.outputscale;

            if (t % config.eval_every == 0 || t == config.budget || unclassified.empty()) {
                const GPosterior gp_post = fit(kernel, data, h);
                const TruthEval ev =
                    evaluate_truth_grid(gp_post, truth, h, config.beta, config.epsilon, t);
                row.f1_macro = ev.metrics.f1_macro;
                record.linkage.push_back(ev.linkage);
            }
            row.wall_ms = ms_since(iter_start);
            record.rows.push_back(std::move(row));
        }
        // the loop may stop before the budget once every candidate is
        // classified; the final posterior still gets scored
        const GPosterior gp_final = fit(kernel, data, h);
        record.final_f1_macro =
            evaluate_truth_grid(gp_final, truth, h, config.beta, config.epsilon,
                                record.rows.empty() ? 0 : record.rows.back().iteration)
                .metrics.f1_macro;
    } catch (const NumericalError& err) {
        record.aborted = true;
        record.abort_reason = err.what();
    }
    record.final_kernel = kernel;
    record.total_wall_ms = ms_since(run_start);
    return record;
}

std::vector<GridCompareRow> grid_compare(const ExperimentConfig& base,
                                         const std::vector<std::vector<Index>>& grid_shapes,
                                         const LevelSetProblem& problem,
                                         const GroundTruth& truth) {
    if (grid_shapes.empty()) throw std::invalid_argument("grid_compare: grid_shapes empty");

    ExperimentConfig c2lse_config = base;
    c2lse_config.method = AcquisitionMethod::C2LSE;
    const ReplicateTable c2lse_table = run_replicates(c2lse_config, problem, truth);

    auto final_f1 = [](const RunRecord& run) {
        if (!std::isnan(run.final_f1_macro)) return run.final_f1_macro;
        for (auto it = run.rows.rbegin(); it != run.rows.rend(); ++it)
            if (!std::isnan(it->f1_macro)) return it->f1_macro;
        return 0.0;
    };
    auto cum_inferences = [](const RunRecord& run) {
        long total = 0;
        for (const IterationRow& row : run.rows) total += row.gp_inferences;
        return static_cast<double>(total);
    };
    auto mean_over = [](const std::vector<RunRecord>& runs, auto&& f) {
        double sum = 0.0;
        int n = 0;
        for (const RunRecord& run : runs) {
            if (run.aborted) continue;
            sum += f(run);
            ++n;
        }
        return n ? sum / n : 0.0;
    };

    const double c2lse_f1 = mean_over(c2lse_table.runs, final_f1);
    const double c2lse_cost = mean_over(c2lse_table.runs, cum_inferences);

    ExperimentConfig lse_config = base;
    lse_config.method = AcquisitionMethod::LseAmbiguity;

    std::vector<GridCompareRow> rows;
    for (const auto& shape : grid_shapes) {
        std::vector<RunRecord> runs;
        for (std::uint64_t seed : lse_config.seeds)
            runs.push_back(run_grid_restricted_lse(lse_config, problem, truth, shape, seed));

        GridCompareRow row;
        row.shape = shape;
        std::ostringstream label;
        for (std::size_t i = 0; i < shape.size(); ++i) label << (i ? "x" : "") << shape[i];
        row.grid_label = label.str();
        row.lse_final_f1_mean = mean_over(runs, final_f1);
        row.lse_cum_inferences_mean = mean_over(runs, cum_inferences);
        row.c2lse_final_f1_mean = c2lse_f1;
        row.c2lse_cum_inferences_mean = c2lse_cost;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace c2lse
