#pragma once

#include <string>
#include <vector>

#include "c2lse/harness.hpp"

namespace c2lse {

/// Throws unless outdir exists (creating it if needed) and accepts a probe
/// file; called before any computation so nothing is lost to a bad path.
void ensure_writable(const std::string& outdir);

/// Write-then-rename so readers never see partial files.
void write_file_atomic(const std::string& path, const std::string& content);

/// Write trace.csv / summary.csv / resolved_config.toml and the SVG charts
/// (an F1 curve, plus a query scatter over the truth grid for 2-D problems).
/// Returns the list of files written.
std::vector<std::string> emit_results(const ExperimentConfig& config, const ReplicateTable& table,
                                      const LevelSetProblem& problem, const GroundTruth& truth,
                                      const std::string& outdir);

/// trace.csv content: iteration,seed,x0..,y,acq_value,cum_info_gain,f1_macro,
/// wall_ms,gp_inferences. The wall_ms column is written as 0 unless
/// record_timings is on, keeping identical configs byte-identical.
std::string render_trace_csv(const ExperimentConfig& config, const ReplicateTable& table,
                             Index dim);

std::string render_summary_csv(const ReplicateTable& table);

/// truth.csv (coordinates, value, label); returns the superlevel fraction.
double emit_truth(const LevelSetProblem& problem, const GroundTruth& truth,
                  const std::string& outdir);

std::string render_f1_curve_svg(const ReplicateTable& table);
std::string render_query_scatter_svg(const ReplicateTable& table, const LevelSetProblem& problem,
                                     const GroundTruth& truth);

}  // namespace c2lse
