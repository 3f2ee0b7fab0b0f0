#pragma once

#include <filesystem>

#include "ctxrec/experiment.hpp"

namespace ctxrec {

/// Writes every artifact of a run into `out_dir` (created if needed):
/// results.csv, per_user.csv, significance.csv, normality.csv,
/// results_table.md, cd_report.txt, cd_diagram.svg, behavior_profiles.csv,
/// behavior_correlations.csv, bucketed_report.csv, bucketed_<aspect>.svg,
/// dataset_stats.csv, pfm_trace.csv, ncf_trace.csv, index_map.tsv and
/// manifest.json. Throws Error on empty results, DataError when the
/// directory cannot be written.
void emit_reports(const ResultsTable& table, const std::filesystem::path& out_dir);

/// Only the files derived by analyze(): results.csv, significance.csv,
/// normality.csv, results_table.md, cd_report.txt/svg, bucketed_* and
/// behavior_correlations.csv.
void emit_analysis_reports(const ResultsTable& table, const std::filesystem::path& out_dir);

/// Rebuilds config, units, rows and profiles from a run directory
/// (manifest.json, per_user.csv, behavior_profiles.csv) and re-runs
/// analyze(). Traces, dataset statistics and wall-times are not restored.
ResultsTable load_results(const std::filesystem::path& dir);

/// The config recorded in a manifest.
ExperimentConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace ctxrec
