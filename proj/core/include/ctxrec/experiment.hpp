#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctxrec/behavior.hpp"
#include "ctxrec/config.hpp"
#include "ctxrec/dataset.hpp"
#include "ctxrec/metrics.hpp"
#include "ctxrec/pfm.hpp"
#include "ctxrec/stats.hpp"

namespace ctxrec {

/// Worker count: CTXREC_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Callers write
/// into preallocated slots, so results do not depend on scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

/// One evaluated (seed, user) pair. Metric vectors are indexed by unit.
struct EvaluationUnit {
  std::size_t seed_index = 0;
  UserIndex user = 0;
  std::string user_id;
};

struct ProfileRow {
  std::size_t seed_index = 0;
  std::string user_id;
  std::optional<std::size_t> unit;  // set when the user was evaluated
  BehaviorProfile profile;
};

struct SignificanceEntry {
  std::string model_a;
  std::string model_b;
  Metric metric = Metric::Ndcg;
  std::size_t k = 10;
  double mean_a = 0.0;
  double mean_b = 0.0;
  TTestResult test;
};

struct AspectCorrelations {
  std::size_t users = 0;
  std::optional<double> geo_exploration;
  std::optional<double> temporal_exploration;
  std::optional<double> geo_temporal;
};

struct DatasetStatsRow {
  std::uint64_t seed = 0;
  std::string stage;  // "raw" or "filtered"
  DatasetStats stats;
};

struct SeedRecord {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> components;
};

struct ResultsTable {
  ExperimentConfig config;
  std::vector<EvaluationUnit> units;
  /// Model-major, then metric, then K, all in config order. MetricResult::users
  /// holds unit indices.
  std::vector<MetricResult> rows;

  std::vector<SignificanceEntry> significance;
  std::optional<CdRanking> cd;
  std::string cd_note;  // why the CD ranking is missing, if it is
  std::vector<NormalityDiagnostic> normality;  // parallel to rows

  std::vector<ProfileRow> profiles;
  std::vector<BucketedReport> buckets;
  std::vector<std::string> bucket_notes;
  AspectCorrelations correlations;

  std::vector<DatasetStatsRow> dataset_stats;
  std::vector<PfmTracePoint> pfm_trace;  // first seed
  std::vector<double> ncf_loss_trace;    // first seed
  std::vector<std::pair<std::string, double>> wall_times;  // seconds per stage
  std::vector<SeedRecord> seeds;
  std::shared_ptr<const Dataset> first_dataset;  // filtered, first seed

  const MetricResult& find(const std::string& model, Metric metric, std::size_t k) const;
  /// Models that `model` beats with p < 0.05 (and a higher mean) on metric@k.
  std::vector<std::string> beats(const std::string& model, Metric metric, std::size_t k) const;
};

/// Full pipeline, once per seed, then the statistical and behavioural
/// analysis. Deterministic in the config (wall-times aside). Throws
/// ConfigError before any training when the grid does not fit the data.
ResultsTable run_experiment(const ExperimentConfig& cfg);

/// Recomputes significance, CD ranking, normality diagnostics, buckets and
/// correlations from rows, units and profiles.
void analyze(ResultsTable& table);

/// Loads the dataset described by the config for one seed (synthetic data
/// is regenerated from a seed derived from `seed`).
Dataset materialize_dataset(const DatasetSpec& spec, std::uint64_t seed);

}  // namespace ctxrec
