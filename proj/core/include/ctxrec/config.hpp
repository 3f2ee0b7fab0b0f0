#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctxrec/behavior.hpp"
#include "ctxrec/dataset.hpp"
#include "ctxrec/fusion.hpp"
#include "ctxrec/geo_kde.hpp"
#include "ctxrec/metrics.hpp"
#include "ctxrec/mgm.hpp"
#include "ctxrec/ncf.hpp"
#include "ctxrec/pfm.hpp"
#include "ctxrec/synthetic.hpp"

namespace ctxrec {

struct DatasetSpec {
  enum class Kind { Files, Synthetic };
  Kind kind = Kind::Synthetic;
  DatasetPaths paths;           // Kind::Files
  SyntheticConfig synthetic;    // Kind::Synthetic; regenerated per seed

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct ModelHyperparameters {
  PfmOptions pfm;
  NcfOptions ncf;
  double kde_min_bandwidth_km = 0.01;
  double amc_alpha = 0.1;
  MgmOptions mgm;

  friend bool operator==(const ModelHyperparameters&, const ModelHyperparameters&) = default;
};

struct EvaluationOptions {
  std::vector<Metric> metrics{Metric::Precision, Metric::Recall, Metric::Ndcg};
  std::vector<std::size_t> k{10, 20};
  std::size_t negatives = kEvaluationNegatives;
  SampleMode mode = SampleMode::Test;  // Validation scores the validation slice instead
  Metric cd_metric = Metric::Ndcg;
  std::size_t cd_k = 20;
  AspectStatistic aspect_statistic = AspectStatistic::Mean;

  friend bool operator==(const EvaluationOptions&, const EvaluationOptions&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSpec dataset;
  FilterOptions filter;
  SplitFractions split;
  std::vector<std::string> models{"M"};
  Normalization normalization = Normalization::PerUserMinMax;
  ModelHyperparameters hyper;
  EvaluationOptions evaluation;
  std::vector<std::uint64_t> seeds{42};
  std::filesystem::path output_dir = "ctxrec-out";
  bool save_models = false;
  bool save_recommendations = false;

  /// Parsed model grid; the list length is the largest K.
  std::vector<FusionConfig> grid() const;
  std::size_t list_length() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Strict: unknown keys, wrong types and out-of-range values throw
/// ConfigError. Relative paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Structural checks that need no data: labels decode, K list non-empty,
/// fractions valid, NCF/MF factor counts agree, categorical context on a
/// synthetic spec without categories.
void validate_config(const ExperimentConfig& cfg);

/// Checks the grid against a loaded dataset (categorical context needs
/// categories). Throws ConfigError naming the offending model.
void validate_against_dataset(const ExperimentConfig& cfg, const Dataset& d);

/// FNV-1a 64 fingerprint (hex) of the canonical JSON.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace ctxrec
