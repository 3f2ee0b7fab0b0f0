#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

// ---------------------------------------------------------------------------
// Loading / writing

struct DatasetPaths {
  std::filesystem::path checkins;
  std::filesystem::path pois;
  std::filesystem::path social;  // empty: no social graph
  std::optional<std::filesystem::path> categories;

  friend bool operator==(const DatasetPaths&, const DatasetPaths&) = default;
};

/// Reads the TSV formats:
///   checkins.tsv   user_id \t poi_id \t unix_timestamp
///   pois.tsv       poi_id \t lat \t lon [\t category_id]
///   social.tsv     user_a \t user_b
///   categories.tsv category_id \t name
/// Throws DataError naming the file and line on any malformed row.
Dataset load_dataset(const DatasetPaths& paths);

/// Writes checkins.tsv, pois.tsv, social.tsv (and categories.tsv when the
/// dataset has categories) into `dir`. Loading the result reproduces the
/// registries and per-user logs exactly.
DatasetPaths write_dataset(const Dataset& d, const std::filesystem::path& dir);

/// `kind \t index \t id` rows for users, POIs and categories.
void write_index_map(const Dataset& d, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Preprocessing

struct FilterOptions {
  std::size_t min_user_checkins = 0;
  std::size_t min_poi_visitors = 0;
  bool fixpoint = false;  // repeat until nothing else is removed

  friend bool operator==(const FilterOptions&, const FilterOptions&) = default;
};

/// Drops users with fewer than `min_user_checkins` check-ins, then POIs with
/// fewer than `min_poi_visitors` distinct remaining visitors. Surviving users
/// and POIs are re-indexed in their original relative order.
Dataset filter_dataset(const Dataset& d, const FilterOptions& options);

struct SplitFractions {
  double train = 0.7;
  double test = 0.2;
  double validation = 0.1;

  friend bool operator==(const SplitFractions&, const SplitFractions&) = default;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t validation = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

/// How a user with `n` chronological check-ins is cut. Users with fewer than
/// three check-ins are train-only.
SplitCounts split_counts(std::size_t n, const SplitFractions& fractions);

struct SplitDataset {
  Dataset train;
  Dataset test;
  Dataset validation;
  std::vector<UserIndex> train_only_users;
};

SplitDataset temporal_split(const Dataset& d, const SplitFractions& fractions = {});

// ---------------------------------------------------------------------------
// Frequency matrix

struct FrequencyEntry {
  std::uint32_t index = 0;  // POI in a row, user in a column
  std::uint32_t count = 0;
};

/// Sparse user x POI visit counts. Absent entries are zero.
class FrequencyMatrix {
 public:
  FrequencyMatrix() = default;
  FrequencyMatrix(std::size_t num_users, std::size_t num_pois, const CheckinLog& log);

  std::uint32_t count(UserIndex u, PoiIndex l) const;
  std::span<const FrequencyEntry> row(UserIndex u) const { return rows_.at(u); }
  std::span<const FrequencyEntry> column(PoiIndex l) const { return columns_.at(l); }

  std::size_t num_users() const { return rows_.size(); }
  std::size_t num_pois() const { return columns_.size(); }
  std::size_t nnz() const { return nnz_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t user_total(UserIndex u) const;

 private:
  std::vector<std::vector<FrequencyEntry>> rows_;
  std::vector<std::vector<FrequencyEntry>> columns_;
  std::size_t nnz_ = 0;
  std::uint64_t total_ = 0;
};

FrequencyMatrix build_frequency_matrix(const Dataset& train);

// ---------------------------------------------------------------------------
// Sampling and evaluation candidates

struct InteractionSample {
  UserIndex user = 0;
  PoiIndex poi = 0;
  std::uint8_t label = 0;  // 1 observed, 0 sampled negative

  friend bool operator==(const InteractionSample&, const InteractionSample&) = default;
};

enum class SampleMode { Train, Test, Validation };

inline constexpr std::size_t kEvaluationNegatives = 1000;

/// Train mode: per user, as many negatives as unique training POIs, drawn
/// from POIs the user never visited in train. Test/validation mode:
/// min(`eval_negatives`, pool) negatives from POIs absent from both the
/// user's train and held-out check-ins. Uniform without replacement, a
/// function of (seed, user) only.
std::vector<InteractionSample> sample_negatives(const SplitDataset& split, SampleMode mode,
                                                std::uint64_t seed,
                                                std::size_t eval_negatives = kEvaluationNegatives);

/// Positives (one per unique user/POI training pair) followed by the
/// train-mode negatives, grouped by user.
std::vector<InteractionSample> build_training_samples(const SplitDataset& split,
                                                      std::uint64_t seed);

struct EvaluationUser {
  UserIndex user = 0;
  std::vector<PoiIndex> relevant;    // held-out POIs not seen in train, sorted
  std::vector<PoiIndex> candidates;  // relevant + sampled negatives, sorted
};

/// Ranking tasks for every user with at least one relevant held-out POI.
std::vector<EvaluationUser> build_evaluation_users(const SplitDataset& split,
                                                   std::span<const InteractionSample> negatives,
                                                   SampleMode mode = SampleMode::Test);

// ---------------------------------------------------------------------------
// Summary statistics

struct DatasetStats {
  std::size_t users = 0;
  std::size_t pois = 0;
  std::size_t checkins = 0;
  std::size_t unique_checkins = 0;  // distinct (user, POI) pairs
  std::size_t categories = 0;       // 0 when the dataset has none
  std::size_t social_links = 0;
  double checkins_per_user = 0.0;
  double checkins_per_poi = 0.0;
  double sparsity = 0.0;  // 1 - unique / (users * pois)
};

DatasetStats dataset_stats(const Dataset& d);

}  // namespace ctxrec
