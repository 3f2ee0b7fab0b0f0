#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

enum class BaseModel { None, Mf, Ncf };

/// Concrete scorer plugged into the sum. GeoUniversal is the KDE with one
/// bandwidth shared by all users (the GeoSoCa / LORE geographical model).
enum class ContextKind { Geo, GeoUniversal, Temporal, Social, Categorical, Fcf, Mgm };

/// Label namespace. Proposed models are M-(..)/N-(..); the others are
/// fixed scorer bundles reproducing the baselines.
enum class ModelFamily { Proposed, GeoSoCa, Lore, PfmMgm };

enum class Normalization { None, PerUserMinMax };

std::string_view to_string(BaseModel b);
std::string_view to_string(ContextKind c);
std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

struct FusionConfig {
  ModelFamily family = ModelFamily::Proposed;
  BaseModel base = BaseModel::Mf;
  std::vector<ContextKind> contexts;  // order of the label letters
  Normalization normalization = Normalization::PerUserMinMax;
  std::size_t n = 20;

  friend bool operator==(const FusionConfig&, const FusionConfig&) = default;
};

/// "M", "N-(ST)", "GeoSoCa-(GS)", "FCFKDEAMC-(GT)", "PFMMGM-(MG)", ...
std::string format_model_label(const FusionConfig& cfg);
/// Inverse of format_model_label; throws ConfigError on unknown labels,
/// repeated letters, or letters outside the family's bundle.
FusionConfig parse_model_label(std::string_view label,
                               Normalization normalization = Normalization::PerUserMinMax,
                               std::size_t n = 20);
/// Letters only, e.g. "GT" (empty for a bare base model).
std::string context_letters(const FusionConfig& cfg);

/// Sum rule for one (user, POI): base + every selected context score.
/// Throws ModelError unless `context_scores` covers exactly cfg.contexts.
double fuse(double base_score, std::span<const double> context_scores, const FusionConfig& cfg);

/// Maps scores onto [0, 1] (min -> 0, max -> 1); a constant vector maps to 0.
void normalize_minmax(std::span<double> scores);

/// Candidate-wise fusion. `base` is empty for BaseModel::None; each entry of
/// `contexts` has one score per candidate. Normalisation is applied to the
/// base and to each context independently before summing.
std::vector<double> fuse_candidates(std::span<const double> base,
                                    const std::vector<std::vector<double>>& contexts,
                                    Normalization normalization, std::size_t num_candidates);

struct ScoredPoi {
  PoiIndex poi = 0;
  double score = 0.0;

  friend bool operator==(const ScoredPoi&, const ScoredPoi&) = default;
};

struct RecommendationList {
  UserIndex user = 0;
  std::vector<ScoredPoi> items;  // non-increasing score

  std::vector<PoiIndex> pois() const;
};

/// Highest `n` candidates; ties go to the lower POI index.
RecommendationList recommend_top_n(UserIndex u, std::span<const PoiIndex> candidates,
                                   std::span<const double> scores, std::size_t n);

/// Base ranker plus context scorers combined under one FusionConfig.
class FusionRecommender {
 public:
  FusionRecommender(FusionConfig cfg, const Scorer* base, std::vector<const Scorer*> contexts);

  std::vector<double> score(UserIndex u, std::span<const PoiIndex> candidates) const;
  RecommendationList recommend(UserIndex u, std::span<const PoiIndex> candidates) const;
  const FusionConfig& config() const { return cfg_; }

 private:
  FusionConfig cfg_;
  const Scorer* base_;
  std::vector<const Scorer*> contexts_;
};

/// `user_id \t rank \t poi_id \t score`, ranks starting at 1.
void write_recommendations(const std::filesystem::path& path, const Dataset& d,
                           std::span<const RecommendationList> lists);

}  // namespace ctxrec
