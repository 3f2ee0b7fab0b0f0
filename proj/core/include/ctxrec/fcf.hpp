#pragma once

#include <nlohmann/json_fwd.hpp>

#include <utility>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

/// Cosine similarity of two users' training count vectors; 0 if either is empty.
double cosine_similarity(const FrequencyMatrix& r, UserIndex a, UserIndex b);

/// Friend-based collaborative filtering:
///   sum_f sim(u, f) R(f, l) / sum_f sim(u, f)
/// over u's friends, 0 without friends or when every similarity is 0.
double fcf_score(const FrequencyMatrix& r, const SocialGraph& s, UserIndex u, PoiIndex l);

/// Precomputed sparse FCF rows for all users.
class FcfModel final : public Scorer {
 public:
  FcfModel() = default;
  FcfModel(std::vector<std::vector<std::pair<PoiIndex, double>>> rows, std::size_t num_pois);

  static FcfModel fit(const FrequencyMatrix& r, const SocialGraph& s);

  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  nlohmann::json to_json() const;
  static FcfModel from_json(const nlohmann::json& j);
  friend bool operator==(const FcfModel& a, const FcfModel& b) {
    return a.rows_ == b.rows_ && a.num_pois_ == b.num_pois_;
  }

 private:
  std::vector<std::vector<std::pair<PoiIndex, double>>> rows_;
  std::size_t num_pois_ = 0;
};

}  // namespace ctxrec
