#pragma once

#include <nlohmann/json_fwd.hpp>

#include <utility>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/power_law.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

/// Category popularity g(u, l) = sum_c B(u, c) * H(c, l) as a cumulative
/// power law. B(u, c) counts the user's check-ins in category c; H(c, l) is
/// the all-user check-in count of l when l belongs to c, else 0.
class CategoricalModel final : public Scorer {
 public:
  CategoricalModel() = default;
  CategoricalModel(PowerLawExponent gamma,
                   std::vector<std::vector<std::pair<CategoryIndex, double>>> user_category,
                   std::vector<CategoryIndex> poi_category, std::vector<double> poi_popularity);

  /// Throws ModelError("categorical context unavailable") without categories.
  static CategoricalModel fit(const FrequencyMatrix& r, std::span<const Poi> pois,
                              bool has_categories);

  double gamma() const { return gamma_.value; }
  bool degenerate() const { return gamma_.degenerate; }
  double popularity(UserIndex u, PoiIndex l) const;  // g(u, l)

  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  nlohmann::json to_json() const;
  static CategoricalModel from_json(const nlohmann::json& j);
  friend bool operator==(const CategoricalModel& a, const CategoricalModel& b) {
    return a.gamma_.value == b.gamma_.value && a.gamma_.degenerate == b.gamma_.degenerate &&
           a.gamma_.log_sum == b.gamma_.log_sum && a.user_category_ == b.user_category_ &&
           a.poi_category_ == b.poi_category_ && a.poi_popularity_ == b.poi_popularity_;
  }

 private:
  PowerLawExponent gamma_;
  std::vector<std::vector<std::pair<CategoryIndex, double>>> user_category_;  // B, sorted
  std::vector<CategoryIndex> poi_category_;
  std::vector<double> poi_popularity_;  // H(cat(l), l)
};

}  // namespace ctxrec
