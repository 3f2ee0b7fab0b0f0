#include "ctxrec/categorical.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "ctxrec/error.hpp"

namespace ctxrec {

CategoricalModel::CategoricalModel(
    PowerLawExponent gamma, std::vector<std::vector<std::pair<CategoryIndex, double>>> user_category,
    std::vector<CategoryIndex> poi_category, std::vector<double> poi_popularity)
    : gamma_(gamma),
      user_category_(std::move(user_category)),
      poi_category_(std::move(poi_category)),
      poi_popularity_(std::move(poi_popularity)) {
  if (!gamma_.degenerate && !(gamma_.value > 1.0)) throw ModelError("gamma must exceed 1");
  if (poi_category_.size() != poi_popularity_.size()) throw ModelError("categorical: shape mismatch");
}

CategoricalModel CategoricalModel::fit(const FrequencyMatrix& r, std::span<const Poi> pois,
                                       bool has_categories) {
  if (!has_categories) throw ModelError("categorical context unavailable");
  if (pois.size() != r.num_pois()) throw ModelError("POI table does not match frequency matrix");
  if (r.num_users() == 0 || r.num_pois() == 0) throw ModelError("gamma: empty frequency matrix");

  std::vector<CategoryIndex> poi_category(pois.size());
  CategoryIndex num_categories = 0;
  for (PoiIndex l = 0; l < pois.size(); ++l) {
    if (!pois[l].category) throw ModelError("categorical context unavailable");
    poi_category[l] = *pois[l].category;
    num_categories = std::max(num_categories, poi_category[l] + 1);
  }

  std::vector<double> popularity(pois.size(), 0.0);
  for (PoiIndex l = 0; l < pois.size(); ++l) {
    for (const auto& e : r.column(l)) popularity[l] += e.count;
  }
  std::vector<std::vector<PoiIndex>> members(num_categories);
  for (PoiIndex l = 0; l < pois.size(); ++l) members[poi_category[l]].push_back(l);

  std::vector<std::vector<std::pair<CategoryIndex, double>>> b(r.num_users());
  std::vector<double> acc(num_categories, 0.0);
  double log_sum = 0.0;
  for (UserIndex u = 0; u < r.num_users(); ++u) {
    for (const auto& e : r.row(u)) acc[poi_category[e.index]] += e.count;
    for (CategoryIndex c = 0; c < num_categories; ++c) {
      if (acc[c] == 0.0) continue;
      b[u].emplace_back(c, acc[c]);
      for (auto l : members[c]) log_sum += std::log1p(acc[c] * popularity[l]);
      acc[c] = 0.0;
    }
  }
  const double pairs = static_cast<double>(r.num_users()) * static_cast<double>(r.num_pois());
  return CategoricalModel(power_law_exponent(log_sum, pairs), std::move(b), std::move(poi_category),
                          std::move(popularity));
}

double CategoricalModel::popularity(UserIndex u, PoiIndex l) const {
  if (u >= user_category_.size()) throw ModelError("categorical: unknown user " + std::to_string(u));
  if (l >= poi_category_.size()) throw ModelError("categorical: unknown POI " + std::to_string(l));
  const auto& row = user_category_[u];
  const auto c = poi_category_[l];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, CategoryIndex k) { return e.first < k; });
  if (it == row.end() || it->first != c) return 0.0;
  return it->second * poi_popularity_[l];
}

ContextScore CategoricalModel::score(UserIndex u, PoiIndex l) const {
  const double g = popularity(u, l);
  if (gamma_.degenerate) return {0.0, ContextTag::Categorical};
  return {power_law_cdf(g, gamma_.value), ContextTag::Categorical};
}

void CategoricalModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                        std::span<double> out) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = score(u, candidates[i]).value;
}

nlohmann::json CategoricalModel::to_json() const {
  return {{"gamma", gamma_.value},           {"degenerate", gamma_.degenerate},
          {"log_sum", gamma_.log_sum},       {"user_category", user_category_},
          {"poi_category", poi_category_},   {"poi_popularity", poi_popularity_}};
}

CategoricalModel CategoricalModel::from_json(const nlohmann::json& j) {
  PowerLawExponent gamma{j.at("gamma").get<double>(), j.at("degenerate").get<bool>(),
                         j.at("log_sum").get<double>()};
  return CategoricalModel(
      gamma, j.at("user_category").get<std::vector<std::vector<std::pair<CategoryIndex, double>>>>(),
      j.at("poi_category").get<std::vector<CategoryIndex>>(),
      j.at("poi_popularity").get<std::vector<double>>());
}

}  // namespace ctxrec
