#include "ctxrec/fcf.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "ctxrec/error.hpp"

namespace ctxrec {

double cosine_similarity(const FrequencyMatrix& r, UserIndex a, UserIndex b) {
  const auto ra = r.row(a);
  const auto rb = r.row(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& e : ra) na += double(e.count) * e.count;
  for (const auto& e : rb) nb += double(e.count) * e.count;
  if (na == 0.0 || nb == 0.0) return 0.0;
  auto i = ra.begin();
  auto j = rb.begin();
  while (i != ra.end() && j != rb.end()) {
    if (i->index < j->index) {
      ++i;
    } else if (j->index < i->index) {
      ++j;
    } else {
      dot += double(i->count) * j->count;
      ++i;
      ++j;
    }
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double fcf_score(const FrequencyMatrix& r, const SocialGraph& s, UserIndex u, PoiIndex l) {
  if (u >= r.num_users() || l >= r.num_pois()) throw ModelError("FCF: index out of range");
  if (u >= s.num_users()) return 0.0;
  double num = 0.0, den = 0.0;
  for (UserIndex f : s.friends(u)) {
    if (f >= r.num_users()) continue;
    const double sim = cosine_similarity(r, u, f);
    num += sim * r.count(f, l);
    den += sim;
  }
  return den > 0.0 ? num / den : 0.0;
}

FcfModel::FcfModel(std::vector<std::vector<std::pair<PoiIndex, double>>> rows, std::size_t num_pois)
    : rows_(std::move(rows)), num_pois_(num_pois) {}

FcfModel FcfModel::fit(const FrequencyMatrix& r, const SocialGraph& s) {
  std::vector<std::vector<std::pair<PoiIndex, double>>> rows(r.num_users());
  std::vector<double> acc(r.num_pois(), 0.0);
  std::vector<bool> seen(r.num_pois(), false);
  std::vector<PoiIndex> touched;
  for (UserIndex u = 0; u < r.num_users() && u < s.num_users(); ++u) {
    touched.clear();
    double den = 0.0;
    for (UserIndex f : s.friends(u)) {
      if (f >= r.num_users()) continue;
      const double sim = cosine_similarity(r, u, f);
      if (sim == 0.0) continue;
      den += sim;
      for (const auto& e : r.row(f)) {
        if (!seen[e.index]) {
          seen[e.index] = true;
          touched.push_back(e.index);
        }
        acc[e.index] += sim * e.count;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto l : touched) {
      if (den > 0.0) rows[u].emplace_back(l, acc[l] / den);
      acc[l] = 0.0;
      seen[l] = false;
    }
  }
  return FcfModel(std::move(rows), r.num_pois());
}

ContextScore FcfModel::score(UserIndex u, PoiIndex l) const {
  if (u >= rows_.size()) throw ModelError("FCF: unknown user " + std::to_string(u));
  if (l >= num_pois_) throw ModelError("FCF: unknown POI " + std::to_string(l));
  const auto& row = rows_[u];
  auto it = std::lower_bound(row.begin(), row.end(), l,
                             [](const auto& e, PoiIndex p) { return e.first < p; });
  return {(it != row.end() && it->first == l) ? it->second : 0.0, ContextTag::Fcf};
}

void FcfModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                std::span<double> out) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = score(u, candidates[i]).value;
}

nlohmann::json FcfModel::to_json() const { return {{"num_pois", num_pois_}, {"rows", rows_}}; }

FcfModel FcfModel::from_json(const nlohmann::json& j) {
  return FcfModel(j.at("rows").get<std::vector<std::vector<std::pair<PoiIndex, double>>>>(),
                  j.at("num_pois").get<std::size_t>());
}

}  // namespace ctxrec
