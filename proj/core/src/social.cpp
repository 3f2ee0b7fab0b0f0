#include "ctxrec/social.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

#include "ctxrec/error.hpp"

namespace ctxrec {

SocialFrequency social_frequencies(const FrequencyMatrix& r, const SocialGraph& s) {
  SocialFrequency x(r.num_users());
  std::vector<double> acc(r.num_pois(), 0.0);
  std::vector<PoiIndex> touched;
  for (UserIndex u = 0; u < r.num_users(); ++u) {
    if (u >= s.num_users()) continue;
    touched.clear();
    for (UserIndex f : s.friends(u)) {
      if (f >= r.num_users()) continue;
      for (const auto& e : r.row(f)) {
        if (acc[e.index] == 0.0) touched.push_back(e.index);
        acc[e.index] += e.count;
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& row = x[u];
    row.reserve(touched.size());
    for (auto l : touched) {
      row.emplace_back(l, acc[l]);
      acc[l] = 0.0;
    }
  }
  return x;
}

namespace {

double log_sum(const SocialFrequency& x) {
  double sum = 0.0;
  for (const auto& row : x) {
    for (const auto& [l, f] : row) sum += std::log1p(f);
  }
  return sum;
}

}  // namespace

PowerLawExponent estimate_beta(const FrequencyMatrix& r, const SocialGraph& s) {
  if (r.num_users() == 0 || r.num_pois() == 0) throw ModelError("beta: empty frequency matrix");
  const double pairs = static_cast<double>(r.num_users()) * static_cast<double>(r.num_pois());
  return power_law_exponent(log_sum(social_frequencies(r, s)), pairs);
}

SocialPowerLawModel::SocialPowerLawModel(PowerLawExponent beta, SocialFrequency x,
                                         std::size_t num_pois)
    : beta_(beta), x_(std::move(x)), num_pois_(num_pois) {
  if (!beta_.degenerate && !(beta_.value > 1.0)) throw ModelError("beta must exceed 1");
}

SocialPowerLawModel SocialPowerLawModel::fit(const FrequencyMatrix& r, const SocialGraph& s) {
  if (r.num_users() == 0 || r.num_pois() == 0) throw ModelError("beta: empty frequency matrix");
  auto x = social_frequencies(r, s);
  const double pairs = static_cast<double>(r.num_users()) * static_cast<double>(r.num_pois());
  const auto beta = power_law_exponent(log_sum(x), pairs);
  return SocialPowerLawModel(beta, std::move(x), r.num_pois());
}

double SocialPowerLawModel::social_frequency(UserIndex u, PoiIndex l) const {
  if (u >= x_.size()) throw ModelError("social: unknown user " + std::to_string(u));
  if (l >= num_pois_) throw ModelError("social: unknown POI " + std::to_string(l));
  const auto& row = x_[u];
  auto it = std::lower_bound(row.begin(), row.end(), l,
                             [](const auto& e, PoiIndex p) { return e.first < p; });
  return (it != row.end() && it->first == l) ? it->second : 0.0;
}

ContextScore SocialPowerLawModel::score(UserIndex u, PoiIndex l) const {
  const double x = social_frequency(u, l);
  if (beta_.degenerate) return {0.0, ContextTag::Social};
  return {power_law_cdf(x, beta_.value), ContextTag::Social};
}

void SocialPowerLawModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                           std::span<double> out) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = score(u, candidates[i]).value;
}

nlohmann::json SocialPowerLawModel::to_json() const {
  return {{"beta", beta_.value}, {"degenerate", beta_.degenerate}, {"log_sum", beta_.log_sum},
          {"num_pois", num_pois_}, {"x", x_}};
}

SocialPowerLawModel SocialPowerLawModel::from_json(const nlohmann::json& j) {
  PowerLawExponent beta{j.at("beta").get<double>(), j.at("degenerate").get<bool>(),
                        j.at("log_sum").get<double>()};
  return SocialPowerLawModel(beta, j.at("x").get<SocialFrequency>(),
                             j.at("num_pois").get<std::size_t>());
}

}  // namespace ctxrec
