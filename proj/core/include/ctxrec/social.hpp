#pragma once

#include <nlohmann/json_fwd.hpp>

#include <utility>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/power_law.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

/// Sparse per-user rows of friend check-in frequency x(u, l) = sum over
/// friends f of R(f, l), sorted by POI.
using SocialFrequency = std::vector<std::vector<std::pair<PoiIndex, double>>>;

SocialFrequency social_frequencies(const FrequencyMatrix& r, const SocialGraph& s);

/// beta = 1 + |U||L| / sum ln(1 + x(u, l)).
PowerLawExponent estimate_beta(const FrequencyMatrix& r, const SocialGraph& s);

/// Friends' check-ins as a cumulative power law.
class SocialPowerLawModel final : public Scorer {
 public:
  SocialPowerLawModel() = default;
  SocialPowerLawModel(PowerLawExponent beta, SocialFrequency x, std::size_t num_pois);

  static SocialPowerLawModel fit(const FrequencyMatrix& r, const SocialGraph& s);

  double beta() const { return beta_.value; }
  bool degenerate() const { return beta_.degenerate; }
  double social_frequency(UserIndex u, PoiIndex l) const;

  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  nlohmann::json to_json() const;
  static SocialPowerLawModel from_json(const nlohmann::json& j);
  friend bool operator==(const SocialPowerLawModel& a, const SocialPowerLawModel& b) {
    return a.beta_.value == b.beta_.value && a.beta_.degenerate == b.beta_.degenerate &&
           a.beta_.log_sum == b.beta_.log_sum && a.x_ == b.x_ && a.num_pois_ == b.num_pois_;
  }

 private:
  PowerLawExponent beta_;
  SocialFrequency x_;
  std::size_t num_pois_ = 0;
};

}  // namespace ctxrec
