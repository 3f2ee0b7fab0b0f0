#pragma once

#include <nlohmann/json_fwd.hpp>

#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

struct MgmOptions {
  double max_center_distance_km = 15.0;
  double min_center_fraction = 0.02;
  double min_sigma_km = 0.5;

  friend bool operator==(const MgmOptions&, const MgmOptions&) = default;
};

struct MgmCenter {
  LatLon location;
  double fraction = 0.0;  // share of the user's check-ins
  double sigma_km = 0.0;

  friend bool operator==(const MgmCenter&, const MgmCenter&) = default;
};

/// Multi-center Gaussian model of a user's activity areas.
///
/// Centers are discovered greedily: the user's POIs are scanned by
/// descending visit count (ties by latitude, then longitude) and each joins
/// the nearest existing center within `max_center_distance_km`, or seeds a
/// new one at its own location. Centers holding less than
/// `min_center_fraction` of the check-ins are dropped; if none survive, a
/// single center at the user's mean location takes over.
class MgmModel final : public Scorer {
 public:
  MgmModel() = default;
  MgmModel(std::vector<std::vector<MgmCenter>> centers, std::vector<LatLon> poi_locations);

  static MgmModel fit(const FrequencyMatrix& train, std::span<const Poi> pois,
                      const MgmOptions& options = {});

  /// sum_i f_i exp(-d_i^2 / (2 sigma_i^2)) / sum_i f_i, in [0, 1].
  static double mixture(std::span<const MgmCenter> centers, LatLon at);

  std::span<const MgmCenter> centers(UserIndex u) const;
  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  nlohmann::json to_json() const;
  static MgmModel from_json(const nlohmann::json& j);
  friend bool operator==(const MgmModel& a, const MgmModel& b) {
    return a.centers_ == b.centers_ && a.poi_locations_ == b.poi_locations_;
  }

 private:
  std::vector<std::vector<MgmCenter>> centers_;
  std::vector<LatLon> poi_locations_;
};

}  // namespace ctxrec
