#pragma once

#include <nlohmann/json_fwd.hpp>

#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/geo.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

struct KdeOptions {
  double min_bandwidth_km = 0.01;
  /// One bandwidth shared by every user (pooled residuals) instead of a
  /// per-user Silverman bandwidth.
  bool universal_bandwidth = false;

  friend bool operator==(const KdeOptions&, const KdeOptions&) = default;
};

struct KdeSupportPoint {
  PlanarKm position;
  double weight = 0.0;  // check-in count at that POI
};

struct KdeUserState {
  LatLon origin;  // count-weighted mean check-in location
  std::vector<KdeSupportPoint> support;
  double h_x = 0.0;
  double h_y = 0.0;
  double total = 0.0;  // u_N, sum of weights
  bool floored = false;  // a bandwidth hit the floor
};

/// Silverman's rule of thumb, 1.06 * sigma * n^(-1/5), floored.
double silverman_bandwidth(double sigma, double n, double floor_km);

/// Per-user 2-D Gaussian kernel density over check-in locations.
class GeoKdeModel final : public Scorer {
 public:
  GeoKdeModel() = default;
  GeoKdeModel(std::vector<KdeUserState> users, std::vector<LatLon> poi_locations);

  static GeoKdeModel fit(const FrequencyMatrix& train, std::span<const Poi> pois,
                         const KdeOptions& options = {});

  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  const KdeUserState& user(UserIndex u) const;
  std::size_t num_users() const { return users_.size(); }

  nlohmann::json to_json() const;
  static GeoKdeModel from_json(const nlohmann::json& j);

  friend bool operator==(const GeoKdeModel&, const GeoKdeModel&);

 private:
  double density(const KdeUserState& s, LatLon at) const;

  std::vector<KdeUserState> users_;
  std::vector<LatLon> poi_locations_;
};

}  // namespace ctxrec
