#include "ctxrec/mgm.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctxrec/error.hpp"
#include "ctxrec/geo.hpp"

namespace ctxrec {

MgmModel::MgmModel(std::vector<std::vector<MgmCenter>> centers, std::vector<LatLon> poi_locations)
    : centers_(std::move(centers)), poi_locations_(std::move(poi_locations)) {
  for (const auto& user : centers_) {
    for (const auto& c : user) {
      if (!(c.sigma_km > 0.0) || c.fraction < 0.0) throw ModelError("MGM: invalid center");
    }
  }
}

namespace {

struct Cluster {
  LatLon seed;
  std::vector<std::pair<double, double>> members;  // (distance to seed, count)
  double mass = 0.0;
};

// Sample std-dev of member distances, one sample per check-in.
double distance_sigma(const Cluster& c, double floor_km) {
  double n = 0.0, mean = 0.0;
  for (const auto& [d, w] : c.members) {
    n += w;
    mean += w * d;
  }
  if (n < 2.0) return floor_km;
  mean /= n;
  double ss = 0.0;
  for (const auto& [d, w] : c.members) ss += w * (d - mean) * (d - mean);
  return std::max(std::sqrt(ss / (n - 1.0)), floor_km);
}

}  // namespace

MgmModel MgmModel::fit(const FrequencyMatrix& train, std::span<const Poi> pois,
                       const MgmOptions& options) {
  if (train.num_pois() != pois.size()) throw ModelError("POI table does not match frequency matrix");
  if (!(options.min_center_fraction > 0.0 && options.min_center_fraction < 1.0)) {
    throw ModelError("MGM: frequency threshold must be in (0, 1)");
  }
  std::vector<LatLon> locations;
  for (const auto& p : pois) locations.push_back(p.location);

  std::vector<std::vector<MgmCenter>> all(train.num_users());
  for (UserIndex u = 0; u < train.num_users(); ++u) {
    std::vector<FrequencyEntry> row(train.row(u).begin(), train.row(u).end());
    if (row.empty()) continue;
    // Location breaks count ties, so the centers do not depend on POI labels.
    std::stable_sort(row.begin(), row.end(), [&](const FrequencyEntry& a, const FrequencyEntry& b) {
      if (a.count != b.count) return a.count > b.count;
      const auto& pa = locations[a.index];
      const auto& pb = locations[b.index];
      return pa.lat < pb.lat || (pa.lat == pb.lat && pa.lon < pb.lon);
    });
    double total = 0.0;
    for (const auto& e : row) total += e.count;

    std::vector<Cluster> clusters;
    for (const auto& e : row) {
      const auto at = locations[e.index];
      std::size_t best = clusters.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < clusters.size(); ++c) {
        const double d = haversine_km(at, clusters[c].seed);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best == clusters.size() || best_d > options.max_center_distance_km) {
        clusters.push_back({at, {}, 0.0});
        best = clusters.size() - 1;
        best_d = 0.0;
      }
      clusters[best].members.emplace_back(best_d, static_cast<double>(e.count));
      clusters[best].mass += e.count;
    }

    auto& centers = all[u];
    for (const auto& c : clusters) {
      const double frac = c.mass / total;
      if (frac < options.min_center_fraction) continue;
      centers.push_back({c.seed, frac, distance_sigma(c, options.min_sigma_km)});
    }
    if (centers.empty()) {
      double lat = 0.0, lon = 0.0;
      for (const auto& e : row) {
        lat += e.count * locations[e.index].lat;
        lon += e.count * locations[e.index].lon;
      }
      Cluster mean{{lat / total, lon / total}, {}, total};
      for (const auto& e : row) {
        mean.members.emplace_back(haversine_km(locations[e.index], mean.seed), double(e.count));
      }
      centers.push_back({mean.seed, 1.0, distance_sigma(mean, options.min_sigma_km)});
    }
  }
  return MgmModel(std::move(all), std::move(locations));
}

double MgmModel::mixture(std::span<const MgmCenter> centers, LatLon at) {
  double num = 0.0, den = 0.0;
  for (const auto& c : centers) {
    const double d = haversine_km(at, c.location);
    num += c.fraction * std::exp(-d * d / (2.0 * c.sigma_km * c.sigma_km));
    den += c.fraction;
  }
  return den > 0.0 ? num / den : 0.0;
}

std::span<const MgmCenter> MgmModel::centers(UserIndex u) const {
  if (u >= centers_.size() || centers_[u].empty()) {
    throw ModelError("MGM: unknown user " + std::to_string(u));
  }
  return centers_[u];
}

ContextScore MgmModel::score(UserIndex u, PoiIndex l) const {
  const auto c = centers(u);
  if (l >= poi_locations_.size()) throw ModelError("MGM: unknown POI " + std::to_string(l));
  return {mixture(c, poi_locations_[l]), ContextTag::Mgm};
}

void MgmModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                std::span<double> out) const {
  const auto c = centers(u);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = mixture(c, poi_locations_.at(candidates[i]));
  }
}

nlohmann::json MgmModel::to_json() const {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& cs : centers_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs) arr.push_back({c.location.lat, c.location.lon, c.fraction, c.sigma_km});
    users.push_back(std::move(arr));
  }
  nlohmann::json locs = nlohmann::json::array();
  for (const auto& p : poi_locations_) locs.push_back({p.lat, p.lon});
  return {{"centers", std::move(users)}, {"poi_locations", std::move(locs)}};
}

MgmModel MgmModel::from_json(const nlohmann::json& j) {
  std::vector<std::vector<MgmCenter>> centers;
  for (const auto& ju : j.at("centers")) {
    auto& cs = centers.emplace_back();
    for (const auto& c : ju) {
      cs.push_back({{c.at(0).get<double>(), c.at(1).get<double>()}, c.at(2).get<double>(),
                    c.at(3).get<double>()});
    }
  }
  std::vector<LatLon> locs;
  for (const auto& p : j.at("poi_locations")) locs.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return MgmModel(std::move(centers), std::move(locs));
}

}  // namespace ctxrec
