#include "ctxrec/geo_kde.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

#include "ctxrec/error.hpp"

namespace ctxrec {

std::string_view to_string(ContextTag tag) {
  switch (tag) {
    case ContextTag::Geo: return "G";
    case ContextTag::Temporal: return "T";
    case ContextTag::Social: return "S";
    case ContextTag::Categorical: return "C";
    case ContextTag::Fcf: return "FCF";
    case ContextTag::Mgm: return "MGM";
  }
  return "?";
}

double silverman_bandwidth(double sigma, double n, double floor_km) {
  if (n <= 0.0 || !(sigma > 0.0)) return floor_km;
  return std::max(1.06 * sigma * std::pow(n, -0.2), floor_km);
}

GeoKdeModel::GeoKdeModel(std::vector<KdeUserState> users, std::vector<LatLon> poi_locations)
    : users_(std::move(users)), poi_locations_(std::move(poi_locations)) {
  for (const auto& s : users_) {
    if (!s.support.empty() && !(s.h_x > 0.0 && s.h_y > 0.0)) {
      throw ModelError("KDE bandwidths must be positive");
    }
  }
}

namespace {

// Counts act as reliability weights, so scaling all of a user's counts by a
// constant leaves both the variance and the effective sample size alone.
struct Moments {
  double sx = 0.0, sy = 0.0;  // weighted sums of squared residuals
  double w = 0.0;             // sum of weights
  double w2 = 0.0;            // sum of squared weights

  double dof() const { return w > 0.0 ? w - w2 / w : 0.0; }
  double effective_n() const { return w2 > 0.0 ? w * w / w2 : 0.0; }
};

Moments residual_moments(const KdeUserState& s) {
  Moments m;
  double mx = 0.0, my = 0.0;
  for (const auto& p : s.support) {
    mx += p.weight * p.position.x;
    my += p.weight * p.position.y;
    m.w += p.weight;
    m.w2 += p.weight * p.weight;
  }
  mx /= m.w;
  my /= m.w;
  for (const auto& p : s.support) {
    m.sx += p.weight * (p.position.x - mx) * (p.position.x - mx);
    m.sy += p.weight * (p.position.y - my) * (p.position.y - my);
  }
  return m;
}

}  // namespace

GeoKdeModel GeoKdeModel::fit(const FrequencyMatrix& train, std::span<const Poi> pois,
                             const KdeOptions& options) {
  if (train.num_pois() != pois.size()) throw ModelError("POI table does not match frequency matrix");
  if (!(options.min_bandwidth_km > 0.0)) throw ModelError("KDE bandwidth floor must be positive");

  std::vector<LatLon> locations;
  locations.reserve(pois.size());
  for (const auto& p : pois) locations.push_back(p.location);

  std::vector<KdeUserState> users(train.num_users());
  std::vector<Moments> moments(train.num_users());
  for (UserIndex u = 0; u < train.num_users(); ++u) {
    auto& s = users[u];
    const auto row = train.row(u);
    if (row.empty()) continue;
    double lat = 0.0, lon = 0.0;
    for (const auto& e : row) {
      lat += e.count * locations[e.index].lat;
      lon += e.count * locations[e.index].lon;
      s.total += e.count;
    }
    s.origin = {lat / s.total, lon / s.total};
    for (const auto& e : row) {
      s.support.push_back({project_km(locations[e.index], s.origin), static_cast<double>(e.count)});
    }
    moments[u] = residual_moments(s);
  }

  const double floor_km = options.min_bandwidth_km;
  std::size_t floored = 0;
  if (options.universal_bandwidth) {
    // Residuals pooled over users, each user scaled to unit total weight.
    double sx = 0.0, sy = 0.0, dof = 0.0, n = 0.0;
    std::size_t active = 0;
    for (UserIndex u = 0; u < users.size(); ++u) {
      if (users[u].support.empty()) continue;
      const auto& m = moments[u];
      sx += m.sx / m.w;
      sy += m.sy / m.w;
      dof += m.dof() / m.w;
      n += m.effective_n();
      ++active;
    }
    const double mean_n = active > 0 ? n / static_cast<double>(active) : 0.0;
    const double sig_x = dof > 0.0 ? std::sqrt(sx / dof) : 0.0;
    const double sig_y = dof > 0.0 ? std::sqrt(sy / dof) : 0.0;
    const double hx = silverman_bandwidth(sig_x, mean_n, floor_km);
    const double hy = silverman_bandwidth(sig_y, mean_n, floor_km);
    for (auto& s : users) {
      s.h_x = hx;
      s.h_y = hy;
      s.floored = hx == floor_km || hy == floor_km;
    }
  } else {
    for (UserIndex u = 0; u < users.size(); ++u) {
      auto& s = users[u];
      if (s.support.empty()) continue;
      const auto& m = moments[u];
      const double dof = m.dof();
      const double sig_x = dof > 0.0 ? std::sqrt(m.sx / dof) : 0.0;
      const double sig_y = dof > 0.0 ? std::sqrt(m.sy / dof) : 0.0;
      s.h_x = silverman_bandwidth(sig_x, m.effective_n(), floor_km);
      s.h_y = silverman_bandwidth(sig_y, m.effective_n(), floor_km);
      s.floored = s.h_x == floor_km || s.h_y == floor_km;
      floored += s.floored;
    }
  }
  if (floored > 0) spdlog::debug("KDE: {} users hit the bandwidth floor", floored);
  return GeoKdeModel(std::move(users), std::move(locations));
}

const KdeUserState& GeoKdeModel::user(UserIndex u) const {
  if (u >= users_.size() || users_[u].support.empty()) {
    throw ModelError("KDE: unknown user " + std::to_string(u));
  }
  return users_[u];
}

double GeoKdeModel::density(const KdeUserState& s, LatLon at) const {
  const auto q = project_km(at, s.origin);
  const double norm = 1.0 / (2.0 * std::numbers::pi * s.h_x * s.h_y);
  double sum = 0.0;
  for (const auto& p : s.support) {
    const double zx = (q.x - p.position.x) / s.h_x;
    const double zy = (q.y - p.position.y) / s.h_y;
    sum += p.weight * std::exp(-0.5 * (zx * zx + zy * zy));
  }
  return norm * sum / s.total;
}

ContextScore GeoKdeModel::score(UserIndex u, PoiIndex l) const {
  const auto& s = user(u);
  if (l >= poi_locations_.size()) throw ModelError("KDE: unknown POI " + std::to_string(l));
  return {density(s, poi_locations_[l]), ContextTag::Geo};
}

void GeoKdeModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                   std::span<double> out) const {
  const auto& s = user(u);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] >= poi_locations_.size()) throw ModelError("KDE: unknown POI");
    out[i] = density(s, poi_locations_[candidates[i]]);
  }
}

bool operator==(const GeoKdeModel& a, const GeoKdeModel& b) {
  if (a.users_.size() != b.users_.size() || a.poi_locations_ != b.poi_locations_) return false;
  for (std::size_t u = 0; u < a.users_.size(); ++u) {
    const auto& x = a.users_[u];
    const auto& y = b.users_[u];
    if (x.origin != y.origin || x.h_x != y.h_x || x.h_y != y.h_y || x.total != y.total ||
        x.floored != y.floored || x.support.size() != y.support.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.support.size(); ++i) {
      if (x.support[i].position.x != y.support[i].position.x ||
          x.support[i].position.y != y.support[i].position.y ||
          x.support[i].weight != y.support[i].weight) {
        return false;
      }
    }
  }
  return true;
}

nlohmann::json GeoKdeModel::to_json() const {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& s : users_) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.support) pts.push_back({p.position.x, p.position.y, p.weight});
    users.push_back({{"origin", {s.origin.lat, s.origin.lon}},
                     {"h", {s.h_x, s.h_y}},
                     {"total", s.total},
                     {"floored", s.floored},
                     {"support", std::move(pts)}});
  }
  nlohmann::json locs = nlohmann::json::array();
  for (const auto& p : poi_locations_) locs.push_back({p.lat, p.lon});
  return {{"users", std::move(users)}, {"poi_locations", std::move(locs)}};
}

GeoKdeModel GeoKdeModel::from_json(const nlohmann::json& j) {
  std::vector<KdeUserState> users;
  for (const auto& ju : j.at("users")) {
    KdeUserState s;
    s.origin = {ju.at("origin").at(0).get<double>(), ju.at("origin").at(1).get<double>()};
    s.h_x = ju.at("h").at(0).get<double>();
    s.h_y = ju.at("h").at(1).get<double>();
    s.total = ju.at("total").get<double>();
    s.floored = ju.at("floored").get<bool>();
    for (const auto& p : ju.at("support")) {
      s.support.push_back({{p.at(0).get<double>(), p.at(1).get<double>()}, p.at(2).get<double>()});
    }
    users.push_back(std::move(s));
  }
  std::vector<LatLon> locs;
  for (const auto& p : j.at("poi_locations")) locs.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return GeoKdeModel(std::move(users), std::move(locs));
}

}  // namespace ctxrec
