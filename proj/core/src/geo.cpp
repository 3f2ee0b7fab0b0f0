#include "ctxrec/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctxrec {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine_km(LatLon a, LatLon b) {
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat +
             std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

PlanarKm project_km(LatLon p, LatLon origin) {
  const double k = kEarthRadiusKm * kDegToRad;
  return {k * (p.lon - origin.lon) * std::cos(origin.lat * kDegToRad),
          k * (p.lat - origin.lat)};
}

bool valid_coordinates(LatLon p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

}  // namespace ctxrec
