#pragma once

#include "ctxrec/types.hpp"

namespace ctxrec {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in kilometres between two lat/lon points in degrees.
double haversine_km(LatLon a, LatLon b);

struct PlanarKm {
  double x = 0.0;  // east
  double y = 0.0;  // north
};

/// Equirectangular projection to kilometres around `origin`. Only accurate
/// locally (tens of km), which is all the KDE needs.
PlanarKm project_km(LatLon p, LatLon origin);

bool valid_coordinates(LatLon p);

}  // namespace ctxrec
