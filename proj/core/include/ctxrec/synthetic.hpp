#pragma once

#include <cstdint>

#include "ctxrec/types.hpp"

namespace ctxrec {

/// Knobs for the planted-structure generator used in desk-scale experiments.
struct SyntheticConfig {
  std::size_t num_users = 500;
  std::size_t num_pois = 2000;
  std::size_t num_checkins = 50000;  // approximate total

  LatLon region_center{40.0, -75.0};
  double region_extent_km = 60.0;  // side of the square POIs are spread over

  std::size_t centers_per_user = 2;
  double center_spread_km = 1.5;  // std-dev of check-ins around a center

  double temporal_strength = 0.5;  // P(next visit follows a planted transition)
  std::size_t successors_per_poi = 3;

  double explore_min = 0.3;  // per-user probability of a non-revisit step
  double explore_max = 0.9;
  double mean_gap_hours = 24.0;
  // > 0 plants a negative gap <-> exploration dependence.
  double gap_exploration_coupling = 1.0;

  std::size_t friends_per_user = 4;
  double homophily = 0.3;  // fraction of a friend's POIs (up to 5) copied per edge

  std::size_t num_categories = 20;  // 0 disables categories
  std::size_t liked_categories = 3;
  double category_strength = 0.5;  // P(redraw a geo pick outside liked categories)

  Timestamp start_time = 1'200'000'000;

  friend bool operator==(const SyntheticConfig&, const SyntheticConfig&) = default;
};

/// Deterministic in (cfg, seed). Throws ConfigError for infeasible configs.
Dataset generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed);

}  // namespace ctxrec
