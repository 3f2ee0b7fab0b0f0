#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

enum class Aspect { Geo, Temporal, Exploration };
/// How consecutive-pair distances and gaps are summarised per user.
enum class AspectStatistic { Mean, Median };

std::string_view to_string(Aspect a);
std::string_view to_string(AspectStatistic s);
AspectStatistic parse_aspect_statistic(std::string_view s);

struct BehaviorProfile {
  UserIndex user = 0;
  std::size_t checkins = 0;
  double exploration_factor = 1.0;
  std::optional<double> distance_km;  // set for users with >= 2 check-ins
  std::optional<double> gap_hours;

  std::optional<double> value(Aspect a) const;
};

/// Unique POIs over check-ins. Throws DataError on an empty log.
double exploration_factor(std::span<const Visit> visits);

struct ConsecutiveBehavior {
  double distance_km = 0.0;
  double gap_hours = 0.0;
};

/// Summaries of haversine distance and time gap over consecutive pairs of a
/// chronological log. Throws DataError with fewer than two check-ins.
ConsecutiveBehavior consecutive_behavior(std::span<const Visit> visits, std::span<const Poi> pois,
                                         AspectStatistic stat = AspectStatistic::Mean);

/// One profile per user with at least one check-in.
std::vector<BehaviorProfile> behavior_profiles(const Dataset& train,
                                               AspectStatistic stat = AspectStatistic::Mean);

/// Pearson product-moment correlation; nullopt when either side is constant.
/// Throws on unequal lengths or fewer than two points.
std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation percentile of sorted data at position q * n
/// (q in [0, 1]); the type-4 definition.
double percentile(std::span<const double> sorted, double q);

inline constexpr std::size_t kNumBuckets = 5;

struct BucketedReport {
  Aspect aspect = Aspect::Geo;
  std::array<double, kNumBuckets> boundaries{};  // 20/40/60/80/100th percentiles
  std::array<std::size_t, kNumBuckets> sizes{};
  std::vector<std::string> models;
  std::vector<std::array<double, kNumBuckets>> means;  // [model][bucket]; NaN if empty
  std::size_t users = 0;
  bool degenerate = false;  // fewer than two non-empty buckets
};

/// Quintile segmentation of the evaluated users on one aspect. `values[m][i]`
/// is model m's metric for `users[i]`; users without a defined aspect value
/// are skipped. A user goes to the first bucket whose boundary is >= its
/// value. Throws Error with fewer than five usable users.
BucketedReport bucketize_and_aggregate(std::span<const BehaviorProfile> profiles, Aspect aspect,
                                       std::span<const UserIndex> users,
                                       const std::vector<std::string>& models,
                                       const std::vector<std::vector<double>>& values);

}  // namespace ctxrec
