#include "ctxrec/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ctxrec/error.hpp"
#include "ctxrec/geo.hpp"

namespace ctxrec {

std::string_view to_string(Aspect a) {
  switch (a) {
    case Aspect::Geo: return "geo";
    case Aspect::Temporal: return "temporal";
    case Aspect::Exploration: return "exploration";
  }
  return "?";
}

std::string_view to_string(AspectStatistic s) { return s == AspectStatistic::Mean ? "mean" : "median"; }

AspectStatistic parse_aspect_statistic(std::string_view s) {
  if (s == "mean") return AspectStatistic::Mean;
  if (s == "median") return AspectStatistic::Median;
  throw ConfigError("unknown aspect statistic '" + std::string(s) + "'");
}

std::optional<double> BehaviorProfile::value(Aspect a) const {
  switch (a) {
    case Aspect::Geo: return distance_km;
    case Aspect::Temporal: return gap_hours;
    case Aspect::Exploration: return exploration_factor;
  }
  return std::nullopt;
}

double exploration_factor(std::span<const Visit> visits) {
  if (visits.empty()) throw DataError("exploration factor of a user without check-ins");
  std::vector<PoiIndex> pois;
  pois.reserve(visits.size());
  for (const auto& v : visits) pois.push_back(v.poi);
  std::sort(pois.begin(), pois.end());
  const auto unique = static_cast<std::size_t>(std::unique(pois.begin(), pois.end()) - pois.begin());
  return static_cast<double>(unique) / static_cast<double>(visits.size());
}

namespace {

double summarise(std::vector<double>& xs, AspectStatistic stat) {
  if (stat == AspectStatistic::Mean) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  }
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

ConsecutiveBehavior consecutive_behavior(std::span<const Visit> visits, std::span<const Poi> pois,
                                         AspectStatistic stat) {
  if (visits.size() < 2) throw DataError("consecutive behaviour needs at least two check-ins");
  std::vector<double> dist, gap;
  dist.reserve(visits.size() - 1);
  gap.reserve(visits.size() - 1);
  for (std::size_t i = 1; i < visits.size(); ++i) {
    const auto& a = visits[i - 1];
    const auto& b = visits[i];
    if (a.poi >= pois.size() || b.poi >= pois.size()) throw DataError("check-in with unknown POI");
    dist.push_back(haversine_km(pois[a.poi].location, pois[b.poi].location));
    gap.push_back(static_cast<double>(b.time - a.time) / 3600.0);
  }
  return {summarise(dist, stat), summarise(gap, stat)};
}

std::vector<BehaviorProfile> behavior_profiles(const Dataset& train, AspectStatistic stat) {
  std::vector<BehaviorProfile> out;
  for (UserIndex u = 0; u < train.num_users(); ++u) {
    const auto& visits = train.checkins[u];
    if (visits.empty()) continue;
    BehaviorProfile p;
    p.user = u;
    p.checkins = visits.size();
    p.exploration_factor = exploration_factor(visits);
    if (visits.size() >= 2) {
      const auto c = consecutive_behavior(visits, train.pois, stat);
      p.distance_km = c.distance_km;
      p.gap_hours = c.gap_hours;
    }
    out.push_back(p);
  }
  return out;
}

std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson_r: vectors differ in length");
  if (x.size() < 2) throw Error("pearson_r: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("percentile of an empty sample");
  if (q < 0.0 || q > 1.0) throw Error("percentile level outside [0, 1]");
  const auto n = sorted.size();
  const double h = q * static_cast<double>(n);
  if (h < 1.0) return sorted.front();
  if (h >= static_cast<double>(n)) return sorted.back();
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  const double a = sorted[lo - 1];
  return frac == 0.0 ? a : a + frac * (sorted[lo] - a);
}

BucketedReport bucketize_and_aggregate(std::span<const BehaviorProfile> profiles, Aspect aspect,
                                       std::span<const UserIndex> users,
                                       const std::vector<std::string>& models,
                                       const std::vector<std::vector<double>>& values) {
  if (values.size() != models.size()) throw Error("bucketize: one value vector per model required");
  for (const auto& v : values) {
    if (v.size() != users.size()) throw Error("bucketize: value vector length differs from users");
  }
  std::unordered_map<UserIndex, const BehaviorProfile*> by_user;
  for (const auto& p : profiles) by_user.emplace(p.user, &p);

  std::vector<std::size_t> rows;  // positions in `users` with a usable aspect value
  std::vector<double> aspect_values;
  for (std::size_t i = 0; i < users.size(); ++i) {
    auto it = by_user.find(users[i]);
    if (it == by_user.end()) continue;
    if (auto v = it->second->value(aspect)) {
      rows.push_back(i);
      aspect_values.push_back(*v);
    }
  }
  if (rows.size() < kNumBuckets) {
    throw Error("bucketize: " + std::string(to_string(aspect)) + " needs at least 5 users, got " +
                std::to_string(rows.size()));
  }

  BucketedReport rep;
  rep.aspect = aspect;
  rep.models = models;
  rep.users = rows.size();
  std::vector<double> sorted = aspect_values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t b = 0; b < kNumBuckets; ++b) {
    rep.boundaries[b] = percentile(sorted, static_cast<double>(b + 1) / kNumBuckets);
  }

  std::vector<std::size_t> bucket(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t b = 0;
    while (b + 1 < kNumBuckets && aspect_values[r] > rep.boundaries[b]) ++b;
    bucket[r] = b;
    ++rep.sizes[b];
  }
  rep.degenerate =
      std::count_if(rep.sizes.begin(), rep.sizes.end(), [](auto s) { return s > 0; }) < 2;

  rep.means.assign(models.size(), {});
  for (std::size_t m = 0; m < models.size(); ++m) {
    std::array<double, kNumBuckets> sums{};
    for (std::size_t r = 0; r < rows.size(); ++r) sums[bucket[r]] += values[m][rows[r]];
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      rep.means[m][b] = rep.sizes[b] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                          : sums[b] / static_cast<double>(rep.sizes[b]);
    }
  }
  return rep;
}

}  // namespace ctxrec
