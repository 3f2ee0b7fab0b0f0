#include "ctxrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ctxrec/error.hpp"
#include "ctxrec/geo.hpp"
#include "ctxrec/random.hpp"

namespace ctxrec {

namespace {

constexpr std::size_t kNeighbourhood = 10;
constexpr std::size_t kMaxShared = 5;
constexpr std::size_t kFriendPool = 20;

struct Point {
  double x, y;
};

double dist2(Point a, Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

LatLon to_latlon(Point p, LatLon origin) {
  const double deg = 180.0 / (std::numbers::pi * kEarthRadiusKm);
  const double lat = origin.lat + p.y * deg;
  const double lon = origin.lon + p.x * deg / std::cos(origin.lat * std::numbers::pi / 180.0);
  return {lat, lon};
}

void validate(const SyntheticConfig& c) {
  auto fail = [](const char* what) { throw ConfigError(std::string("synthetic: ") + what); };
  if (c.num_users == 0 || c.num_pois == 0) fail("need at least one user and one POI");
  if (c.centers_per_user == 0) fail("centers_per_user must be >= 1");
  if (c.centers_per_user > c.num_pois) fail("more activity centers per user than POIs");
  if (c.num_checkins < c.num_users) fail("fewer check-ins than users");
  if (c.region_extent_km <= 0.0 || c.center_spread_km < 0.0) fail("bad spatial extent");
  if (c.temporal_strength < 0.0 || c.temporal_strength > 1.0) fail("temporal_strength outside [0,1]");
  if (c.homophily < 0.0 || c.homophily > 1.0) fail("homophily outside [0,1]");
  if (c.explore_min < 0.0 || c.explore_max > 1.0 || c.explore_min > c.explore_max) {
    fail("exploration range must satisfy 0 <= min <= max <= 1");
  }
  if (c.mean_gap_hours <= 0.0) fail("mean_gap_hours must be positive");
  if (c.liked_categories > c.num_categories) fail("liked_categories exceeds num_categories");
  if (!valid_coordinates(c.region_center)) fail("region_center out of range");
}

template <typename Weights>
std::size_t pick_weighted(const Weights& w, Rng& rng) {
  std::discrete_distribution<std::size_t> d(w.begin(), w.end());
  return d(rng);
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double half = cfg.region_extent_km / 2.0;
  std::uniform_real_distribution<double> coord(-half, half);

  Dataset d;
  d.has_categories = cfg.num_categories > 0;
  for (std::size_t c = 0; c < cfg.num_categories; ++c) {
    d.categories.intern("c" + std::to_string(c));
    d.category_names.push_back("category_" + std::to_string(c));
  }

  // POIs
  std::vector<Point> poi_xy(cfg.num_pois);
  std::uniform_int_distribution<std::size_t> any_category(
      0, cfg.num_categories > 0 ? cfg.num_categories - 1 : 0);
  for (std::size_t l = 0; l < cfg.num_pois; ++l) {
    poi_xy[l] = {coord(rng), coord(rng)};
    Poi p;
    p.location = to_latlon(poi_xy[l], cfg.region_center);
    if (d.has_categories) p.category = static_cast<CategoryIndex>(any_category(rng));
    d.poi_ids.intern("p" + std::to_string(l));
    d.pois.push_back(p);
  }

  // Planted transitions: each POI points at a few of its nearest neighbours.
  std::vector<std::vector<PoiIndex>> successors(cfg.num_pois);
  std::vector<std::vector<double>> successor_weight(cfg.num_pois);
  {
    std::vector<PoiIndex> order(cfg.num_pois);
    for (std::size_t l = 0; l < cfg.num_pois; ++l) {
      std::iota(order.begin(), order.end(), 0);
      const auto k = std::min(kNeighbourhood + 1, order.size());
      std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](PoiIndex a, PoiIndex b) {
        const double da = dist2(poi_xy[a], poi_xy[l]), db = dist2(poi_xy[b], poi_xy[l]);
        return da < db || (da == db && a < b);
      });
      std::vector<PoiIndex> near;
      for (std::size_t i = 0; i < k; ++i) {
        if (order[i] != l) near.push_back(order[i]);
      }
      std::shuffle(near.begin(), near.end(), rng);
      near.resize(std::min(near.size(), cfg.successors_per_poi));
      successors[l] = near;
      for (std::size_t i = 0; i < near.size(); ++i) successor_weight[l].push_back(1.0 / (1.0 + i));
    }
  }

  auto nearest_poi = [&](Point p) {
    PoiIndex best = 0;
    double best_d = dist2(p, poi_xy[0]);
    for (PoiIndex l = 1; l < cfg.num_pois; ++l) {
      const double dl = dist2(p, poi_xy[l]);
      if (dl < best_d) {
        best_d = dl;
        best = l;
      }
    }
    return best;
  };

  // Users
  const auto base_count = cfg.num_checkins / cfg.num_users;
  std::uniform_int_distribution<std::ptrdiff_t> jitter(-static_cast<std::ptrdiff_t>(base_count / 3),
                                                       static_cast<std::ptrdiff_t>(base_count / 3));
  std::vector<std::vector<Point>> centers(cfg.num_users);
  d.checkins.resize(cfg.num_users);

  for (std::size_t u = 0; u < cfg.num_users; ++u) {
    d.users.intern("u" + std::to_string(u));
    for (std::size_t c = 0; c < cfg.centers_per_user; ++c) {
      centers[u].push_back({coord(rng), coord(rng)});
    }
    const double explore = cfg.explore_min + (cfg.explore_max - cfg.explore_min) * unit(rng);
    const double mean_gap_h =
        cfg.mean_gap_hours * std::exp(cfg.gap_exploration_coupling * (1.0 - 2.0 * explore));
    std::exponential_distribution<double> gap(1.0 / mean_gap_h);

    std::vector<bool> liked(cfg.num_categories, false);
    if (cfg.num_categories > 0) {
      std::vector<std::size_t> cats(cfg.num_categories);
      std::iota(cats.begin(), cats.end(), 0);
      std::shuffle(cats.begin(), cats.end(), rng);
      for (std::size_t i = 0; i < cfg.liked_categories; ++i) liked[cats[i]] = true;
    }

    const auto n = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(3, static_cast<std::ptrdiff_t>(base_count) + jitter(rng)));
    std::vector<PoiIndex> visited;  // one entry per visit, for revisit sampling
    Timestamp t = cfg.start_time + static_cast<Timestamp>(unit(rng) * 86400.0 * 30.0);
    std::uniform_int_distribution<std::size_t> any_center(0, cfg.centers_per_user - 1);

    for (std::size_t i = 0; i < n; ++i) {
      PoiIndex l;
      if (!visited.empty() && unit(rng) >= explore) {
        std::uniform_int_distribution<std::size_t> any(0, visited.size() - 1);
        l = visited[any(rng)];
      } else if (!visited.empty() && unit(rng) < cfg.temporal_strength &&
                 !successors[visited.back()].empty()) {
        const auto prev = visited.back();
        l = successors[prev][pick_weighted(successor_weight[prev], rng)];
      } else {
        const Point c = centers[u][any_center(rng)];
        l = 0;
        for (int attempt = 0; attempt < 5; ++attempt) {
          const Point p{c.x + cfg.center_spread_km * normal(rng),
                        c.y + cfg.center_spread_km * normal(rng)};
          l = nearest_poi(p);
          if (!d.has_categories || liked[*d.pois[l].category] || unit(rng) >= cfg.category_strength) {
            break;
          }
        }
      }
      visited.push_back(l);
      d.checkins[u].push_back({l, t});
      t += std::max<Timestamp>(1, static_cast<Timestamp>(std::llround(gap(rng) * 3600.0)));
    }
  }

  // Friendships among users with nearby primary centers.
  d.social.resize(cfg.num_users);
  if (cfg.friends_per_user > 0 && cfg.num_users > 1) {
    std::vector<std::size_t> order(cfg.num_users);
    const auto picks = std::max<std::size_t>(1, cfg.friends_per_user / 2);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
      std::iota(order.begin(), order.end(), 0);
      const auto k = std::min(kFriendPool + 1, order.size());
      std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](std::size_t a, std::size_t b) {
        const double da = dist2(centers[a][0], centers[u][0]);
        const double db = dist2(centers[b][0], centers[u][0]);
        return da < db || (da == db && a < b);
      });
      std::vector<std::size_t> pool(order.begin(), order.begin() + k);
      pool.erase(std::remove(pool.begin(), pool.end(), u), pool.end());
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t i = 0; i < std::min(picks, pool.size()); ++i) {
        d.social.add_edge(static_cast<UserIndex>(u), static_cast<UserIndex>(pool[i]));
      }
    }
  }

  // Homophily: copy some of a friend's POIs into the user's own log.
  if (cfg.homophily > 0.0) {
    std::vector<std::vector<bool>> copied(cfg.num_users);
    for (std::size_t u = 0; u < cfg.num_users; ++u) copied[u].assign(d.checkins[u].size(), false);
    const auto shared =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.homophily * kMaxShared)));
    for (UserIndex u = 0; u < cfg.num_users; ++u) {
      for (UserIndex v : d.social.friends(u)) {
        if (v < u) continue;
        std::vector<PoiIndex> theirs;
        for (const auto& visit : d.checkins[v]) theirs.push_back(visit.poi);
        std::sort(theirs.begin(), theirs.end());
        theirs.erase(std::unique(theirs.begin(), theirs.end()), theirs.end());
        std::shuffle(theirs.begin(), theirs.end(), rng);
        theirs.resize(std::min(theirs.size(), shared));
        // Pin one of v's visits to each shared POI so later edges of v keep it.
        for (auto p : theirs) {
          for (std::size_t i = 0; i < d.checkins[v].size(); ++i) {
            if (d.checkins[v][i].poi == p) {
              copied[v][i] = true;
              break;
            }
          }
        }

        auto& log = d.checkins[u];
        std::vector<std::size_t> free_slots;
        for (std::size_t i = 0; i < log.size(); ++i) {
          if (!copied[u][i]) free_slots.push_back(i);
        }
        std::shuffle(free_slots.begin(), free_slots.end(), rng);
        for (std::size_t i = 0; i < theirs.size(); ++i) {
          if (i < free_slots.size()) {
            log[free_slots[i]].poi = theirs[i];
            copied[u][free_slots[i]] = true;
          } else {
            log.push_back({theirs[i], log.back().time + 3600});
            copied[u].push_back(true);
          }
        }
      }
    }
  }
  return d;
}

}  // namespace ctxrec
