#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctxrec {

using UserIndex = std::uint32_t;
using PoiIndex = std::uint32_t;
using CategoryIndex = std::uint32_t;
using Timestamp = std::int64_t;  // seconds since epoch

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// One check-in of a user, stored in that user's chronological log.
struct Visit {
  PoiIndex poi = 0;
  Timestamp time = 0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

struct Poi {
  LatLon location;
  std::optional<CategoryIndex> category;
};

/// Opaque string identifiers mapped to dense indices in first-seen order.
class Registry {
 public:
  std::uint32_t intern(std::string_view id);
  std::optional<std::uint32_t> find(std::string_view id) const;
  const std::string& id(std::uint32_t index) const { return ids_.at(index); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Undirected friendship graph without self-loops.
class SocialGraph {
 public:
  SocialGraph() = default;
  explicit SocialGraph(std::size_t num_users) : adjacency_(num_users) {}

  void resize(std::size_t num_users) { adjacency_.resize(num_users); }
  /// Returns false for self-loops and edges already present.
  bool add_edge(UserIndex a, UserIndex b);
  bool connected(UserIndex a, UserIndex b) const;
  std::span<const UserIndex> friends(UserIndex u) const { return adjacency_.at(u); }
  std::size_t num_users() const { return adjacency_.size(); }
  std::size_t num_edges() const;

 private:
  std::vector<std::vector<UserIndex>> adjacency_;  // each row sorted
};

/// Per-user chronological check-in lists.
using CheckinLog = std::vector<std::vector<Visit>>;

struct Dataset {
  Registry users;
  Registry poi_ids;
  std::vector<Poi> pois;  // parallel to poi_ids
  bool has_categories = false;
  Registry categories;
  std::vector<std::string> category_names;  // parallel to categories
  SocialGraph social;
  CheckinLog checkins;  // indexed by UserIndex

  std::size_t num_users() const { return users.size(); }
  std::size_t num_pois() const { return pois.size(); }
  std::size_t num_checkins() const;
  /// Same registries and social graph, no check-ins.
  Dataset empty_like() const;
};

}  // namespace ctxrec
