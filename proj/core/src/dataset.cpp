#include "ctxrec/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ctxrec/error.hpp"
#include "ctxrec/geo.hpp"
#include "ctxrec/random.hpp"

namespace ctxrec {

// ---------------------------------------------------------------------------
// Registry / SocialGraph / Dataset

std::uint32_t Registry::intern(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  const auto idx = static_cast<std::uint32_t>(ids_.size());
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), idx);
  return idx;
}

std::optional<std::uint32_t> Registry::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SocialGraph::add_edge(UserIndex a, UserIndex b) {
  if (a == b) return false;
  const auto hi = std::max(a, b);
  if (hi >= adjacency_.size()) adjacency_.resize(hi + 1);
  auto& ra = adjacency_[a];
  auto pos = std::lower_bound(ra.begin(), ra.end(), b);
  if (pos != ra.end() && *pos == b) return false;
  ra.insert(pos, b);
  auto& rb = adjacency_[b];
  rb.insert(std::lower_bound(rb.begin(), rb.end(), a), a);
  return true;
}

bool SocialGraph::connected(UserIndex a, UserIndex b) const {
  if (a >= adjacency_.size()) return false;
  const auto& ra = adjacency_[a];
  return std::binary_search(ra.begin(), ra.end(), b);
}

std::size_t SocialGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& r : adjacency_) twice += r.size();
  return twice / 2;
}

std::size_t Dataset::num_checkins() const {
  std::size_t n = 0;
  for (const auto& visits : checkins) n += visits.size();
  return n;
}

Dataset Dataset::empty_like() const {
  Dataset out;
  out.users = users;
  out.poi_ids = poi_ids;
  out.pois = pois;
  out.has_categories = has_categories;
  out.categories = categories;
  out.category_names = category_names;
  out.social = social;
  out.checkins.assign(users.size(), {});
  return out;
}

// ---------------------------------------------------------------------------
// TSV reading

namespace {

struct LineReader {
  explicit LineReader(const std::filesystem::path& p) : path(p), in(p) {
    if (!in) throw DataError("cannot open " + p.string());
  }

  // Next non-blank, non-comment line split on tabs.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      fields.clear();
      std::string_view rest(line);
      while (true) {
        const auto tab = rest.find('\t');
        fields.push_back(rest.substr(0, tab));
        if (tab == std::string_view::npos) break;
        rest.remove_prefix(tab + 1);
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path.filename().string() + ":" + std::to_string(number) + ": " + what);
  }

  std::filesystem::path path;
  std::ifstream in;
  std::string line;
  std::size_t number = 0;
};

template <typename T>
T parse_number(const LineReader& r, std::string_view field, const char* name) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    r.fail(std::string("malformed ") + name + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
  Dataset d;
  std::vector<std::string_view> f;

  if (paths.categories) {
    LineReader r(*paths.categories);
    while (r.next(f)) {
      if (f.size() != 2 || f[0].empty()) r.fail("expected category_id<TAB>name");
      if (d.categories.find(f[0])) r.fail("duplicate category '" + std::string(f[0]) + "'");
      d.categories.intern(f[0]);
      d.category_names.emplace_back(f[1]);
    }
  }

  {
    LineReader r(paths.pois);
    std::optional<bool> with_category;
    while (r.next(f)) {
      if (f.size() != 3 && f.size() != 4) r.fail("expected poi_id<TAB>lat<TAB>lon[<TAB>category_id]");
      if (f[0].empty()) r.fail("empty poi_id");
      if (d.poi_ids.find(f[0])) r.fail("duplicate poi '" + std::string(f[0]) + "'");
      const bool has_cat = f.size() == 4;
      if (with_category && *with_category != has_cat) {
        r.fail("category column must be present for all POIs or for none");
      }
      with_category = has_cat;

      Poi poi;
      poi.location = {parse_number<double>(r, f[1], "latitude"),
                      parse_number<double>(r, f[2], "longitude")};
      if (!valid_coordinates(poi.location)) r.fail("coordinate out of range");
      if (has_cat) {
        if (f[3].empty()) r.fail("empty category_id");
        if (paths.categories) {
          auto c = d.categories.find(f[3]);
          if (!c) r.fail("unknown category '" + std::string(f[3]) + "'");
          poi.category = *c;
        } else {
          const auto before = d.categories.size();
          poi.category = d.categories.intern(f[3]);
          if (d.categories.size() != before) d.category_names.emplace_back(f[3]);
        }
      }
      d.poi_ids.intern(f[0]);
      d.pois.push_back(poi);
    }
    d.has_categories = with_category.value_or(false);
  }

  {
    LineReader r(paths.checkins);
    while (r.next(f)) {
      if (f.size() != 3) r.fail("expected user_id<TAB>poi_id<TAB>unix_timestamp");
      if (f[0].empty()) r.fail("empty user_id");
      auto poi = d.poi_ids.find(f[1]);
      if (!poi) r.fail("check-in references unknown poi '" + std::string(f[1]) + "'");
      const auto ts = parse_number<Timestamp>(r, f[2], "timestamp");
      if (ts < 0) r.fail("negative timestamp");
      const auto u = d.users.intern(f[0]);
      if (u >= d.checkins.size()) d.checkins.resize(u + 1);
      d.checkins[u].push_back({*poi, ts});
    }
  }
  for (auto& visits : d.checkins) {
    std::stable_sort(visits.begin(), visits.end(),
                     [](const Visit& a, const Visit& b) { return a.time < b.time; });
  }

  d.social.resize(d.users.size());
  if (!paths.social.empty()) {
    LineReader r(paths.social);
    std::size_t unknown = 0;
    while (r.next(f)) {
      if (f.size() != 2) r.fail("expected user_a<TAB>user_b");
      auto a = d.users.find(f[0]);
      auto b = d.users.find(f[1]);
      if (!a || !b) {
        ++unknown;
        continue;
      }
      d.social.add_edge(*a, *b);
    }
    if (unknown > 0) {
      spdlog::warn("{}: dropped {} social edges touching users without check-ins",
                   paths.social.filename().string(), unknown);
    }
  }
  return d;
}

DatasetPaths write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetPaths paths{dir / "checkins.tsv", dir / "pois.tsv", dir / "social.tsv", std::nullopt};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out.precision(17);
    return out;
  };

  {
    auto out = open(paths.checkins);
    for (UserIndex u = 0; u < d.checkins.size(); ++u) {
      for (const auto& v : d.checkins[u]) {
        out << d.users.id(u) << '\t' << d.poi_ids.id(v.poi) << '\t' << v.time << '\n';
      }
    }
  }
  {
    auto out = open(paths.pois);
    for (PoiIndex l = 0; l < d.pois.size(); ++l) {
      const auto& p = d.pois[l];
      out << d.poi_ids.id(l) << '\t' << p.location.lat << '\t' << p.location.lon;
      if (d.has_categories) out << '\t' << d.categories.id(*p.category);
      out << '\n';
    }
  }
  {
    auto out = open(paths.social);
    for (UserIndex u = 0; u < d.social.num_users(); ++u) {
      for (UserIndex v : d.social.friends(u)) {
        if (u < v) out << d.users.id(u) << '\t' << d.users.id(v) << '\n';
      }
    }
  }
  if (d.has_categories) {
    paths.categories = dir / "categories.tsv";
    auto out = open(*paths.categories);
    for (CategoryIndex c = 0; c < d.categories.size(); ++c) {
      out << d.categories.id(c) << '\t' << d.category_names.at(c) << '\n';
    }
  }
  return paths;
}

void write_index_map(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  auto dump = [&](const char* kind, const Registry& reg) {
    for (std::uint32_t i = 0; i < reg.size(); ++i) out << kind << '\t' << i << '\t' << reg.id(i) << '\n';
  };
  dump("user", d.users);
  dump("poi", d.poi_ids);
  dump("category", d.categories);
}

// ---------------------------------------------------------------------------
// Filtering

namespace {

Dataset filter_once(const Dataset& d, const FilterOptions& opt, bool& changed) {
  const auto n_users = d.num_users();
  const auto n_pois = d.num_pois();

  std::vector<bool> keep_user(n_users, false);
  for (UserIndex u = 0; u < n_users; ++u) {
    keep_user[u] = u < d.checkins.size() && d.checkins[u].size() >= opt.min_user_checkins &&
                   !d.checkins[u].empty();
  }

  std::vector<std::size_t> visitors(n_pois, 0);
  std::vector<UserIndex> last_seen(n_pois, static_cast<UserIndex>(-1));
  for (UserIndex u = 0; u < n_users; ++u) {
    if (!keep_user[u]) continue;
    for (const auto& v : d.checkins[u]) {
      if (last_seen[v.poi] != u) {
        last_seen[v.poi] = u;
        ++visitors[v.poi];
      }
    }
  }
  std::vector<bool> keep_poi(n_pois);
  for (PoiIndex l = 0; l < n_pois; ++l) {
    keep_poi[l] = visitors[l] >= opt.min_poi_visitors && visitors[l] > 0;
  }

  Dataset out;
  out.has_categories = d.has_categories;
  out.categories = d.categories;
  out.category_names = d.category_names;

  constexpr auto kDropped = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> poi_map(n_pois, kDropped);
  for (PoiIndex l = 0; l < n_pois; ++l) {
    if (!keep_poi[l]) continue;
    poi_map[l] = out.poi_ids.intern(d.poi_ids.id(l));
    out.pois.push_back(d.pois[l]);
  }

  std::vector<std::uint32_t> user_map(n_users, kDropped);
  for (UserIndex u = 0; u < n_users; ++u) {
    if (!keep_user[u]) continue;
    std::vector<Visit> visits;
    for (const auto& v : d.checkins[u]) {
      if (poi_map[v.poi] != kDropped) visits.push_back({poi_map[v.poi], v.time});
    }
    if (visits.empty()) continue;
    user_map[u] = out.users.intern(d.users.id(u));
    out.checkins.push_back(std::move(visits));
  }

  out.social.resize(out.users.size());
  for (UserIndex u = 0; u < d.social.num_users(); ++u) {
    if (user_map[u] == kDropped) continue;
    for (UserIndex v : d.social.friends(u)) {
      if (u < v && user_map[v] != kDropped) out.social.add_edge(user_map[u], user_map[v]);
    }
  }

  changed = out.num_users() != d.num_users() || out.num_pois() != d.num_pois() ||
            out.num_checkins() != d.num_checkins();
  return out;
}

}  // namespace

Dataset filter_dataset(const Dataset& d, const FilterOptions& options) {
  if (options.min_user_checkins == 0 && options.min_poi_visitors == 0) return d;
  bool changed = false;
  Dataset out = filter_once(d, options, changed);
  while (options.fixpoint && changed) out = filter_once(out, options, changed);
  return out;
}

// ---------------------------------------------------------------------------
// Splitting

SplitCounts split_counts(std::size_t n, const SplitFractions& fr) {
  if (n < 3) return {n, 0, 0};
  const bool holds_out = fr.test > 0.0 || fr.validation > 0.0;
  auto train = static_cast<std::size_t>(std::lround(fr.train * static_cast<double>(n)));
  train = std::min(train, holds_out ? n - 1 : n);
  auto test = static_cast<std::size_t>(std::lround(fr.test * static_cast<double>(n)));
  test = std::min(test, n - train);
  return {train, test, n - train - test};
}

SplitDataset temporal_split(const Dataset& d, const SplitFractions& fr) {
  const double sum = fr.train + fr.test + fr.validation;
  if (fr.train <= 0.0 || fr.test < 0.0 || fr.validation < 0.0 || std::abs(sum - 1.0) > 1e-9) {
    throw DataError("split fractions must be non-negative, train positive, and sum to 1");
  }
  SplitDataset s{d.empty_like(), d.empty_like(), d.empty_like(), {}};
  for (UserIndex u = 0; u < d.checkins.size(); ++u) {
    const auto& visits = d.checkins[u];
    if (visits.empty()) throw DataError("user '" + d.users.id(u) + "' has no check-ins");
    const auto c = split_counts(visits.size(), fr);
    if (visits.size() < 3) s.train_only_users.push_back(u);
    auto first = visits.begin();
    s.train.checkins[u].assign(first, first + c.train);
    s.test.checkins[u].assign(first + c.train, first + c.train + c.test);
    s.validation.checkins[u].assign(first + c.train + c.test, visits.end());
  }
  if (!s.train_only_users.empty()) {
    spdlog::warn("{} users have fewer than 3 check-ins and are train-only",
                 s.train_only_users.size());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Frequency matrix

FrequencyMatrix::FrequencyMatrix(std::size_t num_users, std::size_t num_pois,
                                 const CheckinLog& log)
    : rows_(num_users), columns_(num_pois) {
  for (UserIndex u = 0; u < log.size() && u < num_users; ++u) {
    std::vector<PoiIndex> pois;
    pois.reserve(log[u].size());
    for (const auto& v : log[u]) {
      if (v.poi >= num_pois) throw DataError("check-in POI index out of range");
      pois.push_back(v.poi);
    }
    std::sort(pois.begin(), pois.end());
    auto& row = rows_[u];
    for (std::size_t i = 0; i < pois.size();) {
      std::size_t j = i;
      while (j < pois.size() && pois[j] == pois[i]) ++j;
      row.push_back({pois[i], static_cast<std::uint32_t>(j - i)});
      i = j;
    }
    for (const auto& e : row) {
      columns_[e.index].push_back({u, e.count});
      total_ += e.count;
    }
    nnz_ += row.size();
  }
  if (log.size() > num_users) throw DataError("check-in log has more users than the registry");
}

std::uint32_t FrequencyMatrix::count(UserIndex u, PoiIndex l) const {
  const auto& row = rows_.at(u);
  auto it = std::lower_bound(row.begin(), row.end(), l,
                             [](const FrequencyEntry& e, PoiIndex p) { return e.index < p; });
  return (it != row.end() && it->index == l) ? it->count : 0;
}

std::uint64_t FrequencyMatrix::user_total(UserIndex u) const {
  std::uint64_t t = 0;
  for (const auto& e : rows_.at(u)) t += e.count;
  return t;
}

FrequencyMatrix build_frequency_matrix(const Dataset& train) {
  return FrequencyMatrix(train.num_users(), train.num_pois(), train.checkins);
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

std::vector<PoiIndex> unique_pois(std::span<const Visit> visits) {
  std::vector<PoiIndex> out;
  out.reserve(visits.size());
  for (const auto& v : visits) out.push_back(v.poi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Uniform k-subset of `pool` via partial Fisher-Yates, returned sorted.
std::vector<PoiIndex> draw_without_replacement(std::vector<PoiIndex> pool, std::size_t k,
                                               Rng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

const Dataset& held_out(const SplitDataset& s, SampleMode mode) {
  return mode == SampleMode::Validation ? s.validation : s.test;
}

}  // namespace

std::vector<InteractionSample> sample_negatives(const SplitDataset& split, SampleMode mode,
                                                std::uint64_t seed,
                                                std::size_t eval_negatives) {
  const auto n_pois = split.train.num_pois();
  std::vector<InteractionSample> out;
  std::size_t empty_pools = 0;
  std::vector<bool> excluded(n_pois);

  for (UserIndex u = 0; u < split.train.checkins.size(); ++u) {
    const auto train_pois = unique_pois(split.train.checkins[u]);
    std::fill(excluded.begin(), excluded.end(), false);
    for (auto l : train_pois) excluded[l] = true;

    std::size_t wanted = train_pois.size();
    if (mode != SampleMode::Train) {
      const auto& held = held_out(split, mode).checkins[u];
      for (const auto& v : held) excluded[v.poi] = true;
      wanted = eval_negatives;
    }

    std::vector<PoiIndex> pool;
    for (PoiIndex l = 0; l < n_pois; ++l) {
      if (!excluded[l]) pool.push_back(l);
    }
    if (pool.empty()) {
      ++empty_pools;
      continue;
    }
    Rng rng(derive_seed(seed, u));
    for (auto l : draw_without_replacement(std::move(pool), wanted, rng)) {
      out.push_back({u, l, 0});
    }
  }
  if (empty_pools > 0) spdlog::warn("{} users have no negative candidates", empty_pools);
  return out;
}

std::vector<InteractionSample> build_training_samples(const SplitDataset& split,
                                                      std::uint64_t seed) {
  const auto negatives = sample_negatives(split, SampleMode::Train, seed);
  std::vector<InteractionSample> out;
  out.reserve(2 * negatives.size());
  std::size_t next = 0;
  for (UserIndex u = 0; u < split.train.checkins.size(); ++u) {
    for (auto l : unique_pois(split.train.checkins[u])) out.push_back({u, l, 1});
    while (next < negatives.size() && negatives[next].user == u) out.push_back(negatives[next++]);
  }
  return out;
}

std::vector<EvaluationUser> build_evaluation_users(const SplitDataset& split,
                                                   std::span<const InteractionSample> negatives,
                                                   SampleMode mode) {
  const auto& held = held_out(split, mode);
  std::vector<std::vector<PoiIndex>> neg_by_user(split.train.num_users());
  for (const auto& s : negatives) {
    if (s.label == 0) neg_by_user.at(s.user).push_back(s.poi);
  }

  std::vector<EvaluationUser> out;
  std::size_t skipped = 0;
  for (UserIndex u = 0; u < held.checkins.size(); ++u) {
    const auto train_pois = unique_pois(split.train.checkins[u]);
    EvaluationUser task;
    task.user = u;
    for (auto l : unique_pois(held.checkins[u])) {
      if (!std::binary_search(train_pois.begin(), train_pois.end(), l)) task.relevant.push_back(l);
    }
    if (task.relevant.empty()) {
      ++skipped;
      continue;
    }
    task.candidates = task.relevant;
    for (auto l : neg_by_user[u]) {
      if (!std::binary_search(train_pois.begin(), train_pois.end(), l)) task.candidates.push_back(l);
    }
    std::sort(task.candidates.begin(), task.candidates.end());
    task.candidates.erase(std::unique(task.candidates.begin(), task.candidates.end()),
                          task.candidates.end());
    out.push_back(std::move(task));
  }
  if (skipped > 0) spdlog::debug("{} users without new held-out POIs excluded", skipped);
  return out;
}

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s;
  s.users = d.num_users();
  s.pois = d.num_pois();
  s.checkins = d.num_checkins();
  for (const auto& visits : d.checkins) s.unique_checkins += unique_pois(visits).size();
  if (d.has_categories) {
    std::vector<bool> used(d.categories.size(), false);
    for (const auto& p : d.pois) used.at(*p.category) = true;
    s.categories = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  }
  s.social_links = d.social.num_edges();
  if (s.users > 0) s.checkins_per_user = static_cast<double>(s.checkins) / s.users;
  if (s.pois > 0) s.checkins_per_poi = static_cast<double>(s.checkins) / s.pois;
  if (s.users > 0 && s.pois > 0) {
    s.sparsity = 1.0 - static_cast<double>(s.unique_checkins) /
                           (static_cast<double>(s.users) * static_cast<double>(s.pois));
  }
  return s;
}

}  // namespace ctxrec
