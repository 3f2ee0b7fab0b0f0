#include "ctxrec/fusion.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <numeric>

#include "ctxrec/error.hpp"

namespace ctxrec {

std::string_view to_string(BaseModel b) {
  switch (b) {
    case BaseModel::None: return "none";
    case BaseModel::Mf: return "M";
    case BaseModel::Ncf: return "N";
  }
  return "?";
}

std::string_view to_string(ContextKind c) {
  switch (c) {
    case ContextKind::Geo: return "geo-kde";
    case ContextKind::GeoUniversal: return "geo-kde-universal";
    case ContextKind::Temporal: return "amc";
    case ContextKind::Social: return "social-power-law";
    case ContextKind::Categorical: return "categorical-power-law";
    case ContextKind::Fcf: return "fcf";
    case ContextKind::Mgm: return "mgm";
  }
  return "?";
}

std::string_view to_string(Normalization n) {
  return n == Normalization::None ? "none" : "per-user-minmax";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "none") return Normalization::None;
  if (s == "per-user-minmax") return Normalization::PerUserMinMax;
  throw ConfigError("unknown normalization '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Labels

namespace {

struct LetterMap {
  char letter;
  ContextKind kind;
};

struct FamilyInfo {
  ModelFamily family;
  std::string_view prefix;
  std::vector<LetterMap> letters;
};

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> table = {
      {ModelFamily::Proposed,
       "",
       {{'G', ContextKind::Geo},
        {'S', ContextKind::Social},
        {'T', ContextKind::Temporal},
        {'C', ContextKind::Categorical}}},
      {ModelFamily::GeoSoCa,
       "GeoSoCa",
       {{'G', ContextKind::GeoUniversal},
        {'S', ContextKind::Social},
        {'C', ContextKind::Categorical}}},
      {ModelFamily::Lore,
       "FCFKDEAMC",
       {{'S', ContextKind::Fcf}, {'G', ContextKind::GeoUniversal}, {'T', ContextKind::Temporal}}},
      {ModelFamily::PfmMgm, "PFMMGM", {{'G', ContextKind::Mgm}}},
  };
  return table;
}

const FamilyInfo& family_info(ModelFamily f) {
  for (const auto& info : families()) {
    if (info.family == f) return info;
  }
  throw ConfigError("unknown model family");
}

}  // namespace

std::string context_letters(const FusionConfig& cfg) {
  const auto& info = family_info(cfg.family);
  std::string out;
  if (cfg.family == ModelFamily::PfmMgm && cfg.base == BaseModel::Mf) out += 'M';
  for (auto kind : cfg.contexts) {
    auto it = std::find_if(info.letters.begin(), info.letters.end(),
                           [&](const LetterMap& m) { return m.kind == kind; });
    if (it == info.letters.end()) {
      throw ConfigError("context '" + std::string(to_string(kind)) + "' is not part of this family");
    }
  }
  // canonical order is the family's letter order, whatever order the contexts are in
  for (const auto& m : info.letters) {
    if (std::find(cfg.contexts.begin(), cfg.contexts.end(), m.kind) != cfg.contexts.end()) {
      out += m.letter;
    }
  }
  return out;
}

std::string format_model_label(const FusionConfig& cfg) {
  const auto letters = context_letters(cfg);
  if (cfg.family == ModelFamily::Proposed) {
    if (cfg.base == BaseModel::None) throw ConfigError("proposed models need a base ranker");
    std::string label(to_string(cfg.base));
    if (!letters.empty()) label += "-(" + letters + ")";
    return label;
  }
  if (letters.empty()) throw ConfigError("baseline label without components");
  return std::string(family_info(cfg.family).prefix) + "-(" + letters + ")";
}

FusionConfig parse_model_label(std::string_view label, Normalization normalization, std::size_t n) {
  auto fail = [&](const std::string& why) -> FusionConfig {
    throw ConfigError("model label '" + std::string(label) + "': " + why);
  };
  FusionConfig cfg;
  cfg.normalization = normalization;
  cfg.n = n;

  std::string_view head = label;
  std::string_view letters;
  if (auto dash = label.find("-("); dash != std::string_view::npos) {
    if (label.back() != ')') return fail("missing ')'");
    head = label.substr(0, dash);
    letters = label.substr(dash + 2, label.size() - dash - 3);
    if (letters.empty()) return fail("empty context list");
  }

  if (head == "M" || head == "N") {
    cfg.family = ModelFamily::Proposed;
    cfg.base = head == "M" ? BaseModel::Mf : BaseModel::Ncf;
  } else {
    auto it = std::find_if(families().begin(), families().end(), [&](const FamilyInfo& f) {
      return !f.prefix.empty() && f.prefix == head;
    });
    if (it == families().end()) return fail("unknown model");
    if (letters.empty()) return fail("baselines need a component list");
    cfg.family = it->family;
    cfg.base = BaseModel::None;
  }

  const auto& info = family_info(cfg.family);
  std::string seen;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const char c = letters[i];
    if (seen.find(c) != std::string::npos) return fail(std::string("repeated context '") + c + "'");
    seen += c;
    if (cfg.family == ModelFamily::PfmMgm && c == 'M') {
      if (i != 0) return fail("'M' must come first");
      cfg.base = BaseModel::Mf;
      continue;
    }
    auto it = std::find_if(info.letters.begin(), info.letters.end(),
                           [&](const LetterMap& m) { return m.letter == c; });
    if (it == info.letters.end()) return fail(std::string("unknown context '") + c + "'");
    cfg.contexts.push_back(it->kind);
  }
  if (cfg.n == 0) return fail("list length must be >= 1");
  return cfg;
}

// ---------------------------------------------------------------------------
// Sum rule

double fuse(double base_score, std::span<const double> context_scores, const FusionConfig& cfg) {
  if (context_scores.size() != cfg.contexts.size()) {
    throw ModelError("fusion: expected " + std::to_string(cfg.contexts.size()) +
                     " context scores, got " + std::to_string(context_scores.size()));
  }
  double s = cfg.base == BaseModel::None ? 0.0 : base_score;
  for (double c : context_scores) s += c;
  return s;
}

void normalize_minmax(std::span<double> scores) {
  if (scores.empty()) return;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo, max = *hi;
  if (!(max > min)) {
    std::fill(scores.begin(), scores.end(), 0.0);
    return;
  }
  const double range = max - min;
  for (auto& s : scores) s = s == max ? 1.0 : (s - min) / range;
}

std::vector<double> fuse_candidates(std::span<const double> base,
                                    const std::vector<std::vector<double>>& contexts,
                                    Normalization normalization, std::size_t num_candidates) {
  std::vector<double> fused(num_candidates, 0.0);
  std::vector<double> buf;
  auto add = [&](std::span<const double> part) {
    if (part.size() != num_candidates) throw ModelError("fusion: score vector length mismatch");
    buf.assign(part.begin(), part.end());
    if (normalization == Normalization::PerUserMinMax) normalize_minmax(buf);
    for (std::size_t i = 0; i < num_candidates; ++i) fused[i] += buf[i];
  };
  if (!base.empty()) add(base);
  for (const auto& c : contexts) add(c);
  return fused;
}

std::vector<PoiIndex> RecommendationList::pois() const {
  std::vector<PoiIndex> out;
  out.reserve(items.size());
  for (const auto& i : items) out.push_back(i.poi);
  return out;
}

RecommendationList recommend_top_n(UserIndex u, std::span<const PoiIndex> candidates,
                                   std::span<const double> scores, std::size_t n) {
  if (candidates.size() != scores.size()) throw ModelError("recommend: score count mismatch");
  RecommendationList list{u, {}};
  if (candidates.empty()) {
    spdlog::debug("user {}: empty candidate set", u);
    return list;
  }
  std::vector<ScoredPoi> items(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) items[i] = {candidates[i], scores[i]};
  const auto k = std::min(n, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(),
                    [](const ScoredPoi& a, const ScoredPoi& b) {
                      return a.score > b.score || (a.score == b.score && a.poi < b.poi);
                    });
  items.resize(k);
  list.items = std::move(items);
  return list;
}

FusionRecommender::FusionRecommender(FusionConfig cfg, const Scorer* base,
                                     std::vector<const Scorer*> contexts)
    : cfg_(std::move(cfg)), base_(base), contexts_(std::move(contexts)) {
  if ((cfg_.base == BaseModel::None) != (base_ == nullptr)) {
    throw ModelError("fusion: base scorer does not match the configuration");
  }
  if (contexts_.size() != cfg_.contexts.size()) throw ModelError("fusion: missing context scorer");
  for (const auto* c : contexts_) {
    if (c == nullptr) throw ModelError("fusion: missing context scorer");
  }
  if (cfg_.n == 0) throw ModelError("fusion: n must be >= 1");
}

std::vector<double> FusionRecommender::score(UserIndex u, std::span<const PoiIndex> candidates) const {
  std::vector<double> base;
  if (base_ != nullptr) {
    base.resize(candidates.size());
    base_->score_candidates(u, candidates, base);
  }
  std::vector<std::vector<double>> parts(contexts_.size(), std::vector<double>(candidates.size()));
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    contexts_[c]->score_candidates(u, candidates, parts[c]);
  }
  return fuse_candidates(base, parts, cfg_.normalization, candidates.size());
}

RecommendationList FusionRecommender::recommend(UserIndex u,
                                                std::span<const PoiIndex> candidates) const {
  const auto s = score(u, candidates);
  return recommend_top_n(u, candidates, s, cfg_.n);
}

void write_recommendations(const std::filesystem::path& path, const Dataset& d,
                           std::span<const RecommendationList> lists) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.items.size(); ++r) {
      out << d.users.id(list.user) << '\t' << r + 1 << '\t' << d.poi_ids.id(list.items[r].poi) << '\t'
          << list.items[r].score << '\n';
    }
  }
}

}  // namespace ctxrec
