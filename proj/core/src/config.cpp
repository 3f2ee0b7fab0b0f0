#include "ctxrec/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "ctxrec/error.hpp"
#include "ctxrec/random.hpp"
#include "ctxrec/serialize.hpp"

namespace ctxrec {

using nlohmann::json;

namespace {

// Literals built in code are signed even when non-negative; parsed text is not.
bool is_non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

/// Reads keys out of one JSON object and rejects anything it did not read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void get(const char* key, double& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "must be finite");
    }
  }

  void get(const char* key, std::size_t& out) {
    if (const auto* v = find(key)) {
      if (!is_non_negative_integer(*v)) fail(key, "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void get(const char* key, bool& out) {
    if (const auto* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }

  void get(const char* key, std::string& out) {
    if (const auto* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }

  void get(const char* key, Timestamp& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<Timestamp>();
    }
  }

  [[noreturn]] void fail(const char* key, const std::string& why) const {
    throw ConfigError(where_ + "." + key + ": " + why);
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

void read_path(ObjectReader& r, const char* key, std::filesystem::path& out,
               const std::filesystem::path& base) {
  std::string s;
  r.get(key, s);
  if (!s.empty()) out = resolve(s, base);
}

SyntheticConfig synthetic_from_json(const json& j) {
  SyntheticConfig s;
  ObjectReader r(j, "dataset.synthetic");
  r.get("num_users", s.num_users);
  r.get("num_pois", s.num_pois);
  r.get("num_checkins", s.num_checkins);
  if (const auto* c = r.find("region_center")) {
    if (!c->is_array() || c->size() != 2 || !(*c)[0].is_number() || !(*c)[1].is_number()) {
      r.fail("region_center", "expected [lat, lon]");
    }
    s.region_center = {(*c)[0].get<double>(), (*c)[1].get<double>()};
  }
  r.get("region_extent_km", s.region_extent_km);
  r.get("centers_per_user", s.centers_per_user);
  r.get("center_spread_km", s.center_spread_km);
  r.get("temporal_strength", s.temporal_strength);
  r.get("successors_per_poi", s.successors_per_poi);
  r.get("explore_min", s.explore_min);
  r.get("explore_max", s.explore_max);
  r.get("mean_gap_hours", s.mean_gap_hours);
  r.get("gap_exploration_coupling", s.gap_exploration_coupling);
  r.get("friends_per_user", s.friends_per_user);
  r.get("homophily", s.homophily);
  r.get("num_categories", s.num_categories);
  r.get("liked_categories", s.liked_categories);
  r.get("category_strength", s.category_strength);
  r.get("start_time", s.start_time);
  r.finish();
  return s;
}

json synthetic_to_json(const SyntheticConfig& s) {
  return {{"num_users", s.num_users},
          {"num_pois", s.num_pois},
          {"num_checkins", s.num_checkins},
          {"region_center", {s.region_center.lat, s.region_center.lon}},
          {"region_extent_km", s.region_extent_km},
          {"centers_per_user", s.centers_per_user},
          {"center_spread_km", s.center_spread_km},
          {"temporal_strength", s.temporal_strength},
          {"successors_per_poi", s.successors_per_poi},
          {"explore_min", s.explore_min},
          {"explore_max", s.explore_max},
          {"mean_gap_hours", s.mean_gap_hours},
          {"gap_exploration_coupling", s.gap_exploration_coupling},
          {"friends_per_user", s.friends_per_user},
          {"homophily", s.homophily},
          {"num_categories", s.num_categories},
          {"liked_categories", s.liked_categories},
          {"category_strength", s.category_strength},
          {"start_time", s.start_time}};
}

DatasetSpec dataset_from_json(const json& j, const std::filesystem::path& base) {
  DatasetSpec d;
  ObjectReader r(j, "dataset");
  if (const auto* syn = r.find("synthetic")) {
    d.kind = DatasetSpec::Kind::Synthetic;
    d.synthetic = synthetic_from_json(*syn);
    for (const char* k : {"checkins", "pois", "social", "categories"}) {
      if (r.find(k) != nullptr) r.fail(k, "cannot be combined with 'synthetic'");
    }
  } else {
    d.kind = DatasetSpec::Kind::Files;
    read_path(r, "checkins", d.paths.checkins, base);
    read_path(r, "pois", d.paths.pois, base);
    read_path(r, "social", d.paths.social, base);
    std::filesystem::path cats;
    read_path(r, "categories", cats, base);
    if (!cats.empty()) d.paths.categories = cats;
    if (d.paths.checkins.empty() || d.paths.pois.empty()) {
      throw ConfigError("dataset: either 'synthetic' or at least 'checkins' and 'pois' are required");
    }
  }
  r.finish();
  return d;
}

json dataset_to_json(const DatasetSpec& d) {
  if (d.kind == DatasetSpec::Kind::Synthetic) return {{"synthetic", synthetic_to_json(d.synthetic)}};
  json j = {{"checkins", d.paths.checkins.string()}, {"pois", d.paths.pois.string()}};
  if (!d.paths.social.empty()) j["social"] = d.paths.social.string();
  if (d.paths.categories) j["categories"] = d.paths.categories->string();
  return j;
}

ModelHyperparameters hyper_from_json(const json& j) {
  ModelHyperparameters h;
  ObjectReader r(j, "hyperparameters");
  if (const auto* p = r.find("pfm")) {
    ObjectReader q(*p, "hyperparameters.pfm");
    q.get("factors", h.pfm.factors);
    q.get("shape", h.pfm.shape);
    q.get("scale", h.pfm.scale);
    q.get("learning_rate", h.pfm.learning_rate);
    q.get("iterations", h.pfm.iterations);
    q.get("line_search", h.pfm.line_search);
    q.get("max_step_growth", h.pfm.max_step_growth);
    q.get("preconditioned", h.pfm.preconditioned);
    q.get("min_value", h.pfm.min_value);
    q.get("init_low", h.pfm.init_low);
    q.get("init_high", h.pfm.init_high);
    q.finish();
  }
  if (const auto* n = r.find("ncf")) {
    ObjectReader q(*n, "hyperparameters.ncf");
    q.get("factors", h.ncf.factors);
    q.get("hidden1", h.ncf.hidden1);
    q.get("hidden2", h.ncf.hidden2);
    q.get("learning_rate", h.ncf.adam.learning_rate);
    q.get("beta1", h.ncf.adam.beta1);
    q.get("beta2", h.ncf.adam.beta2);
    q.get("epsilon", h.ncf.adam.epsilon);
    q.get("batch_size", h.ncf.batch_size);
    q.get("epochs", h.ncf.epochs);
    q.finish();
  }
  if (const auto* k = r.find("kde")) {
    ObjectReader q(*k, "hyperparameters.kde");
    q.get("min_bandwidth_km", h.kde_min_bandwidth_km);
    q.finish();
  }
  if (const auto* a = r.find("amc")) {
    ObjectReader q(*a, "hyperparameters.amc");
    q.get("alpha", h.amc_alpha);
    q.finish();
  }
  if (const auto* m = r.find("mgm")) {
    ObjectReader q(*m, "hyperparameters.mgm");
    q.get("max_center_distance_km", h.mgm.max_center_distance_km);
    q.get("min_center_fraction", h.mgm.min_center_fraction);
    q.get("min_sigma_km", h.mgm.min_sigma_km);
    q.finish();
  }
  r.finish();
  return h;
}

json hyper_to_json(const ModelHyperparameters& h) {
  return {{"pfm",
           {{"factors", h.pfm.factors},
            {"shape", h.pfm.shape},
            {"scale", h.pfm.scale},
            {"learning_rate", h.pfm.learning_rate},
            {"iterations", h.pfm.iterations},
            {"line_search", h.pfm.line_search},
            {"max_step_growth", h.pfm.max_step_growth},
            {"preconditioned", h.pfm.preconditioned},
            {"min_value", h.pfm.min_value},
            {"init_low", h.pfm.init_low},
            {"init_high", h.pfm.init_high}}},
          {"ncf",
           {{"factors", h.ncf.factors},
            {"hidden1", h.ncf.hidden1},
            {"hidden2", h.ncf.hidden2},
            {"learning_rate", h.ncf.adam.learning_rate},
            {"beta1", h.ncf.adam.beta1},
            {"beta2", h.ncf.adam.beta2},
            {"epsilon", h.ncf.adam.epsilon},
            {"batch_size", h.ncf.batch_size},
            {"epochs", h.ncf.epochs}}},
          {"kde", {{"min_bandwidth_km", h.kde_min_bandwidth_km}}},
          {"amc", {{"alpha", h.amc_alpha}}},
          {"mgm",
           {{"max_center_distance_km", h.mgm.max_center_distance_km},
            {"min_center_fraction", h.mgm.min_center_fraction},
            {"min_sigma_km", h.mgm.min_sigma_km}}}};
}

std::string_view mode_name(SampleMode m) {
  switch (m) {
    case SampleMode::Train: return "train";
    case SampleMode::Test: return "test";
    case SampleMode::Validation: return "validation";
  }
  return "?";
}

EvaluationOptions evaluation_from_json(const json& j) {
  EvaluationOptions e;
  ObjectReader r(j, "evaluation");
  if (const auto* m = r.find("metrics")) {
    if (!m->is_array()) r.fail("metrics", "expected an array");
    e.metrics.clear();
    for (const auto& x : *m) {
      if (!x.is_string()) r.fail("metrics", "expected metric names");
      e.metrics.push_back(parse_metric(x.get<std::string>()));
    }
  }
  if (const auto* k = r.find("k")) {
    if (!k->is_array()) r.fail("k", "expected an array");
    e.k.clear();
    for (const auto& x : *k) {
      if (!is_non_negative_integer(x)) r.fail("k", "expected positive integers");
      e.k.push_back(x.get<std::size_t>());
    }
  }
  r.get("negatives", e.negatives);
  std::string mode(mode_name(e.mode));
  r.get("mode", mode);
  if (mode == "test") {
    e.mode = SampleMode::Test;
  } else if (mode == "validation") {
    e.mode = SampleMode::Validation;
  } else {
    r.fail("mode", "expected 'test' or 'validation'");
  }
  std::string cd(to_string(e.cd_metric));
  r.get("cd_metric", cd);
  e.cd_metric = parse_metric(cd);
  r.get("cd_k", e.cd_k);
  std::string stat(to_string(e.aspect_statistic));
  r.get("aspect_statistic", stat);
  e.aspect_statistic = parse_aspect_statistic(stat);
  r.finish();
  return e;
}

json evaluation_to_json(const EvaluationOptions& e) {
  json metrics = json::array();
  for (auto m : e.metrics) metrics.push_back(std::string(to_string(m)));
  return {{"metrics", metrics},
          {"k", e.k},
          {"negatives", e.negatives},
          {"mode", std::string(mode_name(e.mode))},
          {"cd_metric", std::string(to_string(e.cd_metric))},
          {"cd_k", e.cd_k},
          {"aspect_statistic", std::string(to_string(e.aspect_statistic))}};
}

}  // namespace

std::vector<FusionConfig> ExperimentConfig::grid() const {
  std::vector<FusionConfig> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(parse_model_label(m, normalization, list_length()));
  return out;
}

std::size_t ExperimentConfig::list_length() const {
  std::size_t n = evaluation.cd_k;
  for (auto k : evaluation.k) n = std::max(n, k);
  return std::max<std::size_t>(n, 1);
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  ObjectReader r(j, "config");
  r.get("name", cfg.name);
  if (const auto* d = r.find("dataset")) {
    cfg.dataset = dataset_from_json(*d, base_dir);
  } else {
    throw ConfigError("config: 'dataset' is required");
  }
  if (const auto* f = r.find("filter")) {
    ObjectReader q(*f, "filter");
    q.get("min_user_checkins", cfg.filter.min_user_checkins);
    q.get("min_poi_visitors", cfg.filter.min_poi_visitors);
    q.get("fixpoint", cfg.filter.fixpoint);
    q.finish();
  }
  if (const auto* s = r.find("split")) {
    ObjectReader q(*s, "split");
    q.get("train", cfg.split.train);
    q.get("test", cfg.split.test);
    q.get("validation", cfg.split.validation);
    q.finish();
  }
  if (const auto* m = r.find("models")) {
    if (!m->is_array()) r.fail("models", "expected an array of model labels");
    cfg.models.clear();
    for (const auto& x : *m) {
      if (!x.is_string()) r.fail("models", "expected model labels");
      cfg.models.push_back(x.get<std::string>());
    }
  }
  std::string norm(to_string(cfg.normalization));
  r.get("normalization", norm);
  cfg.normalization = parse_normalization(norm);
  if (const auto* h = r.find("hyperparameters")) cfg.hyper = hyper_from_json(*h);
  if (const auto* e = r.find("evaluation")) cfg.evaluation = evaluation_from_json(*e);
  if (const auto* s = r.find("seeds")) {
    if (!s->is_array()) r.fail("seeds", "expected an array");
    cfg.seeds.clear();
    for (const auto& x : *s) {
      if (!is_non_negative_integer(x)) r.fail("seeds", "expected non-negative integers");
      cfg.seeds.push_back(x.get<std::uint64_t>());
    }
  }
  read_path(r, "output_dir", cfg.output_dir, base_dir);
  r.get("save_models", cfg.save_models);
  r.get("save_recommendations", cfg.save_recommendations);
  r.finish();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"name", cfg.name},
          {"dataset", dataset_to_json(cfg.dataset)},
          {"filter",
           {{"min_user_checkins", cfg.filter.min_user_checkins},
            {"min_poi_visitors", cfg.filter.min_poi_visitors},
            {"fixpoint", cfg.filter.fixpoint}}},
          {"split",
           {{"train", cfg.split.train}, {"test", cfg.split.test}, {"validation", cfg.split.validation}}},
          {"models", cfg.models},
          {"normalization", std::string(to_string(cfg.normalization))},
          {"hyperparameters", hyper_to_json(cfg.hyper)},
          {"evaluation", evaluation_to_json(cfg.evaluation)},
          {"seeds", cfg.seeds},
          {"output_dir", cfg.output_dir.string()},
          {"save_models", cfg.save_models},
          {"save_recommendations", cfg.save_recommendations}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = load_json(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j, path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.models.empty()) throw ConfigError("models: the grid is empty");
  std::set<std::string> labels;
  for (const auto& m : cfg.models) {
    if (!labels.insert(m).second) throw ConfigError("models: '" + m + "' listed twice");
  }
  const auto grid = cfg.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (format_model_label(grid[i]) != cfg.models[i]) {
      throw ConfigError("models: '" + cfg.models[i] + "' is not in canonical form ('" +
                        format_model_label(grid[i]) + "')");
    }
  }
  if (cfg.evaluation.metrics.empty()) throw ConfigError("evaluation.metrics: empty");
  if (cfg.evaluation.k.empty()) throw ConfigError("evaluation.k: the K list is empty");
  for (auto k : cfg.evaluation.k) {
    if (k == 0) throw ConfigError("evaluation.k: K must be >= 1");
  }
  if (cfg.evaluation.cd_k == 0) throw ConfigError("evaluation.cd_k: must be >= 1");
  if (cfg.seeds.empty()) throw ConfigError("seeds: at least one seed is required");

  const auto& s = cfg.split;
  if (s.train <= 0.0 || s.test < 0.0 || s.validation < 0.0 ||
      std::abs(s.train + s.test + s.validation - 1.0) > 1e-9) {
    throw ConfigError("split: fractions must be non-negative, train > 0, and sum to 1");
  }
  if (s.test + s.validation <= 0.0) throw ConfigError("split: nothing is held out for evaluation");
  if (cfg.evaluation.mode == SampleMode::Validation && s.validation <= 0.0) {
    throw ConfigError("evaluation.mode: validation requested but split.validation is 0");
  }
  if (cfg.evaluation.mode == SampleMode::Test && s.test <= 0.0) {
    throw ConfigError("evaluation.mode: test requested but split.test is 0");
  }

  const auto& h = cfg.hyper;
  if (h.pfm.factors == 0) throw ConfigError("hyperparameters.pfm.factors: must be >= 1");
  if (!(h.pfm.shape > 0.0) || !(h.pfm.scale > 0.0)) {
    throw ConfigError("hyperparameters.pfm: shape and scale must be positive");
  }
  if (!(h.pfm.learning_rate > 0.0)) throw ConfigError("hyperparameters.pfm.learning_rate: must be > 0");
  if (!(h.pfm.init_low > 0.0 && h.pfm.init_high > h.pfm.init_low)) {
    throw ConfigError("hyperparameters.pfm: need 0 < init_low < init_high");
  }
  if (h.amc_alpha < 0.0) throw ConfigError("hyperparameters.amc.alpha: must be >= 0");
  if (!(h.kde_min_bandwidth_km > 0.0)) {
    throw ConfigError("hyperparameters.kde.min_bandwidth_km: must be > 0");
  }
  if (h.ncf.batch_size == 0 || h.ncf.hidden1 == 0 || h.ncf.hidden2 == 0) {
    throw ConfigError("hyperparameters.ncf: batch size and layer widths must be >= 1");
  }

  bool uses_ncf = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    uses_ncf |= grid[i].base == BaseModel::Ncf;
    for (auto c : grid[i].contexts) {
      if (c == ContextKind::Categorical) {
        if (cfg.dataset.kind == DatasetSpec::Kind::Synthetic &&
            cfg.dataset.synthetic.num_categories == 0) {
          throw ConfigError("model '" + cfg.models[i] +
                            "' uses the categorical context but the synthetic dataset has no "
                            "categories (num_categories = 0)");
        }
      }
    }
  }
  if (uses_ncf && h.ncf.factors != h.pfm.factors) {
    throw ConfigError("hyperparameters.ncf.factors must equal hyperparameters.pfm.factors (NCF "
                      "embeddings start from the MF factors)");
  }
}

void validate_against_dataset(const ExperimentConfig& cfg, const Dataset& d) {
  if (d.has_categories) return;
  const auto grid = cfg.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (auto c : grid[i].contexts) {
      if (c == ContextKind::Categorical) {
        throw ConfigError("model '" + cfg.models[i] +
                          "' uses the categorical context but the dataset has no categories");
      }
    }
  }
}

std::string config_hash(const ExperimentConfig& cfg) {
  const auto h = fnv1a64(config_to_json(cfg).dump());
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) out[static_cast<std::size_t>(15 - i)] = digits[(h >> (4 * i)) & 0xf];
  return out;
}

}  // namespace ctxrec
