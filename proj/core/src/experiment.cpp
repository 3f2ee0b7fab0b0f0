#include "ctxrec/experiment.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

#include "ctxrec/categorical.hpp"
#include "ctxrec/error.hpp"
#include "ctxrec/fcf.hpp"
#include "ctxrec/fusion.hpp"
#include "ctxrec/geo_kde.hpp"
#include "ctxrec/mgm.hpp"
#include "ctxrec/ncf.hpp"
#include "ctxrec/random.hpp"
#include "ctxrec/serialize.hpp"
#include "ctxrec/social.hpp"
#include "ctxrec/synthetic.hpp"
#include "ctxrec/temporal.hpp"

namespace ctxrec {

std::size_t worker_count() {
  if (const char* env = std::getenv("CTXREC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    spdlog::warn("ignoring CTXREC_THREADS='{}'", env);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::min(std::max<std::size_t>(threads, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const auto i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

const MetricResult& ResultsTable::find(const std::string& model, Metric metric, std::size_t k) const {
  for (const auto& r : rows) {
    if (r.model == model && r.metric == metric && r.k == k) return r;
  }
  throw Error("no result for " + model + " " + std::string(to_string(metric)) + "@" +
              std::to_string(k));
}

std::vector<std::string> ResultsTable::beats(const std::string& model, Metric metric,
                                             std::size_t k) const {
  std::vector<std::string> out;
  for (const auto& s : significance) {
    if (s.metric != metric || s.k != k || !s.test.significant()) continue;
    if (s.model_a == model && s.mean_a > s.mean_b) out.push_back(s.model_b);
    if (s.model_b == model && s.mean_b > s.mean_a) out.push_back(s.model_a);
  }
  return out;
}

Dataset materialize_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.kind == DatasetSpec::Kind::Synthetic) {
    return generate_synthetic(spec.synthetic, derive_seed(seed, "synthetic"));
  }
  return load_dataset(spec.paths);
}

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <class F>
  auto run(const std::string& stage, F&& f) {
    const auto start = Clock::now();
    struct Record {
      StageTimer* self;
      const std::string& stage;
      Clock::time_point start;
      ~Record() {
        self->sink_[stage] += std::chrono::duration<double>(Clock::now() - start).count();
      }
    } record{this, stage, start};
    return f();
  }

 private:
  std::map<std::string, double>& sink_;
};

/// Every scorer the grid needs for one seed.
struct FittedModels {
  std::optional<MfModel> mf;
  std::optional<NcfModel> ncf;
  std::map<ContextKind, std::unique_ptr<Scorer>> contexts;

  const Scorer* base(BaseModel b) const {
    switch (b) {
      case BaseModel::None: return nullptr;
      case BaseModel::Mf: return &*mf;
      case BaseModel::Ncf: return &*ncf;
    }
    return nullptr;
  }
};

void save_fitted(const FittedModels& fm, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (fm.mf) save_model(dir / "pfm.json", "pfm", *fm.mf);
  if (fm.ncf) save_model(dir / "ncf.json", "ncf", *fm.ncf);
  for (const auto& [kind, scorer] : fm.contexts) {
    const auto name = std::string(to_string(kind));
    const auto path = dir / (name + ".json");
    const Scorer* s = scorer.get();
    switch (kind) {
      case ContextKind::Geo:
      case ContextKind::GeoUniversal:
        save_model(path, name, *static_cast<const GeoKdeModel*>(s));
        break;
      case ContextKind::Temporal:
        save_model(path, name, static_cast<const TemporalScorer*>(s)->graph());
        break;
      case ContextKind::Social:
        save_model(path, name, *static_cast<const SocialPowerLawModel*>(s));
        break;
      case ContextKind::Categorical:
        save_model(path, name, *static_cast<const CategoricalModel*>(s));
        break;
      case ContextKind::Fcf:
        save_model(path, name, *static_cast<const FcfModel*>(s));
        break;
      case ContextKind::Mgm:
        save_model(path, name, *static_cast<const MgmModel*>(s));
        break;
    }
  }
}

FittedModels fit_models(const ExperimentConfig& cfg, const std::vector<FusionConfig>& grid,
                        const SplitDataset& split, const FrequencyMatrix& r, std::uint64_t seed,
                        SeedRecord& record, StageTimer& timer) {
  bool need_mf = false, need_ncf = false;
  std::vector<ContextKind> kinds;
  for (const auto& g : grid) {
    need_mf |= g.base != BaseModel::None;
    need_ncf |= g.base == BaseModel::Ncf;
    for (auto c : g.contexts) {
      if (std::find(kinds.begin(), kinds.end(), c) == kinds.end()) kinds.push_back(c);
    }
  }

  FittedModels fm;
  const auto& h = cfg.hyper;
  if (need_mf) {
    const auto s = derive_seed(seed, "pfm");
    record.components.emplace_back("pfm", s);
    fm.mf = timer.run("train_pfm", [&] { return train_pfm(r, h.pfm, s); });
  }
  if (need_ncf) {
    const auto sample_seed = derive_seed(seed, "train-negatives");
    const auto s = derive_seed(seed, "ncf");
    record.components.emplace_back("train-negatives", sample_seed);
    record.components.emplace_back("ncf", s);
    fm.ncf = timer.run("train_ncf", [&] {
      const auto samples = build_training_samples(split, sample_seed);
      return train_ncf(samples, *fm.mf, h.ncf, s);
    });
  }
  for (auto kind : kinds) {
    auto scorer = timer.run("fit_" + std::string(to_string(kind)), [&]() -> std::unique_ptr<Scorer> {
      switch (kind) {
        case ContextKind::Geo:
          return std::make_unique<GeoKdeModel>(
              GeoKdeModel::fit(r, split.train.pois, {h.kde_min_bandwidth_km, false}));
        case ContextKind::GeoUniversal:
          return std::make_unique<GeoKdeModel>(
              GeoKdeModel::fit(r, split.train.pois, {h.kde_min_bandwidth_km, true}));
        case ContextKind::Temporal:
          return std::make_unique<TemporalScorer>(TemporalScorer::fit(split.train, h.amc_alpha));
        case ContextKind::Social:
          return std::make_unique<SocialPowerLawModel>(
              SocialPowerLawModel::fit(r, split.train.social));
        case ContextKind::Categorical:
          return std::make_unique<CategoricalModel>(
              CategoricalModel::fit(r, split.train.pois, split.train.has_categories));
        case ContextKind::Fcf:
          return std::make_unique<FcfModel>(FcfModel::fit(r, split.train.social));
        case ContextKind::Mgm:
          return std::make_unique<MgmModel>(MgmModel::fit(r, split.train.pois, h.mgm));
      }
      throw ModelError("unknown context");
    });
    fm.contexts.emplace(kind, std::move(scorer));
  }
  return fm;
}

}  // namespace

ResultsTable run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto grid = cfg.grid();
  const auto threads = worker_count();
  const auto& ev = cfg.evaluation;
  std::map<std::string, double> wall;
  StageTimer timer(wall);

  ResultsTable table;
  table.config = cfg;

  // per_model[m][metric x K][unit]
  const std::size_t num_cells = ev.metrics.size() * ev.k.size();
  std::vector<std::vector<std::vector<double>>> values(grid.size(),
                                                       std::vector<std::vector<double>>(num_cells));

  std::optional<Dataset> loaded;  // file datasets are read once
  for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
    const auto seed = cfg.seeds[si];
    SeedRecord record{seed, {}};
    spdlog::info("seed {} ({}/{})", seed, si + 1, cfg.seeds.size());

    Dataset raw;
    if (cfg.dataset.kind == DatasetSpec::Kind::Files) {
      if (!loaded) loaded = timer.run("load", [&] { return load_dataset(cfg.dataset.paths); });
      raw = *loaded;
    } else {
      record.components.emplace_back("synthetic", derive_seed(seed, "synthetic"));
      raw = timer.run("synthesize", [&] { return materialize_dataset(cfg.dataset, seed); });
    }
    validate_against_dataset(cfg, raw);
    table.dataset_stats.push_back({seed, "raw", dataset_stats(raw)});

    auto data = timer.run("filter", [&] { return filter_dataset(raw, cfg.filter); });
    table.dataset_stats.push_back({seed, "filtered", dataset_stats(data)});
    if (data.num_checkins() == 0) throw DataError("no check-ins left after filtering");

    const auto split = timer.run("split", [&] { return temporal_split(data, cfg.split); });
    const auto r = build_frequency_matrix(split.train);

    auto fitted = fit_models(cfg, grid, split, r, seed, record, timer);
    if (si == 0) {
      if (fitted.mf) table.pfm_trace = fitted.mf->trace;
      if (fitted.ncf) table.ncf_loss_trace = fitted.ncf->loss_trace;
    }
    if (cfg.save_models) {
      save_fitted(fitted, cfg.output_dir / "models" / ("seed-" + std::to_string(seed)));
    }

    const auto neg_seed = derive_seed(seed, "eval-negatives");
    record.components.emplace_back("eval-negatives", neg_seed);
    const auto tasks = timer.run("sample_candidates", [&] {
      const auto negatives = sample_negatives(split, ev.mode, neg_seed, ev.negatives);
      return build_evaluation_users(split, negatives, ev.mode);
    });
    spdlog::info("seed {}: {} users, {} POIs, {} evaluated users", seed, data.num_users(),
                 data.num_pois(), tasks.size());

    const std::size_t unit_base = table.units.size();
    std::map<UserIndex, std::size_t> unit_of;
    for (const auto& t : tasks) {
      unit_of[t.user] = table.units.size();
      table.units.push_back({si, t.user, data.users.id(t.user)});
    }

    for (std::size_t m = 0; m < grid.size(); ++m) {
      std::vector<const Scorer*> contexts;
      for (auto c : grid[m].contexts) contexts.push_back(fitted.contexts.at(c).get());
      const FusionRecommender rec(grid[m], fitted.base(grid[m].base), contexts);
      for (auto& cell : values[m]) cell.resize(table.units.size());
      std::vector<RecommendationList> lists(cfg.save_recommendations ? tasks.size() : 0);

      timer.run("evaluate", [&] {
        parallel_for(tasks.size(), threads, [&](std::size_t i) {
          const auto& task = tasks[i];
          auto list = rec.recommend(task.user, task.candidates);
          const auto ranked = list.pois();
          std::size_t cell = 0;
          for (auto metric : ev.metrics) {
            for (auto k : ev.k) {
              values[m][cell++][unit_base + i] = metric_at_k(metric, ranked, task.relevant, k);
            }
          }
          if (!lists.empty()) lists[i] = std::move(list);
        });
        return 0;
      });
      if (cfg.save_recommendations) {
        const auto dir = cfg.output_dir / "recommendations";
        std::filesystem::create_directories(dir);
        write_recommendations(dir / (cfg.models[m] + "-seed-" + std::to_string(seed) + ".tsv"), data,
                              lists);
      }
    }

    timer.run("behavior", [&] {
      for (auto& p : behavior_profiles(split.train, ev.aspect_statistic)) {
        ProfileRow row{si, data.users.id(p.user), std::nullopt, p};
        if (auto it = unit_of.find(p.user); it != unit_of.end()) row.unit = it->second;
        table.profiles.push_back(std::move(row));
      }
      return 0;
    });

    if (si == 0) table.first_dataset = std::make_shared<const Dataset>(std::move(data));
    table.seeds.push_back(std::move(record));
  }

  std::vector<UserIndex> unit_ids(table.units.size());
  for (std::size_t i = 0; i < unit_ids.size(); ++i) unit_ids[i] = static_cast<UserIndex>(i);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    std::size_t cell = 0;
    for (auto metric : ev.metrics) {
      for (auto k : ev.k) {
        table.rows.push_back({cfg.models[m], metric, k, unit_ids, std::move(values[m][cell++])});
      }
    }
  }
  if (table.units.empty()) throw DataError("no user has a held-out POI to evaluate");

  timer.run("analysis", [&] {
    analyze(table);
    return 0;
  });
  for (const auto& [stage, secs] : wall) table.wall_times.emplace_back(stage, secs);
  return table;
}

void analyze(ResultsTable& table) {
  const auto& cfg = table.config;
  const auto& ev = cfg.evaluation;

  table.significance.clear();
  for (std::size_t a = 0; a < cfg.models.size(); ++a) {
    for (std::size_t b = a + 1; b < cfg.models.size(); ++b) {
      for (auto metric : ev.metrics) {
        for (auto k : ev.k) {
          const auto& ra = table.find(cfg.models[a], metric, k);
          const auto& rb = table.find(cfg.models[b], metric, k);
          SignificanceEntry e{cfg.models[a], cfg.models[b], metric, k, ra.mean(), rb.mean(), {}};
          if (ra.per_user.size() >= 2) e.test = paired_ttest(ra.per_user, rb.per_user);
          table.significance.push_back(std::move(e));
        }
      }
    }
  }

  table.normality.clear();
  for (const auto& r : table.rows) table.normality.push_back(normality_diagnostic(r.per_user));

  // CD ranking and buckets use the configured metric@K, computed on the fly
  // when it is not among the reported cells.
  const bool have_cd_cell =
      std::find(ev.metrics.begin(), ev.metrics.end(), ev.cd_metric) != ev.metrics.end() &&
      std::find(ev.k.begin(), ev.k.end(), ev.cd_k) != ev.k.end();
  std::vector<std::vector<double>> focus;
  if (have_cd_cell) {
    for (const auto& m : cfg.models) focus.push_back(table.find(m, ev.cd_metric, ev.cd_k).per_user);
  }

  table.cd.reset();
  table.cd_note.clear();
  if (!have_cd_cell) {
    table.cd_note = "CD metric " + std::string(to_string(ev.cd_metric)) + "@" +
                    std::to_string(ev.cd_k) + " is not among the evaluated cells";
  } else if (cfg.models.size() < 2) {
    table.cd_note = "CD ranking needs at least two models";
  } else {
    table.cd = wilcoxon_holm_cd(cfg.models, focus);
  }

  table.buckets.clear();
  table.bucket_notes.clear();
  if (have_cd_cell) {
    std::vector<BehaviorProfile> by_unit;
    std::vector<UserIndex> units;
    for (const auto& row : table.profiles) {
      if (!row.unit) continue;
      auto p = row.profile;
      p.user = static_cast<UserIndex>(*row.unit);
      by_unit.push_back(p);
    }
    for (std::size_t i = 0; i < table.units.size(); ++i) units.push_back(static_cast<UserIndex>(i));
    for (auto aspect : {Aspect::Geo, Aspect::Temporal, Aspect::Exploration}) {
      try {
        table.buckets.push_back(bucketize_and_aggregate(by_unit, aspect, units, cfg.models, focus));
      } catch (const Error& e) {
        table.bucket_notes.push_back(std::string(to_string(aspect)) + ": " + e.what());
      }
    }
  } else {
    table.bucket_notes.push_back(table.cd_note);
  }

  std::vector<double> geo, temporal, explore;
  for (const auto& row : table.profiles) {
    const auto& p = row.profile;
    if (!p.distance_km || !p.gap_hours) continue;
    geo.push_back(*p.distance_km);
    temporal.push_back(*p.gap_hours);
    explore.push_back(p.exploration_factor);
  }
  table.correlations = {};
  table.correlations.users = geo.size();
  if (geo.size() >= 2) {
    table.correlations.geo_exploration = pearson_r(geo, explore);
    table.correlations.temporal_exploration = pearson_r(temporal, explore);
    table.correlations.geo_temporal = pearson_r(geo, temporal);
  }
}

}  // namespace ctxrec
