#include "ctxrec/reports.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "ctxrec/csv.hpp"
#include "ctxrec/error.hpp"
#include "ctxrec/serialize.hpp"
#include "ctxrec/svg.hpp"

#ifndef CTXREC_VERSION
#define CTXREC_VERSION "unknown"
#endif

namespace ctxrec {

namespace fs = std::filesystem;

namespace {

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string opt(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string contexts_of(const ExperimentConfig& cfg, const std::string& model) {
  return context_letters(parse_model_label(model, cfg.normalization, cfg.list_length()));
}

void write_results(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "results.csv", {"model", "contexts", "metric", "K", "mean", "stderr", "n_users"});
  for (const auto& r : t.rows) {
    w.row({r.model, contexts_of(t.config, r.model), std::string(to_string(r.metric)), num(r.k),
           num(r.mean()), num(r.standard_error()), num(r.per_user.size())});
  }
  w.close();
}

void write_per_user(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "per_user.csv",
              {"model", "metric", "K", "seed", "unit", "user_index", "user_id", "value"});
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.per_user.size(); ++i) {
      const auto& u = t.units.at(r.users[i]);
      w.row({r.model, std::string(to_string(r.metric)), num(r.k),
             std::to_string(t.config.seeds.at(u.seed_index)), num(static_cast<std::size_t>(r.users[i])),
             num(static_cast<std::size_t>(u.user)), u.user_id, num(r.per_user[i])});
    }
  }
  w.close();
}

void write_significance(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "significance.csv", {"metric", "K", "model_a", "model_b", "mean_a", "mean_b",
                                          "t_statistic", "p_value", "significant", "degenerate"});
  for (const auto& s : t.significance) {
    w.row({std::string(to_string(s.metric)), num(s.k), s.model_a, s.model_b, num(s.mean_a),
           num(s.mean_b), num(s.test.statistic), num(s.test.p_value),
           s.test.significant() ? "true" : "false", s.test.degenerate ? "true" : "false"});
  }
  w.close();
}

void write_normality(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "normality.csv", {"model", "metric", "K", "skewness", "excess_kurtosis",
                                       "jarque_bera", "p_value"});
  for (std::size_t i = 0; i < t.rows.size() && i < t.normality.size(); ++i) {
    const auto& r = t.rows[i];
    const auto& d = t.normality[i];
    w.row({r.model, std::string(to_string(r.metric)), num(r.k), num(d.skewness),
           num(d.excess_kurtosis), num(d.statistic), num(d.p_value)});
  }
  w.close();
}

/// Markdown table, one column per metric@K; superscripts list the models a
/// cell significantly beats (by their letter).
void write_results_table(const ResultsTable& t, const fs::path& dir) {
  const auto& cfg = t.config;
  std::map<std::string, char> letter;
  for (std::size_t i = 0; i < cfg.models.size(); ++i) {
    letter[cfg.models[i]] = static_cast<char>(i < 26 ? 'a' + i : 'A' + (i - 26) % 26);
  }
  std::string s = "| model |";
  std::string rule = "|---|";
  for (auto m : cfg.evaluation.metrics) {
    for (auto k : cfg.evaluation.k) {
      s += fmt::format(" {}@{} |", to_string(m), k);
      rule += "---|";
    }
  }
  s += "\n" + rule + "\n";
  for (const auto& model : cfg.models) {
    s += fmt::format("| {} ({}) |", model, letter[model]);
    for (auto m : cfg.evaluation.metrics) {
      for (auto k : cfg.evaluation.k) {
        std::string sup;
        for (const auto& other : t.beats(model, m, k)) sup += letter[other];
        std::sort(sup.begin(), sup.end());
        s += fmt::format(" {:.4f}{} |", t.find(model, m, k).mean(),
                         sup.empty() ? "" : "<sup>" + sup + "</sup>");
      }
    }
    s += "\n";
  }
  s += "\nSuperscripts: paired two-tailed t-test, p < 0.05, higher mean.\n";
  write_text(dir / "results_table.md", s);
}

void write_cd(const ResultsTable& t, const fs::path& dir) {
  const auto& ev = t.config.evaluation;
  std::string s = fmt::format("Critical-difference ranking on {}@{} ({} users)\n",
                              to_string(ev.cd_metric), ev.cd_k, t.units.size());
  if (!t.cd) {
    s += "not available: " + t.cd_note + "\n";
    write_text(dir / "cd_report.txt", s);
    return;
  }
  const auto& cd = *t.cd;
  s += "\nAverage ranks (1 = best):\n";
  for (auto k : cd.order()) s += fmt::format("  {:>8.4f}  {}\n", cd.average_ranks[k], cd.models[k]);
  s += "\nPairwise Wilcoxon signed-rank tests, Holm-adjusted (alpha = 0.05):\n";
  for (const auto& c : cd.comparisons) {
    s += fmt::format("  {} vs {}: W = {}, p = {}, p_holm = {}{}\n", cd.models[c.first],
                     cd.models[c.second], num(c.statistic), num(c.p_value), num(c.p_adjusted),
                     c.significant ? "  *" : "");
  }
  s += "\nCliques (not significantly different):\n";
  if (cd.cliques.empty()) s += "  none\n";
  for (const auto& clique : cd.cliques) {
    s += " ";
    for (auto k : clique) s += " " + cd.models[k];
    s += "\n";
  }
  write_text(dir / "cd_report.txt", s);
  write_text(dir / "cd_diagram.svg",
             cd_diagram_svg(cd, fmt::format("{}@{}", to_string(ev.cd_metric), ev.cd_k)));
}

void write_buckets(const ResultsTable& t, const fs::path& dir) {
  const auto& ev = t.config.evaluation;
  CsvWriter w(dir / "bucketed_report.csv", {"aspect", "bucket", "upper_boundary", "users", "model",
                                             "metric", "K", "mean", "degenerate"});
  for (const auto& b : t.buckets) {
    for (std::size_t m = 0; m < b.models.size(); ++m) {
      for (std::size_t q = 0; q < kNumBuckets; ++q) {
        w.row({std::string(to_string(b.aspect)), num(q + 1), num(b.boundaries[q]), num(b.sizes[q]),
               b.models[m], std::string(to_string(ev.cd_metric)), num(ev.cd_k),
               std::isnan(b.means[m][q]) ? std::string() : num(b.means[m][q]),
               b.degenerate ? "true" : "false"});
      }
    }
    std::vector<std::string> labels;
    for (double x : b.boundaries) labels.push_back(fmt::format("{:.3g}", x));
    std::vector<LineSeries> series;
    for (std::size_t m = 0; m < b.models.size(); ++m) {
      series.push_back({b.models[m], std::vector<double>(b.means[m].begin(), b.means[m].end())});
    }
    const auto aspect = std::string(to_string(b.aspect));
    write_text(dir / ("bucketed_" + aspect + ".svg"),
               line_chart_svg(aspect + " quintiles", labels, series,
                              fmt::format("{}@{}", to_string(ev.cd_metric), ev.cd_k)));
  }
  w.close();
  if (!t.bucket_notes.empty()) {
    std::string s;
    for (const auto& n : t.bucket_notes) s += n + "\n";
    write_text(dir / "bucketed_notes.txt", s);
  } else if (fs::exists(dir / "bucketed_notes.txt")) {
    fs::remove(dir / "bucketed_notes.txt");
  }
}

void write_correlations(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "behavior_correlations.csv", {"pair", "pearson_r", "users"});
  const auto& c = t.correlations;
  w.row({"geo-exploration", opt(c.geo_exploration), num(c.users)});
  w.row({"temporal-exploration", opt(c.temporal_exploration), num(c.users)});
  w.row({"geo-temporal", opt(c.geo_temporal), num(c.users)});
  w.close();
}

void write_profiles(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "behavior_profiles.csv", {"seed", "user_id", "unit", "checkins",
                                               "exploration_factor", "distance_km", "gap_hours"});
  for (const auto& row : t.profiles) {
    const auto& p = row.profile;
    w.row({std::to_string(t.config.seeds.at(row.seed_index)), row.user_id,
           row.unit ? num(*row.unit) : std::string(), num(p.checkins), num(p.exploration_factor),
           opt(p.distance_km), opt(p.gap_hours)});
  }
  w.close();
}

void write_dataset_stats(const ResultsTable& t, const fs::path& dir) {
  CsvWriter w(dir / "dataset_stats.csv",
              {"seed", "stage", "users", "pois", "checkins", "unique_checkins", "categories",
               "social_links", "checkins_per_user", "checkins_per_poi", "sparsity"});
  for (const auto& r : t.dataset_stats) {
    const auto& s = r.stats;
    w.row({std::to_string(r.seed), r.stage, num(s.users), num(s.pois), num(s.checkins),
           num(s.unique_checkins), num(s.categories), num(s.social_links), num(s.checkins_per_user),
           num(s.checkins_per_poi), num(s.sparsity)});
  }
  w.close();
}

void write_traces(const ResultsTable& t, const fs::path& dir) {
  CsvWriter p(dir / "pfm_trace.csv", {"iteration", "objective", "step"});
  for (const auto& tp : t.pfm_trace) p.row({num(tp.iteration), num(tp.objective), num(tp.step)});
  p.close();
  CsvWriter n(dir / "ncf_trace.csv", {"epoch", "loss"});
  for (std::size_t e = 0; e < t.ncf_loss_trace.size(); ++e) {
    n.row({num(e + 1), num(t.ncf_loss_trace[e])});
  }
  n.close();
}

void write_manifest(const ResultsTable& t, const fs::path& dir) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : t.seeds) {
    nlohmann::json comps = nlohmann::json::object();
    for (const auto& [name, value] : s.components) comps[name] = value;
    seeds.push_back({{"seed", s.seed}, {"components", comps}});
  }
  nlohmann::json wall = nlohmann::json::object();
  for (const auto& [stage, secs] : t.wall_times) wall[stage] = secs;
  const nlohmann::json m = {
      {"format", "ctxrec-manifest"},
      {"version", 1},
      {"code_version", CTXREC_VERSION},
      {"config", config_to_json(t.config)},
      {"config_hash", config_hash(t.config)},
      {"seed_derivation", "component = splitmix64(master ^ splitmix64(fnv1a64(name)))"},
      {"seeds", seeds},
      {"evaluated_units", t.units.size()},
      {"wall_time_seconds", wall}};
  save_json(dir / "manifest.json", m);
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir.string() +
                    (ec ? ": " + ec.message() : std::string()));
  }
}

}  // namespace

void emit_analysis_reports(const ResultsTable& table, const fs::path& out_dir) {
  if (table.rows.empty() || table.units.empty()) throw Error("no results to report");
  prepare_dir(out_dir);
  write_results(table, out_dir);
  write_significance(table, out_dir);
  write_normality(table, out_dir);
  write_results_table(table, out_dir);
  write_cd(table, out_dir);
  write_buckets(table, out_dir);
  write_correlations(table, out_dir);
}

void emit_reports(const ResultsTable& table, const fs::path& out_dir) {
  emit_analysis_reports(table, out_dir);
  write_per_user(table, out_dir);
  write_profiles(table, out_dir);
  write_dataset_stats(table, out_dir);
  write_traces(table, out_dir);
  if (table.first_dataset) write_index_map(*table.first_dataset, out_dir / "index_map.tsv");
  write_manifest(table, out_dir);
}

ExperimentConfig config_from_manifest(const fs::path& manifest) {
  const auto j = load_json(manifest);
  if (j.value("format", "") != "ctxrec-manifest") {
    throw DataError(manifest.string() + ": not a ctxrec manifest");
  }
  return config_from_json(j.at("config"));
}

namespace {

template <class T>
T parse_field(const std::string& s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  return parse_field<double>(s, "number");
}

}  // namespace

ResultsTable load_results(const fs::path& dir) {
  ResultsTable t;
  t.config = config_from_manifest(dir / "manifest.json");
  const auto& cfg = t.config;
  std::map<std::uint64_t, std::size_t> seed_index;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) seed_index[cfg.seeds[i]] = i;

  const auto per_user = read_csv(dir / "per_user.csv");
  const auto c_model = per_user.column("model"), c_metric = per_user.column("metric"),
             c_k = per_user.column("K"), c_seed = per_user.column("seed"),
             c_unit = per_user.column("unit"), c_uidx = per_user.column("user_index"),
             c_uid = per_user.column("user_id"), c_value = per_user.column("value");

  std::map<std::tuple<std::string, Metric, std::size_t>, std::map<std::size_t, double>> cells;
  std::map<std::size_t, EvaluationUnit> units;
  for (const auto& row : per_user.rows) {
    const auto seed = parse_field<std::uint64_t>(row[c_seed], "seed");
    auto it = seed_index.find(seed);
    if (it == seed_index.end()) throw DataError("per_user.csv: seed not in manifest");
    const auto unit = parse_field<std::size_t>(row[c_unit], "unit");
    units[unit] = {it->second, parse_field<UserIndex>(row[c_uidx], "user index"), row[c_uid]};
    cells[{row[c_model], parse_metric(row[c_metric]), parse_field<std::size_t>(row[c_k], "K")}]
         [unit] = parse_double(row[c_value]);
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!units.count(i)) throw DataError("per_user.csv: unit indices are not contiguous");
    t.units.push_back(units[i]);
  }
  for (const auto& model : cfg.models) {
    for (auto metric : cfg.evaluation.metrics) {
      for (auto k : cfg.evaluation.k) {
        auto it = cells.find({model, metric, k});
        if (it == cells.end() || it->second.size() != t.units.size()) {
          throw DataError(fmt::format("per_user.csv: incomplete values for {} {}@{}", model,
                                      to_string(metric), k));
        }
        MetricResult r{model, metric, k, {}, {}};
        for (const auto& [unit, v] : it->second) {
          r.users.push_back(static_cast<UserIndex>(unit));
          r.per_user.push_back(v);
        }
        t.rows.push_back(std::move(r));
      }
    }
  }

  const auto prof = read_csv(dir / "behavior_profiles.csv");
  const auto p_seed = prof.column("seed"), p_uid = prof.column("user_id"),
             p_unit = prof.column("unit"), p_n = prof.column("checkins"),
             p_ef = prof.column("exploration_factor"), p_d = prof.column("distance_km"),
             p_g = prof.column("gap_hours");
  for (const auto& row : prof.rows) {
    ProfileRow pr;
    pr.seed_index = seed_index.at(parse_field<std::uint64_t>(row[p_seed], "seed"));
    pr.user_id = row[p_uid];
    if (!row[p_unit].empty()) pr.unit = parse_field<std::size_t>(row[p_unit], "unit");
    pr.profile.user = pr.unit ? t.units.at(*pr.unit).user : 0;
    pr.profile.checkins = parse_field<std::size_t>(row[p_n], "checkins");
    pr.profile.exploration_factor = parse_double(row[p_ef]);
    if (!row[p_d].empty()) pr.profile.distance_km = parse_double(row[p_d]);
    if (!row[p_g].empty()) pr.profile.gap_hours = parse_double(row[p_g]);
    t.profiles.push_back(std::move(pr));
  }
  analyze(t);
  return t;
}

}  // namespace ctxrec
