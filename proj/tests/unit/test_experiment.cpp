#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ctxrec/error.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/reports.hpp"
#include "ctxrec/serialize.hpp"
#include "toy.hpp"

using namespace ctxrec;

namespace {

ExperimentConfig tiny(std::vector<std::string> models) {
  ExperimentConfig cfg;
  cfg.name = "tiny";
  cfg.dataset.synthetic.num_users = 40;
  cfg.dataset.synthetic.num_pois = 150;
  cfg.dataset.synthetic.num_checkins = 2400;
  cfg.filter = {5, 1, false};
  cfg.models = std::move(models);
  cfg.hyper.pfm.factors = 6;
  cfg.hyper.pfm.iterations = 40;
  cfg.hyper.ncf.factors = 6;
  cfg.hyper.ncf.hidden1 = 8;
  cfg.hyper.ncf.hidden2 = 4;
  cfg.hyper.ncf.epochs = 2;
  cfg.evaluation.negatives = 50;
  cfg.seeds = {7};
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("grid arithmetic: 3 models x 3 metrics x 2 K") {
    const auto cfg = tiny({"M", "M-(G)", "M-(GT)"});
    const auto t = run_experiment(cfg);
    CHECK(t.rows.size() == 18);
    CHECK(t.rows[0].model == "M");
    CHECK(t.rows[0].metric == Metric::Precision);
    CHECK(t.rows[0].k == 10);
    CHECK(t.rows[17].model == "M-(GT)");
    for (const auto& r : t.rows) {
      CHECK(r.users.size() == t.units.size());
      CHECK(r.per_user.size() == t.units.size());
      for (double v : r.per_user) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    CHECK(t.significance.size() == 3 * 6);
    CHECK(t.cd.has_value());
    CHECK_FALSE(t.profiles.empty());
    CHECK_FALSE(t.pfm_trace.empty());
    CHECK(&t.find("M-(G)", Metric::Ndcg, 20) == &t.rows[5 + 6]);
    CHECK_THROWS_AS(t.find("N", Metric::Ndcg, 20), Error);
  }

  TEST_CASE("same seed gives byte-identical reports, thread count aside") {
    auto cfg = tiny({"M", "M-(T)", "N-(S)", "GeoSoCa-(GSC)", "FCFKDEAMC-(SGT)", "PFMMGM-(MG)"});
    const auto a_dir = toy::scratch_dir("det-a");
    const auto b_dir = toy::scratch_dir("det-b");
    setenv("CTXREC_THREADS", "1", 1);
    emit_reports(run_experiment(cfg), a_dir);
    setenv("CTXREC_THREADS", "3", 1);
    emit_reports(run_experiment(cfg), b_dir);
    for (const char* f : {"results.csv", "per_user.csv", "significance.csv", "normality.csv",
                          "cd_report.txt", "bucketed_report.csv", "behavior_profiles.csv",
                          "dataset_stats.csv", "pfm_trace.csv", "ncf_trace.csv", "results_table.md"}) {
      CAPTURE(f);
      CHECK(std::filesystem::exists(a_dir / f));
      CHECK(slurp(a_dir / f) == slurp(b_dir / f));
    }
    const auto manifest = load_json(a_dir / "manifest.json");
    CHECK(manifest.at("format") == "ctxrec-manifest");
    CHECK(manifest.at("config_hash") == config_hash(cfg));
  }

  TEST_CASE("report regeneration from a run directory") {
    const auto cfg = tiny({"M", "M-(G)"});
    const auto dir = toy::scratch_dir("reload");
    const auto t = run_experiment(cfg);
    emit_reports(t, dir);
    const auto back = load_results(dir);
    CHECK(back.config == cfg);
    CHECK(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i].per_user == t.rows[i].per_user);
    const auto again = toy::scratch_dir("reload-out");
    emit_analysis_reports(back, again);
    CHECK(slurp(again / "results.csv") == slurp(dir / "results.csv"));
    CHECK(slurp(again / "significance.csv") == slurp(dir / "significance.csv"));
  }

  TEST_CASE("results.csv columns") {
    const auto cfg = tiny({"M"});
    const auto dir = toy::scratch_dir("columns");
    emit_reports(run_experiment(cfg), dir);
    const auto text = slurp(dir / "results.csv");
    CHECK(text.rfind("model,contexts,metric,K,mean,stderr,n_users\r\n", 0) == 0);
  }

  TEST_CASE("categorical grid on category-less data fails before training") {
    auto cfg = tiny({"M", "N-(C)"});
    cfg.dataset.synthetic.num_categories = 0;
    cfg.dataset.synthetic.liked_categories = 0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  }

  TEST_CASE("empty results cannot be reported") {
    ResultsTable t;
    CHECK_THROWS_AS(emit_reports(t, toy::scratch_dir("empty")), Error);
  }

  TEST_CASE("parallel_for covers every index once and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                      if (i == 6) throw ModelError("boom");
                    }),
                    ModelError);
  }
}
