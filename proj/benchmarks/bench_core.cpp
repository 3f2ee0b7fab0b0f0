#include <benchmark/benchmark.h>

#include <numeric>

#include "ctxrec/dataset.hpp"
#include "ctxrec/geo_kde.hpp"
#include "ctxrec/metrics.hpp"
#include "ctxrec/pfm.hpp"
#include "ctxrec/random.hpp"
#include "ctxrec/synthetic.hpp"
#include "ctxrec/temporal.hpp"

namespace {

using namespace ctxrec;

struct Fixture {
  SplitDataset split;
  FrequencyMatrix train;
  std::vector<PoiIndex> candidates;  // every POI
};

const Fixture& fixture() {
  static const Fixture f = [] {
    SyntheticConfig cfg;
    cfg.num_users = 200;
    cfg.num_pois = 1000;
    cfg.num_checkins = 20000;
    Fixture out;
    out.split = temporal_split(generate_synthetic(cfg, 1));
    out.train = build_frequency_matrix(out.split.train);
    out.candidates.resize(cfg.num_pois);
    std::iota(out.candidates.begin(), out.candidates.end(), 0);
    return out;
  }();
  return f;
}

void BM_KdeScoreCandidates(benchmark::State& state) {
  const auto& f = fixture();
  const auto model = GeoKdeModel::fit(f.train, f.split.train.pois);
  std::vector<double> out(f.candidates.size());
  UserIndex u = 0;
  for (auto _ : state) {
    model.score_candidates(u, f.candidates, out);
    benchmark::DoNotOptimize(out.data());
    u = (u + 1) % static_cast<UserIndex>(f.train.num_users());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.candidates.size()));
}
BENCHMARK(BM_KdeScoreCandidates);

void BM_AmcDistribution(benchmark::State& state) {
  const auto& f = fixture();
  const auto model = TemporalScorer::fit(f.split.train, 0.1);
  std::vector<double> out(f.candidates.size());
  UserIndex u = 0;
  for (auto _ : state) {
    model.score_candidates(u, f.candidates, out);
    benchmark::DoNotOptimize(out.data());
    u = (u + 1) % static_cast<UserIndex>(f.train.num_users());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.candidates.size()));
}
BENCHMARK(BM_AmcDistribution);

void BM_RankingMetrics(benchmark::State& state) {
  Rng rng(3);
  std::vector<PoiIndex> ranked(1000);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::shuffle(ranked.begin(), ranked.end(), rng);
  std::vector<PoiIndex> relevant(ranked.begin(), ranked.begin() + 30);
  std::sort(relevant.begin(), relevant.end());
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(precision_at_k(ranked, relevant, k));
    benchmark::DoNotOptimize(recall_at_k(ranked, relevant, k));
    benchmark::DoNotOptimize(ndcg_at_k(ranked, relevant, k));
  }
}
BENCHMARK(BM_RankingMetrics)->Arg(10)->Arg(20);

void BM_PfmIteration(benchmark::State& state) {
  const auto& f = fixture();
  const auto factors = static_cast<std::size_t>(state.range(0));
  const auto prior = PfmPrior::uniform(factors, 2.0, 0.5);
  Rng rng(5);
  std::uniform_real_distribution<double> init(0.01, 0.1);
  Eigen::MatrixXd users(factors, f.train.num_users()), pois(factors, f.train.num_pois());
  for (Eigen::Index i = 0; i < users.size(); ++i) users.data()[i] = init(rng);
  for (Eigen::Index i = 0; i < pois.size(); ++i) pois.data()[i] = init(rng);
  Eigen::MatrixXd gu, gp;
  for (auto _ : state) {
    pfm_gradient(f.train, users, pois, prior, gu, gp);
    benchmark::DoNotOptimize(pfm_objective(f.train, users, pois, prior));
  }
}
BENCHMARK(BM_PfmIteration)->Arg(10)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
