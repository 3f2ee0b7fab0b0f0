#include "ctxrec/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ctxrec/error.hpp"

namespace ctxrec {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Precision: return "Pre";
    case Metric::Recall: return "Rec";
    case Metric::Ndcg: return "nDCG";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  if (s == "Pre") return Metric::Precision;
  if (s == "Rec") return Metric::Recall;
  if (s == "nDCG") return Metric::Ndcg;
  throw ConfigError("unknown metric '" + std::string(s) + "' (expected Pre, Rec or nDCG)");
}

namespace {

void check_args(std::span<const PoiIndex> relevant, std::size_t k, bool need_relevant) {
  if (k == 0) throw Error("metric cut-off K must be >= 1");
  if (need_relevant && relevant.empty()) throw Error("metric needs a non-empty test set");
  if (!std::is_sorted(relevant.begin(), relevant.end())) {
    throw Error("relevant POIs must be sorted");
  }
}

bool is_relevant(std::span<const PoiIndex> relevant, PoiIndex l) {
  return std::binary_search(relevant.begin(), relevant.end(), l);
}

}  // namespace

std::size_t hits_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                      std::size_t k) {
  check_args(relevant, k, false);
  const auto n = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += is_relevant(relevant, ranked[i]) ? 1 : 0;
  return hits;
}

double precision_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                      std::size_t k) {
  return static_cast<double>(hits_at_k(ranked, relevant, k)) / static_cast<double>(k);
}

double recall_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                   std::size_t k) {
  check_args(relevant, k, true);
  return static_cast<double>(hits_at_k(ranked, relevant, k)) /
         static_cast<double>(relevant.size());
}

double ndcg_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                 std::size_t k) {
  check_args(relevant, k, true);
  const auto n = std::min(k, ranked.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_relevant(relevant, ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const auto ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

double metric_at_k(Metric m, std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                   std::size_t k) {
  switch (m) {
    case Metric::Precision: return precision_at_k(ranked, relevant, k);
    case Metric::Recall: return recall_at_k(ranked, relevant, k);
    case Metric::Ndcg: return ndcg_at_k(ranked, relevant, k);
  }
  throw Error("unknown metric");
}

double MetricResult::mean() const {
  if (per_user.empty()) return 0.0;
  double s = 0.0;
  for (double v : per_user) s += v;
  return s / static_cast<double>(per_user.size());
}

double MetricResult::standard_error() const {
  const auto n = per_user.size();
  if (n < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : per_user) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace ctxrec
