#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

enum class Metric { Precision, Recall, Ndcg };

/// "Pre", "Rec", "nDCG".
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

/// Number of the first `k` ranked POIs found in `relevant` (sorted, unique).
std::size_t hits_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                      std::size_t k);

/// hits / k; a list shorter than k still divides by k.
double precision_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                      std::size_t k);
/// hits / |relevant|.
double recall_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                   std::size_t k);
/// Binary-relevance DCG over the ideal DCG of min(k, |relevant|) hits.
double ndcg_at_k(std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                 std::size_t k);

double metric_at_k(Metric m, std::span<const PoiIndex> ranked, std::span<const PoiIndex> relevant,
                   std::size_t k);

/// One metric at one cut-off for one model, per evaluated user.
struct MetricResult {
  std::string model;
  Metric metric = Metric::Ndcg;
  std::size_t k = 10;
  std::vector<UserIndex> users;
  std::vector<double> per_user;

  double mean() const;
  /// Standard error of the mean (0 for fewer than two users).
  double standard_error() const;
};

}  // namespace ctxrec
