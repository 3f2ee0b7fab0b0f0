#include "ctxrec/temporal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "ctxrec/error.hpp"

namespace ctxrec {

AmcTransitionGraph::AmcTransitionGraph(std::size_t num_pois, double alpha)
    : alpha_(alpha), edges_(num_pois), out_count_(num_pois, 0) {
  if (!(alpha >= 0.0)) throw ModelError("AMC decay rate must be >= 0");
}

AmcTransitionGraph AmcTransitionGraph::build(const Dataset& train, double alpha) {
  AmcTransitionGraph g(train.num_pois(), alpha);
  for (const auto& visits : train.checkins) g.add_sequence(visits);
  return g;
}

void AmcTransitionGraph::add_sequence(std::span<const Visit> visits) {
  for (std::size_t t = 1; t < visits.size(); ++t) {
    const auto from = visits[t - 1].poi;
    const auto to = visits[t].poi;
    if (from >= edges_.size() || to >= edges_.size()) throw ModelError("AMC: POI out of range");
    auto& row = edges_[from];
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const auto& e, PoiIndex p) { return e.first < p; });
    if (it != row.end() && it->first == to) {
      ++it->second;
    } else {
      row.insert(it, {to, 1});
    }
    ++out_count_[from];
  }
}

std::uint32_t AmcTransitionGraph::transitions(PoiIndex from, PoiIndex to) const {
  const auto& row = edges_.at(from);
  auto it = std::lower_bound(row.begin(), row.end(), to,
                             [](const auto& e, PoiIndex p) { return e.first < p; });
  return (it != row.end() && it->first == to) ? it->second : 0;
}

double AmcTransitionGraph::transition_probability(PoiIndex from, PoiIndex to) const {
  const auto out = out_count(from);
  if (out == 0) return 0.0;
  return static_cast<double>(transitions(from, to)) / out;
}

std::vector<double> AmcTransitionGraph::history_weights(std::span<const PoiIndex> history) const {
  if (history.empty()) throw ModelError("AMC: empty history");
  const auto n = history.size();
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp2(-alpha_ * static_cast<double>(n - 1 - i));
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

double AmcTransitionGraph::score(std::span<const PoiIndex> history, PoiIndex candidate) const {
  if (candidate >= edges_.size()) throw ModelError("AMC: unknown POI " + std::to_string(candidate));
  const auto w = history_weights(history);
  double s = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    s += w[i] * transition_probability(history[i], candidate);
  }
  return s;
}

void AmcTransitionGraph::distribution(std::span<const PoiIndex> history,
                                      std::span<double> out) const {
  if (out.size() != edges_.size()) throw ModelError("AMC: output size mismatch");
  const auto w = history_weights(history);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto from = history[i];
    const auto total = out_count_.at(from);
    if (total == 0) continue;
    const double scale = w[i] / total;
    for (const auto& [to, count] : edges_[from]) out[to] += scale * count;
  }
}

nlohmann::json AmcTransitionGraph::to_json() const {
  return {{"alpha", alpha_}, {"edges", edges_}, {"out_count", out_count_}};
}

AmcTransitionGraph AmcTransitionGraph::from_json(const nlohmann::json& j) {
  AmcTransitionGraph g;
  g.alpha_ = j.at("alpha").get<double>();
  j.at("edges").get_to(g.edges_);
  j.at("out_count").get_to(g.out_count_);
  if (g.edges_.size() != g.out_count_.size()) throw ModelError("AMC: corrupt artifact");
  return g;
}

TemporalScorer::TemporalScorer(AmcTransitionGraph graph,
                               std::vector<std::vector<PoiIndex>> histories)
    : graph_(std::move(graph)), histories_(std::move(histories)) {}

TemporalScorer TemporalScorer::fit(const Dataset& train, double alpha) {
  std::vector<std::vector<PoiIndex>> histories(train.checkins.size());
  for (std::size_t u = 0; u < train.checkins.size(); ++u) {
    for (const auto& v : train.checkins[u]) histories[u].push_back(v.poi);
  }
  return TemporalScorer(AmcTransitionGraph::build(train, alpha), std::move(histories));
}

ContextScore TemporalScorer::score(UserIndex u, PoiIndex l) const {
  return {graph_.score(histories_.at(u), l), ContextTag::Temporal};
}

void TemporalScorer::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                      std::span<double> out) const {
  std::vector<double> dense(graph_.num_pois());
  graph_.distribution(histories_.at(u), dense);
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = dense.at(candidates[i]);
}

}  // namespace ctxrec
