#pragma once

#include <nlohmann/json_fwd.hpp>

#include <utility>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

/// Location-to-location transition counts from consecutive check-ins.
class AmcTransitionGraph {
 public:
  AmcTransitionGraph() = default;
  AmcTransitionGraph(std::size_t num_pois, double alpha);

  static AmcTransitionGraph build(const Dataset& train, double alpha);

  /// Counts every consecutive pair, self-transitions included.
  void add_sequence(std::span<const Visit> visits);

  std::uint32_t transitions(PoiIndex from, PoiIndex to) const;
  std::uint32_t out_count(PoiIndex from) const { return out_count_.at(from); }
  double transition_probability(PoiIndex from, PoiIndex to) const;
  std::span<const std::pair<PoiIndex, std::uint32_t>> edges(PoiIndex from) const {
    return edges_.at(from);
  }
  std::size_t num_pois() const { return edges_.size(); }
  double alpha() const { return alpha_; }

  /// Decay-weighted mixture of the transition rows of every history POI,
  /// evaluated at `candidate`. The most recent visit has weight 1 and the
  /// i-th has 2^(-alpha (n - i)).
  double score(std::span<const PoiIndex> history, PoiIndex candidate) const;
  /// Same mixture for every POI at once; `out` has num_pois() entries.
  void distribution(std::span<const PoiIndex> history, std::span<double> out) const;

  nlohmann::json to_json() const;
  static AmcTransitionGraph from_json(const nlohmann::json& j);
  friend bool operator==(const AmcTransitionGraph&, const AmcTransitionGraph&) = default;

 private:
  std::vector<double> history_weights(std::span<const PoiIndex> history) const;

  double alpha_ = 0.0;
  std::vector<std::vector<std::pair<PoiIndex, std::uint32_t>>> edges_;  // sorted by target
  std::vector<std::uint32_t> out_count_;
};

/// Additive Markov chain over each user's training sequence.
class TemporalScorer final : public Scorer {
 public:
  TemporalScorer(AmcTransitionGraph graph, std::vector<std::vector<PoiIndex>> histories);
  static TemporalScorer fit(const Dataset& train, double alpha);

  ContextScore score(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;
  const AmcTransitionGraph& graph() const { return graph_; }

 private:
  AmcTransitionGraph graph_;
  std::vector<std::vector<PoiIndex>> histories_;
};

}  // namespace ctxrec
