#pragma once

#include <span>
#include <string_view>

#include "ctxrec/types.hpp"

namespace ctxrec {

enum class ContextTag { Geo, Temporal, Social, Categorical, Fcf, Mgm };

std::string_view to_string(ContextTag tag);

struct ContextScore {
  double value = 0.0;
  ContextTag tag = ContextTag::Geo;
};

/// Anything that assigns a real score to (user, POI). Fitted models are
/// immutable, so scoring is safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;

  /// Writes one score per candidate into `out` (same length).
  virtual void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                std::span<double> out) const = 0;
};

}  // namespace ctxrec
