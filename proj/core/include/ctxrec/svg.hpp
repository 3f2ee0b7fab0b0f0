#pragma once

#include <string>
#include <vector>

#include "ctxrec/stats.hpp"

namespace ctxrec {

/// Rank axis from 1 to #models, one tick per model, clique bars joining
/// models that are not significantly different.
std::string cd_diagram_svg(const CdRanking& ranking, const std::string& title);

struct LineSeries {
  std::string name;
  std::vector<double> values;  // NaN points are skipped
};

std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<LineSeries>& series, const std::string& y_label);

}  // namespace ctxrec
