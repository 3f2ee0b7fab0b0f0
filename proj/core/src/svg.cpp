#include "ctxrec/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ctxrec {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string cd_diagram_svg(const CdRanking& ranking, const std::string& title) {
  const auto m = ranking.models.size();
  const double width = 720, left = 60, right = 660, axis_y = 70;
  const double row_h = 22;
  const auto order = ranking.order();
  const auto half = (m + 1) / 2;
  const double height = axis_y + 40 + row_h * static_cast<double>(half + ranking.cliques.size()) + 20;
  auto x_of = [&](double rank) {
    if (m <= 1) return left;
    return left + (rank - 1.0) / static_cast<double>(m - 1) * (right - left);
  };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   width / 2, escape(title));
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left, axis_y,
                   right, axis_y);
  for (std::size_t r = 1; r <= m; ++r) {
    const double x = x_of(static_cast<double>(r));
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>\n", x,
                     axis_y - 5, axis_y);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, axis_y - 10, r);
  }
  // Best half labelled on the left, the rest on the right.
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = order[i];
    const double x = x_of(ranking.average_ranks[k]);
    const bool left_side = i < half;
    const double y = axis_y + 30 + row_h * static_cast<double>(left_side ? i : m - 1 - i);
    const double tx = left_side ? left - 10 : right + 10;
    s += fmt::format(
        "<polyline points=\"{0:.2f},{1} {0:.2f},{2} {3:.2f},{2}\" fill=\"none\" stroke=\"#444\"/>\n", x,
        axis_y, y, tx);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"{}\" dy=\"4\">{} ({:.3f})</text>\n",
                     left_side ? tx - 4 : tx + 4, y, left_side ? "end" : "start",
                     escape(ranking.models[k]), ranking.average_ranks[k]);
  }
  for (std::size_t c = 0; c < ranking.cliques.size(); ++c) {
    const auto& clique = ranking.cliques[c];
    double lo = 1e300, hi = -1e300;
    for (auto k : clique) {
      lo = std::min(lo, ranking.average_ranks[k]);
      hi = std::max(hi, ranking.average_ranks[k]);
    }
    const double y = axis_y + 12 + 6 * static_cast<double>(c);
    s += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\" stroke-width=\"4\"/>\n",
        x_of(lo) - 3, y, x_of(hi) + 3, y);
  }
  s += "</svg>\n";
  return s;
}

std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<LineSeries>& series, const std::string& y_label) {
  const double width = 640, height = 400, left = 70, right = 480, top = 40, bottom = 340;
  double lo = 1e300, hi = -1e300;
  for (const auto& sr : series) {
    for (double v : sr.values) {
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const auto nx = std::max<std::size_t>(x_labels.size(), 1);
  auto x_of = [&](std::size_t i) {
    return nx == 1 ? (left + right) / 2
                   : left + static_cast<double>(i) / static_cast<double>(nx - 1) * (right - left);
  };
  auto y_of = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   (left + right) / 2, escape(title));
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, bottom,
                   right);
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                   bottom);
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\" dy=\"4\">{:.4f}</text>\n", left - 6,
                     y_of(v), v);
  }
  for (std::size_t i = 0; i < x_labels.size(); ++i) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_of(i),
                     bottom + 18, escape(x_labels[i]));
  }
  s += fmt::format(
      "<text x=\"18\" y=\"{0}\" transform=\"rotate(-90 18 {0})\" text-anchor=\"middle\">{1}</text>\n",
      (top + bottom) / 2, escape(y_label));
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < series[k].values.size() && i < x_labels.size(); ++i) {
      const double v = series[k].values[i];
      if (std::isnan(v)) continue;
      pts += fmt::format("{:.2f},{:.2f} ", x_of(i), y_of(v));
      s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", x_of(i), y_of(v),
                       color);
    }
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"/>\n", pts, color);
    const double ly = top + 16 * static_cast<double>(k);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                     right + 15, ly, right + 35, color);
    s += fmt::format("<text x=\"{}\" y=\"{}\" dy=\"4\">{}</text>\n", right + 40, ly,
                     escape(series[k].name));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace ctxrec
