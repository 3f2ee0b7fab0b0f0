#include "ctxrec/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxrec/error.hpp"

namespace ctxrec {

namespace {

void check_paired(std::span<const double> a, std::span<const double> b, std::size_t min_n) {
  if (a.size() != b.size()) throw Error("paired samples differ in length");
  if (a.size() < min_n) {
    throw Error("paired test needs at least " + std::to_string(min_n) + " pairs");
  }
}

/// Average ranks (1-based, ascending) and tie-group sizes.
std::vector<double> ascending_ranks(std::span<const double> v, std::vector<std::size_t>* ties) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    if (ties != nullptr) ties->push_back(j - i + 1);
    i = j + 1;
  }
  return r;
}

/// Counts of subsets of {1..n} by rank sum.
std::vector<double> signed_rank_counts(std::size_t n) {
  const std::size_t max = n * (n + 1) / 2;
  std::vector<double> c(max + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t s = max; s >= k; --s) c[s] += c[s - k];
  }
  return c;
}

}  // namespace

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  check_paired(a, b, 2);
  const auto n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  TTestResult r;
  r.n = n;
  const double var = ss / static_cast<double>(n - 1);
  if (!(var > 0.0)) {
    r.degenerate = true;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = mean / std::sqrt(var / static_cast<double>(n));
  boost::math::students_t dist(static_cast<double>(n - 1));
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))));
  return r;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  check_paired(a, b, 1);
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    if (x != 0.0) d.push_back(x);
  }
  const bool has_zeros = d.size() != a.size();
  WilcoxonResult r;
  r.n_nonzero = d.size();
  if (d.empty()) return r;  // no evidence either way

  std::vector<double> mag(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) mag[i] = std::abs(d[i]);
  std::vector<std::size_t> ties;
  const auto ranks = ascending_ranks(mag, &ties);
  const bool has_ties = std::any_of(ties.begin(), ties.end(), [](auto t) { return t > 1; });

  double w_plus = 0.0, w_minus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? w_plus : w_minus) += ranks[i];
  r.statistic = std::min(w_plus, w_minus);

  const auto n = d.size();
  const auto total = a.size();
  if (total <= 50 && !has_zeros && !has_ties) {
    const auto counts = signed_rank_counts(n);
    const double all = std::ldexp(1.0, static_cast<int>(n));
    const auto k = static_cast<std::size_t>(r.statistic);
    double cdf = 0.0;
    for (std::size_t s = 0; s <= k; ++s) cdf += counts[s];
    r.p_value = std::min(1.0, 2.0 * cdf / all);
    r.exact = true;
    return r;
  }
  if (total <= 13) {
    // All 2^n sign assignments of the non-zero differences.
    const double tol = 1e-14 * std::max(1.0, std::abs(w_plus));
    std::size_t le = 0, ge = 0;
    const std::size_t combos = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < combos; ++mask) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) s += ranks[i];
      }
      if (s <= w_plus + tol) ++le;
      if (s >= w_plus - tol) ++ge;
    }
    const double c = static_cast<double>(combos);
    r.p_value = std::min(1.0, 2.0 * std::min(le / c, ge / c));
    r.exact = true;
    return r;
  }
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0);
  for (auto t : ties) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 2.0;
  }
  const double se = std::sqrt(var / 24.0);
  if (!(se > 0.0)) return r;
  const double z = (w_plus - mean) / se;
  boost::math::normal standard;
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(standard, -std::abs(z)));
  return r;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  const auto m = p_values.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return p_values[i] < p_values[j]; });
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double scaled = std::min(1.0, static_cast<double>(m - r) * p_values[idx[r]]);
    running = std::max(running, scaled);
    adj[idx[r]] = running;
  }
  return adj;
}

std::vector<double> descending_ranks(std::span<const double> values) {
  std::vector<double> neg(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) neg[i] = -values[i];
  return ascending_ranks(neg, nullptr);
}

std::vector<std::size_t> CdRanking::order() const {
  std::vector<std::size_t> idx(average_ranks.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto i, auto j) { return average_ranks[i] < average_ranks[j]; });
  return idx;
}

CdRanking wilcoxon_holm_cd(const std::vector<std::string>& models,
                           const std::vector<std::vector<double>>& values, double alpha) {
  const auto m = models.size();
  if (m < 2) throw Error("critical-difference ranking needs at least two models");
  if (values.size() != m) throw Error("one value vector per model required");
  const auto users = values.front().size();
  for (const auto& v : values) {
    if (v.size() != users) throw Error("models were evaluated on different user sets");
  }
  if (users == 0) throw Error("critical-difference ranking needs at least one user");

  CdRanking out;
  out.models = models;
  out.average_ranks.assign(m, 0.0);
  std::vector<double> row(m);
  for (std::size_t i = 0; i < users; ++i) {
    for (std::size_t k = 0; k < m; ++k) row[k] = values[k][i];
    const auto r = descending_ranks(row);
    for (std::size_t k = 0; k < m; ++k) out.average_ranks[k] += r[k];
  }
  for (auto& r : out.average_ranks) r /= static_cast<double>(users);

  std::vector<double> raw;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto w = wilcoxon_signed_rank(values[i], values[j]);
      out.comparisons.push_back({i, j, w.statistic, w.p_value, 1.0, false});
      raw.push_back(w.p_value);
    }
  }
  const auto adj = holm_adjust(raw);
  std::vector<std::vector<bool>> differs(m, std::vector<bool>(m, false));
  for (std::size_t c = 0; c < out.comparisons.size(); ++c) {
    auto& cmp = out.comparisons[c];
    cmp.p_adjusted = adj[c];
    cmp.significant = adj[c] < alpha;
    differs[cmp.first][cmp.second] = differs[cmp.second][cmp.first] = cmp.significant;
  }

  const auto ord = out.order();
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i;
    while (j + 1 < m) {
      bool joins = true;
      for (std::size_t t = i; t <= j && joins; ++t) joins = !differs[ord[t]][ord[j + 1]];
      if (!joins) break;
      ++j;
    }
    if (j > i && (out.cliques.empty() || j > last_end)) {
      out.cliques.emplace_back(ord.begin() + static_cast<std::ptrdiff_t>(i),
                               ord.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      last_end = j;
    }
  }
  return out;
}

NormalityDiagnostic normality_diagnostic(std::span<const double> values) {
  NormalityDiagnostic d;
  const auto n = values.size();
  if (n < 3) return d;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double x = v - mean;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) return d;
  d.skewness = m3 / std::pow(m2, 1.5);
  d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  d.statistic = static_cast<double>(n) / 6.0 *
                (d.skewness * d.skewness + d.excess_kurtosis * d.excess_kurtosis / 4.0);
  d.p_value = std::exp(-d.statistic / 2.0);  // chi-square, 2 dof
  return d;
}

}  // namespace ctxrec
