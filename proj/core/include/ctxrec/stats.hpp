#pragma once

#include <span>
#include <string>
#include <vector>

namespace ctxrec {

inline constexpr double kDefaultAlpha = 0.05;

struct TTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool degenerate = false;  // differences had zero variance

  bool significant(double alpha = kDefaultAlpha) const { return !degenerate && p_value < alpha; }
};

/// Two-tailed paired t-test on a - b with n - 1 degrees of freedom.
/// Zero-variance differences give p = 1 and set `degenerate`.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double p_value = 1.0;
  std::size_t n_nonzero = 0;
  bool exact = false;
};

/// Two-sided signed-rank test; zero differences are dropped. Up to 50 pairs
/// without ties or zeros use the exact null distribution, up to 13 pairs
/// with ties enumerate all sign flips, anything else uses the normal
/// approximation with tie correction and no continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Holm step-down adjusted p-values (monotone, capped at 1), input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

/// Average ranks, 1 for the largest value; ties share the mean rank.
std::vector<double> descending_ranks(std::span<const double> values);

struct CdComparison {
  std::size_t first = 0;  // model indices
  std::size_t second = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct CdRanking {
  std::vector<std::string> models;
  std::vector<double> average_ranks;
  std::vector<CdComparison> comparisons;
  /// Runs of models adjacent in rank order that are pairwise
  /// indistinguishable; only maximal runs with two or more members.
  std::vector<std::vector<std::size_t>> cliques;

  /// Model indices sorted by average rank (best first).
  std::vector<std::size_t> order() const;
};

/// `values[m][i]` is model m's metric on user i (higher is better).
CdRanking wilcoxon_holm_cd(const std::vector<std::string>& models,
                           const std::vector<std::vector<double>>& values,
                           double alpha = kDefaultAlpha);

/// Moment-based normality check (Jarque-Bera). Reported only.
struct NormalityDiagnostic {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
};

NormalityDiagnostic normality_diagnostic(std::span<const double> values);

}  // namespace ctxrec
