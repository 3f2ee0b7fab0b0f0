#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

struct PfmOptions {
  std::size_t factors = 30;
  double shape = 2.0;  // prior shape, every factor
  double scale = 0.5;  // prior scale, every factor
  double learning_rate = 1e-3;
  std::size_t iterations = 300;
  /// Halve the step until the objective does not decrease; grow it again
  /// after accepted steps, never beyond `learning_rate * max_step_growth`.
  bool line_search = true;
  double max_step_growth = 1e3;
  /// Ascend along factor * gradient (element-wise) instead of the raw
  /// gradient. Same stationary points, but entries near zero no longer
  /// dominate the step size through the 1/x prior term.
  bool preconditioned = true;
  double min_value = 1e-8;  // projection floor keeping factors positive
  double init_low = 0.01;
  double init_high = 0.1;

  friend bool operator==(const PfmOptions&, const PfmOptions&) = default;
};

/// Per-factor Gamma-style prior parameters.
struct PfmPrior {
  Eigen::VectorXd shape;  // sigma_k
  Eigen::VectorXd scale;  // rho_k

  static PfmPrior uniform(std::size_t factors, double shape, double scale);
};

/// Log-posterior of the Poisson factor model (additive constant dropped):
///   sum_ik (s_k - 1) ln(U_ki / r_k) - U_ki / r_k      (same for L)
/// + sum_ij R_ij ln((U^T L)_ij) - (U^T L)_ij
/// `users` is K x |U|, `pois` is K x |L|; all entries must be positive.
double pfm_objective(const FrequencyMatrix& r, const Eigen::MatrixXd& users,
                     const Eigen::MatrixXd& pois, const PfmPrior& prior);

/// Analytic gradient of pfm_objective with respect to both factor matrices.
void pfm_gradient(const FrequencyMatrix& r, const Eigen::MatrixXd& users,
                  const Eigen::MatrixXd& pois, const PfmPrior& prior, Eigen::MatrixXd& grad_users,
                  Eigen::MatrixXd& grad_pois);

struct PfmTracePoint {
  std::size_t iteration = 0;
  double objective = 0.0;
  double step = 0.0;
};

/// Trained Poisson factor model; scores are U_u . L_l >= 0.
class MfModel final : public Scorer {
 public:
  MfModel() = default;
  MfModel(Eigen::MatrixXd users, Eigen::MatrixXd pois, PfmPrior prior);

  double predict(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  std::size_t factors() const { return static_cast<std::size_t>(users_.rows()); }
  std::size_t num_users() const { return static_cast<std::size_t>(users_.cols()); }
  std::size_t num_pois() const { return static_cast<std::size_t>(pois_.cols()); }
  const Eigen::MatrixXd& user_factors() const { return users_; }
  const Eigen::MatrixXd& poi_factors() const { return pois_; }
  const PfmPrior& prior() const { return prior_; }

  std::vector<PfmTracePoint> trace;

  nlohmann::json to_json() const;
  static MfModel from_json(const nlohmann::json& j);
  friend bool operator==(const MfModel& a, const MfModel& b);

 private:
  Eigen::MatrixXd users_;
  Eigen::MatrixXd pois_;
  PfmPrior prior_;
};

/// Projected gradient ascent on pfm_objective from a seeded uniform
/// initialisation. Throws ModelError on an empty matrix or divergence.
MfModel train_pfm(const FrequencyMatrix& r, const PfmOptions& options, std::uint64_t seed);

}  // namespace ctxrec
