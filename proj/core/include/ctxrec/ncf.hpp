#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "ctxrec/dataset.hpp"
#include "ctxrec/pfm.hpp"
#include "ctxrec/scorer.hpp"

namespace ctxrec {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamOptions&, const AdamOptions&) = default;
};

struct NcfOptions {
  std::size_t factors = 30;  // must match the MF initialisation
  std::size_t hidden1 = 128;
  std::size_t hidden2 = 64;
  AdamOptions adam;
  std::size_t batch_size = 256;
  std::size_t epochs = 50;

  friend bool operator==(const NcfOptions&, const NcfOptions&) = default;
};

/// Every trainable block, in a fixed order shared by gradients and Adam
/// moments. Biases are column vectors stored as n x 1 matrices.
struct NcfParameters {
  enum Block { UserEmbedding, PoiEmbedding, W1, B1, W2, B2, W3, B3, kNumBlocks };
  std::array<Eigen::MatrixXd, kNumBlocks> blocks;

  Eigen::MatrixXd& operator[](Block b) { return blocks[b]; }
  const Eigen::MatrixXd& operator[](Block b) const { return blocks[b]; }

  std::size_t parameter_count() const;
  /// Same shapes, all zeros.
  NcfParameters zeros_like() const;
  friend bool operator==(const NcfParameters&, const NcfParameters&) = default;
};

/// He-initialised MLP on top of the given embeddings (K x |U|, K x |L|).
NcfParameters init_ncf_parameters(Eigen::MatrixXd user_embedding, Eigen::MatrixXd poi_embedding,
                                  const NcfOptions& options, std::uint64_t seed);

/// P(visit) for every (user, poi) pair: concat -> ReLU -> ReLU -> sigmoid.
Eigen::VectorXd ncf_forward(const NcfParameters& p, std::span<const UserIndex> users,
                            std::span<const PoiIndex> pois);

/// Mean binary cross-entropy over `batch`; fills `grad` (same shapes as `p`).
double ncf_loss_and_gradient(const NcfParameters& p, std::span<const InteractionSample> batch,
                             NcfParameters& grad);

/// Bias-corrected Adam recurrence on one block. `step` is 1-based.
void adam_update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, Eigen::MatrixXd& m,
                 Eigen::MatrixXd& v, std::size_t step, const AdamOptions& options);

struct AdamState {
  NcfParameters m;
  NcfParameters v;
  std::size_t step = 0;
};

class NcfModel final : public Scorer {
 public:
  NcfModel() = default;
  NcfModel(NcfParameters params, AdamState optimizer);

  double predict(UserIndex u, PoiIndex l) const;
  void score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                        std::span<double> out) const override;

  const NcfParameters& parameters() const { return params_; }
  const AdamState& optimizer() const { return optimizer_; }
  std::vector<double> loss_trace;  // mean training loss per epoch

  nlohmann::json to_json() const;
  static NcfModel from_json(const nlohmann::json& j);

 private:
  NcfParameters params_;
  AdamState optimizer_;
};

/// Mini-batch Adam on binary cross-entropy, batches in a seeded shuffled
/// order. Throws ModelError on a NaN loss, a factor mismatch, or samples
/// that do not contain both labels.
NcfModel train_ncf(std::span<const InteractionSample> samples, const MfModel& init,
                   const NcfOptions& options, std::uint64_t seed);

}  // namespace ctxrec
