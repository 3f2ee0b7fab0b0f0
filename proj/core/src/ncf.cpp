#include "ctxrec/ncf.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxrec/error.hpp"
#include "ctxrec/random.hpp"

namespace ctxrec {

std::size_t NcfParameters::parameter_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += static_cast<std::size_t>(b.size());
  return n;
}

NcfParameters NcfParameters::zeros_like() const {
  NcfParameters z;
  for (std::size_t i = 0; i < blocks.size(); ++i) z.blocks[i] = Eigen::MatrixXd::Zero(blocks[i].rows(), blocks[i].cols());
  return z;
}

NcfParameters init_ncf_parameters(Eigen::MatrixXd user_embedding, Eigen::MatrixXd poi_embedding,
                                  const NcfOptions& options, std::uint64_t seed) {
  if (user_embedding.rows() != poi_embedding.rows()) throw ModelError("NCF: embedding sizes differ");
  if (static_cast<std::size_t>(user_embedding.rows()) != options.factors) {
    throw ModelError("NCF: embedding size does not match the MF latent dimension");
  }
  const auto k2 = 2 * user_embedding.rows();
  const auto h1 = static_cast<Eigen::Index>(options.hidden1);
  const auto h2 = static_cast<Eigen::Index>(options.hidden2);

  Rng rng(seed);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols, double stddev) {
    std::normal_distribution<double> n(0.0, stddev);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
  };

  NcfParameters p;
  p[NcfParameters::UserEmbedding] = std::move(user_embedding);
  p[NcfParameters::PoiEmbedding] = std::move(poi_embedding);
  p[NcfParameters::W1] = gaussian(h1, k2, std::sqrt(2.0 / static_cast<double>(k2)));
  p[NcfParameters::B1] = Eigen::MatrixXd::Zero(h1, 1);
  p[NcfParameters::W2] = gaussian(h2, h1, std::sqrt(2.0 / static_cast<double>(h1)));
  p[NcfParameters::B2] = Eigen::MatrixXd::Zero(h2, 1);
  p[NcfParameters::W3] = gaussian(1, h2, std::sqrt(1.0 / static_cast<double>(h2)));
  p[NcfParameters::B3] = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

namespace {

struct Activations {
  Eigen::MatrixXd x;   // 2K x B
  Eigen::MatrixXd a1;  // pre-activations
  Eigen::MatrixXd h1;
  Eigen::MatrixXd a2;
  Eigen::MatrixXd h2;
  Eigen::RowVectorXd z;
};

Activations forward(const NcfParameters& p, std::span<const UserIndex> users,
                    std::span<const PoiIndex> pois) {
  const auto& e = p[NcfParameters::UserEmbedding];
  const auto& q = p[NcfParameters::PoiEmbedding];
  const auto k = e.rows();
  const auto batch = static_cast<Eigen::Index>(users.size());

  Activations act;
  act.x.resize(2 * k, batch);
  for (Eigen::Index i = 0; i < batch; ++i) {
    if (users[i] >= e.cols()) throw ModelError("NCF: unknown user " + std::to_string(users[i]));
    if (pois[i] >= q.cols()) throw ModelError("NCF: unknown POI " + std::to_string(pois[i]));
    act.x.col(i).head(k) = e.col(users[i]);
    act.x.col(i).tail(k) = q.col(pois[i]);
  }
  act.a1 = (p[NcfParameters::W1] * act.x).colwise() + p[NcfParameters::B1].col(0);
  act.h1 = act.a1.cwiseMax(0.0);
  act.a2 = (p[NcfParameters::W2] * act.h1).colwise() + p[NcfParameters::B2].col(0);
  act.h2 = act.a2.cwiseMax(0.0);
  act.z = (p[NcfParameters::W3] * act.h2).array() + p[NcfParameters::B3](0, 0);
  return act;
}

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// ln(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

Eigen::VectorXd ncf_forward(const NcfParameters& p, std::span<const UserIndex> users,
                            std::span<const PoiIndex> pois) {
  if (users.size() != pois.size()) throw ModelError("NCF: users/pois length mismatch");
  const auto act = forward(p, users, pois);
  Eigen::VectorXd y(act.z.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = sigmoid(act.z[i]);
  return y;
}

double ncf_loss_and_gradient(const NcfParameters& p, std::span<const InteractionSample> batch,
                             NcfParameters& grad) {
  if (batch.empty()) throw ModelError("NCF: empty batch");
  std::vector<UserIndex> users(batch.size());
  std::vector<PoiIndex> pois(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    users[i] = batch[i].user;
    pois[i] = batch[i].poi;
  }
  const auto act = forward(p, users, pois);
  const auto n = static_cast<Eigen::Index>(batch.size());
  const double inv_n = 1.0 / static_cast<double>(n);

  double loss = 0.0;
  Eigen::RowVectorXd dz(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = batch[i].label;
    loss += softplus(act.z[i]) - t * act.z[i];
    dz[i] = (sigmoid(act.z[i]) - t) * inv_n;
  }
  loss *= inv_n;

  grad = p.zeros_like();
  grad[NcfParameters::W3] = dz * act.h2.transpose();
  grad[NcfParameters::B3](0, 0) = dz.sum();
  Eigen::MatrixXd d2 = (p[NcfParameters::W3].transpose() * dz).cwiseProduct(
      (act.a2.array() > 0.0).cast<double>().matrix());
  grad[NcfParameters::W2] = d2 * act.h1.transpose();
  grad[NcfParameters::B2] = d2.rowwise().sum();
  Eigen::MatrixXd d1 = (p[NcfParameters::W2].transpose() * d2)
                           .cwiseProduct((act.a1.array() > 0.0).cast<double>().matrix());
  grad[NcfParameters::W1] = d1 * act.x.transpose();
  grad[NcfParameters::B1] = d1.rowwise().sum();
  const Eigen::MatrixXd dx = p[NcfParameters::W1].transpose() * d1;

  const auto k = p[NcfParameters::UserEmbedding].rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    grad[NcfParameters::UserEmbedding].col(users[i]) += dx.col(i).head(k);
    grad[NcfParameters::PoiEmbedding].col(pois[i]) += dx.col(i).tail(k);
  }
  return loss;
}

void adam_update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, Eigen::MatrixXd& m,
                 Eigen::MatrixXd& v, std::size_t step, const AdamOptions& o) {
  m = o.beta1 * m + (1.0 - o.beta1) * grad;
  v = o.beta2 * v + (1.0 - o.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step));
  param.array() -= o.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + o.epsilon);
}

NcfModel::NcfModel(NcfParameters params, AdamState optimizer)
    : params_(std::move(params)), optimizer_(std::move(optimizer)) {}

double NcfModel::predict(UserIndex u, PoiIndex l) const {
  const UserIndex us[] = {u};
  const PoiIndex ls[] = {l};
  return ncf_forward(params_, us, ls)[0];
}

void NcfModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                                std::span<double> out) const {
  if (candidates.empty()) return;
  std::vector<UserIndex> users(candidates.size(), u);
  const auto y = ncf_forward(params_, users, candidates);
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = y[static_cast<Eigen::Index>(i)];
}

namespace {

nlohmann::json params_json(const NcfParameters& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : p.blocks) {
    arr.push_back({{"rows", b.rows()}, {"cols", b.cols()},
                   {"data", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  return arr;
}

NcfParameters params_from_json(const nlohmann::json& j) {
  NcfParameters p;
  if (j.size() != p.blocks.size()) throw ModelError("NCF: corrupt artifact");
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto rows = j[i].at("rows").get<Eigen::Index>();
    const auto cols = j[i].at("cols").get<Eigen::Index>();
    const auto data = j[i].at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw ModelError("NCF: corrupt artifact");
    p.blocks[i] = Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
  }
  return p;
}

}  // namespace

nlohmann::json NcfModel::to_json() const {
  return {{"params", params_json(params_)},
          {"adam_m", params_json(optimizer_.m)},
          {"adam_v", params_json(optimizer_.v)},
          {"adam_step", optimizer_.step},
          {"loss_trace", loss_trace}};
}

NcfModel NcfModel::from_json(const nlohmann::json& j) {
  AdamState state{params_from_json(j.at("adam_m")), params_from_json(j.at("adam_v")),
                  j.at("adam_step").get<std::size_t>()};
  NcfModel m(params_from_json(j.at("params")), std::move(state));
  m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
  return m;
}

NcfModel train_ncf(std::span<const InteractionSample> samples, const MfModel& init,
                   const NcfOptions& options, std::uint64_t seed) {
  if (init.factors() != options.factors) {
    throw ModelError("NCF: embedding size " + std::to_string(options.factors) +
                     " does not match MF factors " + std::to_string(init.factors()));
  }
  const bool has_pos = std::any_of(samples.begin(), samples.end(), [](auto& s) { return s.label == 1; });
  const bool has_neg = std::any_of(samples.begin(), samples.end(), [](auto& s) { return s.label == 0; });
  if (!has_pos || !has_neg) throw ModelError("NCF: training samples must contain both labels");
  if (options.batch_size == 0) throw ModelError("NCF: batch size must be positive");

  auto params = init_ncf_parameters(init.user_factors(), init.poi_factors(), options,
                                    derive_seed(seed, "ncf-init"));
  AdamState adam{params.zeros_like(), params.zeros_like(), 0};
  NcfParameters grad;
  std::vector<double> trace;

  std::vector<std::size_t> order(samples.size());
  std::vector<InteractionSample> batch;
  Rng rng(derive_seed(seed, "ncf-batches"));
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const auto end = std::min(order.size(), start + options.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(samples[order[i]]);
      const double loss = ncf_loss_and_gradient(params, batch, grad);
      if (!std::isfinite(loss)) {
        throw ModelError("NCF: loss diverged in epoch " + std::to_string(epoch + 1));
      }
      epoch_loss += loss * static_cast<double>(batch.size());
      ++adam.step;
      for (std::size_t b = 0; b < params.blocks.size(); ++b) {
        adam_update(params.blocks[b], grad.blocks[b], adam.m.blocks[b], adam.v.blocks[b], adam.step,
                    options.adam);
      }
    }
    trace.push_back(epoch_loss / static_cast<double>(samples.size()));
  }
  NcfModel model(std::move(params), std::move(adam));
  model.loss_trace = std::move(trace);
  return model;
}

}  // namespace ctxrec
