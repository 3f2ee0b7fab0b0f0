#include "ctxrec/pfm.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cmath>

#include "ctxrec/error.hpp"
#include "ctxrec/random.hpp"

namespace ctxrec {

PfmPrior PfmPrior::uniform(std::size_t factors, double shape, double scale) {
  const auto k = static_cast<Eigen::Index>(factors);
  return {Eigen::VectorXd::Constant(k, shape), Eigen::VectorXd::Constant(k, scale)};
}

namespace {

double prior_term(const Eigen::MatrixXd& m, const PfmPrior& prior) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      const double x = m(k, c) / prior.scale[k];
      s += (prior.shape[k] - 1.0) * std::log(x) - x;
    }
  }
  return s;
}

void check_shapes(const FrequencyMatrix& r, const Eigen::MatrixXd& users,
                  const Eigen::MatrixXd& pois, const PfmPrior& prior) {
  if (users.cols() != static_cast<Eigen::Index>(r.num_users()) ||
      pois.cols() != static_cast<Eigen::Index>(r.num_pois()) || users.rows() != pois.rows() ||
      prior.shape.size() != users.rows() || prior.scale.size() != users.rows()) {
    throw ModelError("PFM: factor shapes do not match the frequency matrix");
  }
}

}  // namespace

double pfm_objective(const FrequencyMatrix& r, const Eigen::MatrixXd& users,
                     const Eigen::MatrixXd& pois, const PfmPrior& prior) {
  check_shapes(r, users, pois, prior);
  double f = prior_term(users, prior) + prior_term(pois, prior);
  for (UserIndex u = 0; u < r.num_users(); ++u) {
    const auto uu = users.col(u);
    for (const auto& e : r.row(u)) f += e.count * std::log(uu.dot(pois.col(e.index)));
  }
  // sum_ij (U^T L)_ij = sum_k (sum_i U_ki)(sum_j L_kj)
  f -= users.rowwise().sum().dot(pois.rowwise().sum());
  return f;
}

void pfm_gradient(const FrequencyMatrix& r, const Eigen::MatrixXd& users,
                  const Eigen::MatrixXd& pois, const PfmPrior& prior, Eigen::MatrixXd& grad_users,
                  Eigen::MatrixXd& grad_pois) {
  check_shapes(r, users, pois, prior);
  const Eigen::VectorXd inv_scale = prior.scale.cwiseInverse();
  const Eigen::VectorXd shape_m1 = prior.shape.array() - 1.0;
  const Eigen::VectorXd user_sum = users.rowwise().sum();
  const Eigen::VectorXd poi_sum = pois.rowwise().sum();

  grad_users = (users.cwiseInverse().array().colwise() * shape_m1.array()).colwise() -
               (inv_scale + poi_sum).array();
  grad_pois = (pois.cwiseInverse().array().colwise() * shape_m1.array()).colwise() -
              (inv_scale + user_sum).array();

  for (UserIndex u = 0; u < r.num_users(); ++u) {
    const auto uu = users.col(u);
    for (const auto& e : r.row(u)) {
      const auto ll = pois.col(e.index);
      const double ratio = e.count / uu.dot(ll);
      grad_users.col(u).noalias() += ratio * ll;
      grad_pois.col(e.index).noalias() += ratio * uu;
    }
  }
}

MfModel::MfModel(Eigen::MatrixXd users, Eigen::MatrixXd pois, PfmPrior prior)
    : users_(std::move(users)), pois_(std::move(pois)), prior_(std::move(prior)) {
  if (users_.rows() != pois_.rows()) throw ModelError("PFM: latent dimensions differ");
}

double MfModel::predict(UserIndex u, PoiIndex l) const {
  if (u >= num_users()) throw ModelError("PFM: unknown user " + std::to_string(u));
  if (l >= num_pois()) throw ModelError("PFM: unknown POI " + std::to_string(l));
  return users_.col(u).dot(pois_.col(l));
}

void MfModel::score_candidates(UserIndex u, std::span<const PoiIndex> candidates,
                               std::span<double> out) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = predict(u, candidates[i]);
}

bool operator==(const MfModel& a, const MfModel& b) {
  return a.users_ == b.users_ && a.pois_ == b.pois_ && a.prior_.shape == b.prior_.shape &&
         a.prior_.scale == b.prior_.scale;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw ModelError("corrupt matrix");
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

}  // namespace

nlohmann::json MfModel::to_json() const {
  return {{"users", matrix_json(users_)},
          {"pois", matrix_json(pois_)},
          {"shape", std::vector<double>(prior_.shape.data(), prior_.shape.data() + prior_.shape.size())},
          {"scale", std::vector<double>(prior_.scale.data(), prior_.scale.data() + prior_.scale.size())}};
}

MfModel MfModel::from_json(const nlohmann::json& j) {
  const auto shape = j.at("shape").get<std::vector<double>>();
  const auto scale = j.at("scale").get<std::vector<double>>();
  PfmPrior prior{Eigen::Map<const Eigen::VectorXd>(shape.data(), static_cast<Eigen::Index>(shape.size())),
                 Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()))};
  return MfModel(matrix_from_json(j.at("users")), matrix_from_json(j.at("pois")), std::move(prior));
}

MfModel train_pfm(const FrequencyMatrix& r, const PfmOptions& opt, std::uint64_t seed) {
  if (opt.factors == 0) throw ModelError("PFM: need at least one latent factor");
  if (!(opt.learning_rate > 0.0)) throw ModelError("PFM: learning rate must be positive");
  if (r.nnz() == 0) throw ModelError("PFM: empty frequency matrix");
  if (!(opt.init_low > 0.0 && opt.init_high > opt.init_low)) throw ModelError("PFM: bad init range");

  const auto k = static_cast<Eigen::Index>(opt.factors);
  const auto prior = PfmPrior::uniform(opt.factors, opt.shape, opt.scale);
  Rng rng(seed);
  std::uniform_real_distribution<double> init(opt.init_low, opt.init_high);
  Eigen::MatrixXd users(k, static_cast<Eigen::Index>(r.num_users()));
  Eigen::MatrixXd pois(k, static_cast<Eigen::Index>(r.num_pois()));
  for (Eigen::Index i = 0; i < users.size(); ++i) users.data()[i] = init(rng);
  for (Eigen::Index i = 0; i < pois.size(); ++i) pois.data()[i] = init(rng);

  double objective = pfm_objective(r, users, pois, prior);
  if (!std::isfinite(objective)) throw ModelError("PFM: non-finite objective at initialisation");

  std::vector<PfmTracePoint> trace{{0, objective, 0.0}};
  Eigen::MatrixXd grad_u, grad_l, next_u, next_l;
  const double max_step = opt.learning_rate * (opt.line_search ? opt.max_step_growth : 1.0);
  double step = opt.learning_rate;

  for (std::size_t it = 1; it <= opt.iterations; ++it) {
    pfm_gradient(r, users, pois, prior, grad_u, grad_l);
    if (!grad_u.allFinite() || !grad_l.allFinite()) {
      throw ModelError("PFM: non-finite gradient at iteration " + std::to_string(it));
    }
    if (opt.preconditioned) {
      grad_u.array() *= users.array();
      grad_l.array() *= pois.array();
    }
    bool accepted = false;
    double candidate = objective;
    for (int halving = 0; halving < 60; ++halving) {
      next_u = (users + step * grad_u).cwiseMax(opt.min_value);
      next_l = (pois + step * grad_l).cwiseMax(opt.min_value);
      candidate = pfm_objective(r, next_u, next_l, prior);
      if (!opt.line_search) {
        accepted = true;
        break;
      }
      if (std::isfinite(candidate) && candidate >= objective) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!std::isfinite(candidate)) {
      throw ModelError("PFM: objective diverged at iteration " + std::to_string(it));
    }
    if (!accepted) {
      spdlog::debug("PFM: no ascent step found at iteration {}, stopping", it);
      break;
    }
    users.swap(next_u);
    pois.swap(next_l);
    objective = candidate;
    trace.push_back({it, objective, step});
    if (opt.line_search) step = std::min(step * 2.0, max_step);
  }

  MfModel model(std::move(users), std::move(pois), prior);
  model.trace = std::move(trace);
  return model;
}

}  // namespace ctxrec
