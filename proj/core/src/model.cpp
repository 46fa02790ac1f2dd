#include "ddr/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ddr {

LinearMapParams LinearMapParams::zeros(Eigen::Index d1, Eigen::Index d2, MapKind kind) {
  return {Eigen::MatrixXd::Zero(d2, d1), Eigen::VectorXd::Zero(d2), kind};
}

Eigen::VectorXd LinearMapParams::flatten() const {
  Eigen::VectorXd phi(A.size() + b.size());
  phi.head(A.size()) = A.reshaped();
  phi.tail(b.size()) = b;
  return phi;
}

LinearMapParams LinearMapParams::unflatten(const Eigen::VectorXd& phi, Eigen::Index d1, Eigen::Index d2,
                                           MapKind kind) {
  if (phi.size() != d1 * d2 + d2) throw std::invalid_argument("parameter vector has wrong length");
  LinearMapParams map;
  map.A = phi.head(d1 * d2).reshaped(d2, d1);
  map.b = phi.tail(d2);
  map.kind = kind;
  return map;
}

Eigen::VectorXd MapGradient::flatten() const {
  Eigen::VectorXd g(A.size() + b.size());
  g.head(A.size()) = A.reshaped();
  g.tail(b.size()) = b;
  return g;
}

DDRDataset::DDRDataset(std::vector<DistributionPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw std::invalid_argument("dataset must contain at least one pair");
  const auto d1 = pairs_.front().predictor.dim();
  const auto d2 = pairs_.front().response.dim();
  for (const auto& pr : pairs_) {
    if (pr.predictor.dim() != d1 || pr.response.dim() != d2) {
      throw std::invalid_argument("dimension mismatch between dataset pairs");
    }
  }
}

Eigen::Index DDRDataset::predictor_dim() const {
  return pairs_.empty() ? 0 : pairs_.front().predictor.dim();
}

Eigen::Index DDRDataset::response_dim() const {
  return pairs_.empty() ? 0 : pairs_.front().response.dim();
}

DDRDataset DDRDataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<DistributionPair> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(pairs_.at(i));
  return DDRDataset(std::move(out));
}

void GenLikConfig::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("loss weight w must be positive");
  if (projections < 1) throw std::invalid_argument("number of projections must be positive");
}

EmpiricalDistribution pushforward(const LinearMapParams& map, const EmpiricalDistribution& f) {
  if (f.dim() != map.in_dim()) throw std::invalid_argument("dimension mismatch");
  if (map.b.size() != map.out_dim()) throw std::invalid_argument("intercept has wrong length");
  Eigen::MatrixXd z = f.atoms() * map.A.transpose();
  z.rowwise() += map.b.transpose();
  if (map.kind == MapKind::QuadraticElementwise) z = z.array().square().matrix();
  return EmpiricalDistribution(std::move(z));
}

double neg_log_gen_likelihood(const LinearMapParams& map, const DDRDataset& data, const GenLikConfig& cfg,
                              const ProjectionSet& proj) {
  cfg.validate();
  SlicedObjective objective(data, proj, cfg.w);
  return objective.value(map);
}

MapGradient grad_neg_log_gen_likelihood(const LinearMapParams& map, const DDRDataset& data,
                                        const GenLikConfig& cfg, const ProjectionSet& proj) {
  cfg.validate();
  SlicedObjective objective(data, proj, cfg.w);
  return objective.evaluate(map).gradient;
}

namespace {

void check_prior_shapes(const LinearMapParams& map, const HorseshoeState& hs) {
  if (hs.lambda_sq.rows() != map.A.rows() || hs.lambda_sq.cols() != map.A.cols()) {
    throw std::invalid_argument("horseshoe state does not match coefficient matrix");
  }
  hs.validate();
}

}  // namespace

double log_prior(const LinearMapParams& map, const HorseshoeState& hs) {
  check_prior_shapes(map, hs);
  const Eigen::ArrayXXd var = hs.lambda_sq.array() * hs.tau_sq;
  const double coef = -0.5 * (map.A.array().square() / var + var.log()).sum();
  return coef - 0.5 * map.b.squaredNorm();
}

MapGradient grad_log_prior(const LinearMapParams& map, const HorseshoeState& hs) {
  check_prior_shapes(map, hs);
  MapGradient g;
  g.A = -(map.A.array() / (hs.lambda_sq.array() * hs.tau_sq)).matrix();
  g.b = -map.b;
  return g;
}

}  // namespace ddr
