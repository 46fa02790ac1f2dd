#include "ddr/mala.hpp"

#include <stdexcept>

namespace ddr {

void MalaConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("step size eta must be positive");
  likelihood().validate();
  if (!(burn_in > 0 && burn_in < n_iter)) throw std::invalid_argument("require 0 < burn_in < n_iter");
}

double mala_log_proposal(const Eigen::VectorXd& to, const Eigen::VectorXd& from,
                         const Eigen::VectorXd& grad_from, double eta) {
  return -(to - from - eta * grad_from).squaredNorm() / (4.0 * eta);
}

double mala_log_accept_ratio(const MalaState& current, const MalaState& proposal, double eta) {
  return proposal.log_density - current.log_density +
         mala_log_proposal(current.position, proposal.position, proposal.gradient, eta) -
         mala_log_proposal(proposal.position, current.position, current.gradient, eta);
}

DdrPosterior::DdrPosterior(SlicedObjective& objective, MapKind kind, bool intercept_only)
    : objective_(&objective),
      kind_(kind),
      intercept_only_(intercept_only),
      d1_(objective.data().predictor_dim()),
      d2_(objective.data().response_dim()),
      hs_(HorseshoeState::ones(d2_, d1_)) {}

Eigen::VectorXd DdrPosterior::to_vector(const LinearMapParams& map) const {
  return intercept_only_ ? Eigen::VectorXd(map.b) : map.flatten();
}

LinearMapParams DdrPosterior::to_map(const Eigen::VectorXd& position) const {
  if (intercept_only_) {
    LinearMapParams map = LinearMapParams::zeros(d1_, d2_, kind_);
    map.b = position;
    return map;
  }
  return LinearMapParams::unflatten(position, d1_, d2_, kind_);
}

std::pair<double, Eigen::VectorXd> DdrPosterior::likelihood(const Eigen::VectorXd& position) {
  auto ev = objective_->evaluate(to_map(position));
  Eigen::VectorXd g = intercept_only_ ? ev.gradient.b : ev.gradient.flatten();
  return {ev.value, std::move(g)};
}

std::pair<double, Eigen::VectorXd> DdrPosterior::prior(const Eigen::VectorXd& position) const {
  if (intercept_only_) return {-0.5 * position.squaredNorm(), -position};
  const LinearMapParams map = to_map(position);
  return {log_prior(map, hs_), grad_log_prior(map, hs_).flatten()};
}

std::pair<double, Eigen::VectorXd> DdrPosterior::operator()(const Eigen::VectorXd& position) {
  auto [nll, gnll] = likelihood(position);
  auto [lp, glp] = prior(position);
  return {lp - nll, glp - gnll};
}

MalaStepResult mala_step(const LinearMapParams& phi, const HorseshoeState& hs, const DDRDataset& data,
                         const MalaConfig& cfg, const ProjectionSet& proj, Rng& rng) {
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("step size eta must be positive");
  SlicedObjective objective(data, proj, cfg.w);
  DdrPosterior posterior(objective, phi.kind, false);
  posterior.set_prior(hs);
  MalaState state;
  state.position = posterior.to_vector(phi);
  std::tie(state.log_density, state.gradient) = posterior(state.position);
  if (!std::isfinite(state.log_density) || !state.gradient.allFinite()) {
    throw std::runtime_error("divergent step");
  }
  const auto outcome = mala_transition(state, posterior, cfg.eta, rng);
  if (outcome == MalaOutcome::Divergent) throw std::runtime_error("divergent step");
  return {posterior.to_map(state.position), outcome == MalaOutcome::Accepted};
}

}  // namespace ddr
