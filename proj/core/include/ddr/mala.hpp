#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "ddr/model.hpp"
#include "ddr/random.hpp"

namespace ddr {

enum class ProjectionPolicy { FixedPerRun, ResamplePerIteration };

/// Starting point of a chain. MeanRegression starts linear maps at the ridge
/// regression of donor-mean responses on donor-mean predictors; quadratic
/// maps and intercept-only fits start at the origin either way.
enum class ChainStart { Origin, MeanRegression };

struct MalaConfig {
  double eta = 1e-4;
  double w = 100.0;
  Eigen::Index projections = 1000;
  int n_iter = 1000;
  int burn_in = 500;
  std::uint64_t seed = 0;
  ProjectionPolicy projection_policy = ProjectionPolicy::FixedPerRun;
  HorseshoeVariant horseshoe = HorseshoeVariant::HalfCauchy;
  ChainStart start = ChainStart::MeanRegression;

  void validate() const;
  GenLikConfig likelihood() const { return {w, projections}; }
};

/// Position of a Langevin chain with its log density and gradient.
struct MalaState {
  Eigen::VectorXd position;
  double log_density = 0.0;
  Eigen::VectorXd gradient;
};

enum class MalaOutcome { Accepted, Rejected, Divergent };

/// log q(to | from) without its normalizing constant:
/// -||to - from - eta * grad_from||^2 / (4 eta).
double mala_log_proposal(const Eigen::VectorXd& to, const Eigen::VectorXd& from,
                         const Eigen::VectorXd& grad_from, double eta);

/// log of p(proposal) q(current | proposal) / (p(current) q(proposal | current)).
double mala_log_accept_ratio(const MalaState& current, const MalaState& proposal, double eta);

/// One Metropolis-adjusted Langevin transition.
///
/// `target(position)` returns {log density, gradient}. A proposal with a
/// non-finite density or gradient is rejected and reported as Divergent; the
/// state is left unchanged in that case.
template <class Target>
MalaOutcome mala_transition(MalaState& state, Target&& target, double eta, Rng& rng) {
  const Eigen::VectorXd noise = rng.normal_vector(state.position.size());
  MalaState proposal;
  proposal.position = state.position + eta * state.gradient + std::sqrt(2.0 * eta) * noise;
  if (!proposal.position.allFinite()) return MalaOutcome::Divergent;
  std::tie(proposal.log_density, proposal.gradient) = target(proposal.position);
  if (!std::isfinite(proposal.log_density) || !proposal.gradient.allFinite()) return MalaOutcome::Divergent;
  const double log_alpha = mala_log_accept_ratio(state, proposal, eta);
  const double u = rng.uniform();
  if (std::log(u) < log_alpha) {
    state = std::move(proposal);
    return MalaOutcome::Accepted;
  }
  return MalaOutcome::Rejected;
}

/// Generalized posterior over the regression map for one dataset: the sliced
/// generalized likelihood plus the horseshoe / Gaussian prior.
///
/// In intercept-only mode A is frozen at zero and only b is sampled.
class DdrPosterior {
 public:
  DdrPosterior(SlicedObjective& objective, MapKind kind, bool intercept_only);

  void set_prior(const HorseshoeState& hs) { hs_ = hs; }

  Eigen::VectorXd to_vector(const LinearMapParams& map) const;
  LinearMapParams to_map(const Eigen::VectorXd& position) const;

  /// {negative log likelihood, its gradient} at a position.
  std::pair<double, Eigen::VectorXd> likelihood(const Eigen::VectorXd& position);
  /// {log prior, its gradient} at a position under the current horseshoe state.
  std::pair<double, Eigen::VectorXd> prior(const Eigen::VectorXd& position) const;
  /// {log posterior, gradient}, the target handed to mala_transition.
  std::pair<double, Eigen::VectorXd> operator()(const Eigen::VectorXd& position);

  bool intercept_only() const { return intercept_only_; }

 private:
  SlicedObjective* objective_;
  MapKind kind_;
  bool intercept_only_;
  Eigen::Index d1_;
  Eigen::Index d2_;
  HorseshoeState hs_;
};

struct MalaStepResult {
  LinearMapParams map;
  bool accepted = false;
};

/// A single MALA update of (A, b) given the horseshoe state. Both the current
/// and the proposed density use the same projection set. Throws
/// std::runtime_error("divergent step") on a non-finite density or gradient.
MalaStepResult mala_step(const LinearMapParams& phi, const HorseshoeState& hs, const DDRDataset& data,
                         const MalaConfig& cfg, const ProjectionSet& proj, Rng& rng);

}  // namespace ddr
