#pragma once

#include <Eigen/Dense>

#include "ddr/random.hpp"

namespace ddr {

/// Global-local shrinkage state for the coefficient matrix A (d2 x d1):
/// A_ij ~ N(0, lambda_sq_ij * tau_sq) with half-Cauchy scales expressed
/// through the inverse-gamma auxiliaries nu and zeta.
struct HorseshoeState {
  Eigen::MatrixXd lambda_sq;
  Eigen::MatrixXd nu;
  double tau_sq = 1.0;
  double zeta = 1.0;

  static HorseshoeState ones(Eigen::Index rows, Eigen::Index cols);

  /// Throws std::invalid_argument if any entry is nonpositive or non-finite.
  void validate() const;
};

/// Inverse-gamma (shape, scale) pair.
struct InverseGammaParams {
  double shape;
  double scale;
};

/// Which set of complete conditionals the Gibbs sweep uses.
///
/// Published: nu and zeta with shape 1/2, tau_sq with shape (d1 + d2) / 2.
/// These shapes imply a prior on A that cannot be normalized; the local
/// scales drift toward zero and chains can freeze.
/// HalfCauchy: the conditionals implied by half-Cauchy(0, 1) priors on
/// lambda_ij and tau: nu and zeta with shape 1, tau_sq with shape
/// (d1 * d2 + 1) / 2.
enum class HorseshoeVariant { Published, HalfCauchy };

InverseGammaParams lambda_sq_conditional(double a_ij, double nu_ij, double tau_sq);
InverseGammaParams nu_conditional(double lambda_sq_ij, HorseshoeVariant v = HorseshoeVariant::HalfCauchy);
InverseGammaParams tau_sq_conditional(const Eigen::MatrixXd& a, const Eigen::MatrixXd& lambda_sq, double zeta,
                                      HorseshoeVariant v = HorseshoeVariant::HalfCauchy);
InverseGammaParams zeta_conditional(double tau_sq, HorseshoeVariant v = HorseshoeVariant::HalfCauchy);

/// One Gibbs sweep in the order lambda_sq, nu, tau_sq, zeta.
HorseshoeState horseshoe_gibbs_sweep(const Eigen::MatrixXd& a, const HorseshoeState& hs, Rng& rng,
                                     HorseshoeVariant v = HorseshoeVariant::HalfCauchy);

}  // namespace ddr
