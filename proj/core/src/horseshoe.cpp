#include "ddr/horseshoe.hpp"

#include <cmath>
#include <stdexcept>

namespace ddr {

HorseshoeState HorseshoeState::ones(Eigen::Index rows, Eigen::Index cols) {
  return {Eigen::MatrixXd::Ones(rows, cols), Eigen::MatrixXd::Ones(rows, cols), 1.0, 1.0};
}

void HorseshoeState::validate() const {
  const auto positive = [](const Eigen::MatrixXd& m) {
    return m.allFinite() && (m.array() > 0.0).all();
  };
  if (!positive(lambda_sq) || !positive(nu) || !(tau_sq > 0.0) || !(zeta > 0.0) ||
      !std::isfinite(tau_sq) || !std::isfinite(zeta)) {
    throw std::invalid_argument("horseshoe state entries must be positive and finite");
  }
  if (lambda_sq.rows() != nu.rows() || lambda_sq.cols() != nu.cols()) {
    throw std::invalid_argument("horseshoe state shape mismatch");
  }
}

InverseGammaParams lambda_sq_conditional(double a_ij, double nu_ij, double tau_sq) {
  return {1.0, 1.0 / nu_ij + a_ij * a_ij / (2.0 * tau_sq)};
}

namespace {

double auxiliary_shape(HorseshoeVariant v) { return v == HorseshoeVariant::Published ? 0.5 : 1.0; }

}  // namespace

InverseGammaParams nu_conditional(double lambda_sq_ij, HorseshoeVariant v) {
  return {auxiliary_shape(v), 1.0 + 1.0 / lambda_sq_ij};
}

InverseGammaParams tau_sq_conditional(const Eigen::MatrixXd& a, const Eigen::MatrixXd& lambda_sq, double zeta,
                                      HorseshoeVariant v) {
  const double d1 = static_cast<double>(a.cols());
  const double d2 = static_cast<double>(a.rows());
  const double quad = (a.array().square() / (2.0 * lambda_sq.array())).sum();
  const double shape = v == HorseshoeVariant::Published ? 0.5 * (d1 + d2) : 0.5 * (d1 * d2 + 1.0);
  return {shape, 1.0 / zeta + quad};
}

InverseGammaParams zeta_conditional(double tau_sq, HorseshoeVariant v) {
  return {auxiliary_shape(v), 1.0 + 1.0 / tau_sq};
}

HorseshoeState horseshoe_gibbs_sweep(const Eigen::MatrixXd& a, const HorseshoeState& hs, Rng& rng,
                                     HorseshoeVariant v) {
  hs.validate();
  if (a.rows() != hs.lambda_sq.rows() || a.cols() != hs.lambda_sq.cols()) {
    throw std::invalid_argument("horseshoe state does not match coefficient matrix");
  }
  HorseshoeState next = hs;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const auto p = lambda_sq_conditional(a(i, j), next.nu(i, j), next.tau_sq);
      next.lambda_sq(i, j) = sample_inverse_gamma(p.shape, p.scale, rng);
    }
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const auto p = nu_conditional(next.lambda_sq(i, j), v);
      next.nu(i, j) = sample_inverse_gamma(p.shape, p.scale, rng);
    }
  }
  {
    const auto p = tau_sq_conditional(a, next.lambda_sq, next.zeta, v);
    next.tau_sq = sample_inverse_gamma(p.shape, p.scale, rng);
  }
  {
    const auto p = zeta_conditional(next.tau_sq, v);
    next.zeta = sample_inverse_gamma(p.shape, p.scale, rng);
  }
  return next;
}

}  // namespace ddr
