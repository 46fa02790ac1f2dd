#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ddr {

/// Derives an independent substream seed from a master seed.
///
/// Every stochastic component (projection sets, per-pair generators, chains,
/// edges) draws from its own stream id, so results do not depend on the order
/// in which components happen to be executed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source shared by all samplers. Deterministic for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

  Eigen::VectorXd normal_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Draw from the inverse-gamma law with density proportional to
/// x^(-shape-1) exp(-scale/x). Throws std::invalid_argument unless both
/// parameters are positive and finite.
double sample_inverse_gamma(double shape, double scale, Rng& rng);

/// Wishart(scale, dof) via the Bartlett decomposition; mean dof * scale.
Eigen::MatrixXd sample_wishart(const Eigen::MatrixXd& scale, double dof, Rng& rng);

/// Inverse-Wishart with scale matrix psi and dof degrees of freedom,
/// parameterized so that the mean is psi / (dof - p - 1).
Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& psi, double dof, Rng& rng);

/// One draw from N(mean, cov).
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, Rng& rng);

}  // namespace ddr
