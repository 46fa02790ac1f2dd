#include "ddr/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) + ": matrix is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

double sample_inverse_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw std::invalid_argument("inverse gamma requires positive shape and scale");
  }
  return scale / rng.gamma(shape);
}

Eigen::MatrixXd sample_wishart(const Eigen::MatrixXd& scale, double dof, Rng& rng) {
  const Eigen::Index p = scale.rows();
  if (scale.cols() != p) throw std::invalid_argument("wishart: scale must be square");
  if (!(dof > static_cast<double>(p) - 1.0)) {
    throw std::invalid_argument("wishart: degrees of freedom must exceed dimension - 1");
  }
  const Eigen::MatrixXd chol = cholesky_lower(scale, "wishart scale");
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    bartlett(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (dof - static_cast<double>(i))));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Eigen::MatrixXd factor = chol * bartlett;
  return factor * factor.transpose();
}

Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& psi, double dof, Rng& rng) {
  const Eigen::Index p = psi.rows();
  const Eigen::MatrixXd psi_inv = psi.llt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd w = sample_wishart(0.5 * (psi_inv + psi_inv.transpose()), dof, rng);
  Eigen::MatrixXd sigma = w.llt().solve(Eigen::MatrixXd::Identity(p, p));
  return 0.5 * (sigma + sigma.transpose());
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, Rng& rng) {
  const Eigen::MatrixXd chol = cholesky_lower(cov, "multivariate normal covariance");
  return mean + chol * rng.normal_vector(mean.size());
}

}  // namespace ddr
