#include "ddr/mlr.hpp"

#include <sstream>
#include <stdexcept>

#include "ddr/io.hpp"
#include "ddr/random.hpp"

namespace ddr {

MlrConditionals mlr_conditionals(const Eigen::MatrixXd& xbar, const Eigen::MatrixXd& ybar,
                                 const Eigen::MatrixXd& A) {
  const Eigen::Index k = xbar.cols();
  const Eigen::Index d2 = ybar.cols();
  if (xbar.rows() != ybar.rows()) throw std::invalid_argument("design and response row counts differ");
  if (A.rows() != k || A.cols() != d2) throw std::invalid_argument("coefficient matrix has wrong shape");
  MlrConditionals c;
  c.Lambda_N = xbar.transpose() * xbar + Eigen::MatrixXd::Identity(k, k);
  c.B_N = c.Lambda_N.llt().solve(xbar.transpose() * ybar);  // A0 = 0
  const Eigen::MatrixXd resid = ybar - xbar * A;
  c.V_N = Eigen::MatrixXd::Identity(d2, d2) + resid.transpose() * resid + A.transpose() * A;
  c.nu_N = static_cast<double>(d2 + ybar.rows());
  return c;
}

namespace {

Eigen::MatrixXd stabilized(Eigen::MatrixXd v) {
  v = 0.5 * (v + v.transpose());
  if (Eigen::LLT<Eigen::MatrixXd>(v).info() == Eigen::Success) return v;
  v += 1e-10 * Eigen::MatrixXd::Identity(v.rows(), v.cols());
  if (Eigen::LLT<Eigen::MatrixXd>(v).info() != Eigen::Success) {
    throw std::runtime_error("MLR scale matrix V_N is not positive definite");
  }
  return v;
}

}  // namespace

std::vector<MLRState> run_mlr_chain(const Eigen::MatrixXd& xbar, const Eigen::MatrixXd& ybar, int n_iter,
                                    int burn_in, std::uint64_t seed) {
  if (xbar.rows() < 1) throw std::invalid_argument("MLR requires at least one sample");
  if (!(burn_in >= 0 && burn_in < n_iter)) throw std::invalid_argument("require 0 <= burn_in < n_iter");
  const Eigen::Index k = xbar.cols();
  const Eigen::Index d2 = ybar.cols();
  Rng rng(derive_seed(seed, 3));

  const Eigen::MatrixXd lambda = xbar.transpose() * xbar + Eigen::MatrixXd::Identity(k, k);
  const Eigen::LLT<Eigen::MatrixXd> lambda_llt(lambda);
  const Eigen::MatrixXd B = lambda_llt.solve(xbar.transpose() * ybar);
  const Eigen::MatrixXd lambda_factor_t = lambda_llt.matrixL().transpose();

  std::vector<MLRState> draws;
  draws.reserve(static_cast<std::size_t>(n_iter - burn_in));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, d2);
  for (int iter = 0; iter < n_iter; ++iter) {
    const auto cond = mlr_conditionals(xbar, ybar, A);
    const Eigen::MatrixXd sigma = sample_inverse_wishart(stabilized(cond.V_N), cond.nu_N, rng);

    // Row covariance Lambda^{-1} = R^{-T} R^{-1} with Lambda = R R^T.
    Eigen::MatrixXd z(k, d2);
    for (Eigen::Index c = 0; c < d2; ++c)
      for (Eigen::Index r = 0; r < k; ++r) z(r, c) = rng.normal();
    const Eigen::MatrixXd row_part = lambda_factor_t.triangularView<Eigen::Upper>().solve(z);
    const Eigen::MatrixXd col_factor = sigma.llt().matrixL();
    A = B + row_part * col_factor.transpose();

    if (iter >= burn_in) draws.push_back({A, sigma});
  }
  return draws;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(x.cols()) = x;
  return out;
}

PseudoBulk pseudo_bulk(const DDRDataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd x(n, data.predictor_dim());
  Eigen::MatrixXd y(n, data.response_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = data[static_cast<std::size_t>(i)].predictor.mean();
    y.row(i) = data[static_cast<std::size_t>(i)].response.mean();
  }
  return {with_intercept(x), y};
}

std::string mlr_chain_csv(const std::vector<MLRState>& draws, int burn_in) {
  if (draws.empty()) throw std::invalid_argument("empty chain");
  const Eigen::Index k = draws.front().A.rows();
  const Eigen::Index d2 = draws.front().A.cols();
  std::ostringstream out;
  out << "iter";
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < d2; ++c) out << ",A_" << r << '_' << c;
  for (Eigen::Index r = 0; r < d2; ++r)
    for (Eigen::Index c = 0; c < d2; ++c) out << ",Sigma_" << r << '_' << c;
  out << '\n';
  for (std::size_t t = 0; t < draws.size(); ++t) {
    out << burn_in + static_cast<int>(t);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < d2; ++c) out << ',' << io::format_double(draws[t].A(r, c));
    for (Eigen::Index r = 0; r < d2; ++r)
      for (Eigen::Index c = 0; c < d2; ++c) out << ',' << io::format_double(draws[t].Sigma(r, c));
    out << '\n';
  }
  return out.str();
}

}  // namespace ddr
