#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddr/model.hpp"

namespace ddr {

/// Conjugate Bayesian multivariate linear regression on per-sample means.
/// A has the intercept as its first row: (d1 + 1) x d2.
struct MLRState {
  Eigen::MatrixXd A;
  Eigen::MatrixXd Sigma;
};

/// Statistics of the complete conditionals with prior mean A0 = 0:
///   Sigma | A ~ IW(V_N, nu_N),  A | Sigma ~ MN(B_N, Lambda_N^{-1}, Sigma).
struct MlrConditionals {
  Eigen::MatrixXd V_N;
  Eigen::MatrixXd B_N;
  Eigen::MatrixXd Lambda_N;
  double nu_N = 0.0;
};

MlrConditionals mlr_conditionals(const Eigen::MatrixXd& xbar, const Eigen::MatrixXd& ybar,
                                 const Eigen::MatrixXd& A);

/// Gibbs sampler alternating Sigma | A and A | Sigma, started at A = 0.
/// xbar is N x (d1 + 1) with a leading column of ones. Returns the
/// n_iter - burn_in retained draws.
std::vector<MLRState> run_mlr_chain(const Eigen::MatrixXd& xbar, const Eigen::MatrixXd& ybar, int n_iter,
                                    int burn_in, std::uint64_t seed);

/// Per-sample atom means; xbar carries the leading ones column.
struct PseudoBulk {
  Eigen::MatrixXd xbar;
  Eigen::MatrixXd ybar;
};

PseudoBulk pseudo_bulk(const DDRDataset& data);

/// Prepends a column of ones.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x);

/// Columns: iter, A_r_c over the (d1 + 1) x d2 matrix, Sigma_r_c.
std::string mlr_chain_csv(const std::vector<MLRState>& draws, int burn_in);

}  // namespace ddr
