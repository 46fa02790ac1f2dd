#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ddr/mlr.hpp"
#include "ddr/rpe.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ddr;

TEST(MlrConditionals, FormulasAndShapes) {
  Rng rng(1);
  const Eigen::MatrixXd x = with_intercept(test::gaussian_atoms(10, 3, rng));
  const Eigen::MatrixXd y = test::gaussian_atoms(10, 2, rng);
  const Eigen::MatrixXd A = test::gaussian_atoms(4, 2, rng);
  const auto c = mlr_conditionals(x, y, A);
  EXPECT_EQ(c.nu_N, 12.0);
  const Eigen::MatrixXd lambda = x.transpose() * x + Eigen::MatrixXd::Identity(4, 4);
  EXPECT_LT((c.Lambda_N - lambda).norm(), 1e-12);
  EXPECT_LT((c.B_N - lambda.inverse() * x.transpose() * y).norm(), 1e-10);
  const Eigen::MatrixXd r = y - x * A;
  EXPECT_LT((c.V_N - (Eigen::MatrixXd::Identity(2, 2) + r.transpose() * r + A.transpose() * A)).norm(), 1e-12);
}

TEST(MlrConditionals, EmptyDataRecoversPrior) {
  const Eigen::MatrixXd x(0, 3);
  const Eigen::MatrixXd y(0, 2);
  const auto c = mlr_conditionals(x, y, Eigen::MatrixXd::Zero(3, 2));
  EXPECT_EQ(c.B_N, Eigen::MatrixXd::Zero(3, 2));
  EXPECT_EQ(c.Lambda_N, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(c.nu_N, 2.0);
}

TEST(MlrChain, DrawsAreValid) {
  Rng rng(2);
  const Eigen::MatrixXd x = with_intercept(test::gaussian_atoms(20, 2, rng));
  const Eigen::MatrixXd y = test::gaussian_atoms(20, 3, rng);
  const auto draws = run_mlr_chain(x, y, 300, 100, 7);
  ASSERT_EQ(draws.size(), 200u);
  for (const auto& d : draws) {
    EXPECT_EQ(d.A.rows(), 3);
    EXPECT_EQ(d.A.cols(), 3);
    EXPECT_LT((d.Sigma - d.Sigma.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(d.Sigma).info(), Eigen::Success);
  }
  const auto again = run_mlr_chain(x, y, 300, 100, 7);
  EXPECT_EQ(mlr_chain_csv(draws, 100), mlr_chain_csv(again, 100));
  const auto csv = mlr_chain_csv(draws, 100);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "iter,A_0_0,A_0_1,A_0_2,A_1_0,A_1_1,A_1_2,A_2_0,A_2_1,A_2_2,Sigma_0_0,Sigma_0_1,Sigma_0_2,Sigma_1_0,Sigma_1_1,"
            "Sigma_1_2,Sigma_2_0,Sigma_2_1,Sigma_2_2");
}

TEST(MlrChain, PosteriorMeanNearLeastSquares) {
  Rng rng(3);
  const int n = 500;
  const Eigen::MatrixXd x = with_intercept(test::gaussian_atoms(n, 2, rng));
  Eigen::MatrixXd truth(3, 2);
  truth << 0.5, -1.0, 1.0, 0.0, -2.0, 0.7;
  const Eigen::MatrixXd y = x * truth + 0.5 * test::gaussian_atoms(n, 2, rng);
  const Eigen::MatrixXd ols = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  const auto draws = run_mlr_chain(x, y, 3000, 500, 11);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 2), sq = Eigen::MatrixXd::Zero(3, 2);
  for (const auto& d : draws) {
    mean += d.A;
    sq += d.A.cwiseProduct(d.A);
  }
  mean /= draws.size();
  const Eigen::MatrixXd sd = (sq / draws.size() - mean.cwiseProduct(mean)).cwiseSqrt();
  for (Eigen::Index i = 0; i < mean.size(); ++i) EXPECT_LT(std::abs(mean.data()[i] - ols.data()[i]), 2.0 * sd.data()[i]);
}

TEST(MlrChain, PosteriorMeanMatchesQuadrature) {
  const std::vector<double> xs{1.0, 2.0, 3.0};
  const std::vector<double> ys{3.1, 3.9, 5.2};
  Eigen::MatrixXd x(3, 1), y(3, 1);
  for (int i = 0; i < 3; ++i) {
    x(i, 0) = xs[i];
    y(i, 0) = ys[i];
  }
  const Eigen::Vector2d oracle = test::mlr_posterior_mean_quadrature(xs, ys);
  const auto draws = run_mlr_chain(with_intercept(x), y, 2000000, 1000, 5);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& d : draws) mean += d.A.col(0);
  mean /= static_cast<double>(draws.size());
  EXPECT_LT(std::abs(mean(0) / oracle(0) - 1.0), 0.01) << mean.transpose() << " vs " << oracle.transpose();
  EXPECT_LT(std::abs(mean(1) / oracle(1) - 1.0), 0.01) << mean.transpose() << " vs " << oracle.transpose();
}

TEST(PseudoBulk, MeansWithInterceptColumn) {
  Rng rng(4);
  std::vector<DistributionPair> pairs;
  for (int i = 0; i < 3; ++i) pairs.push_back({test::gaussian_cloud(5, 2, rng), test::gaussian_cloud(7, 1, rng)});
  const DDRDataset data(pairs);
  const auto bulk = pseudo_bulk(data);
  ASSERT_EQ(bulk.xbar.cols(), 3);
  EXPECT_EQ(bulk.xbar.col(0), Eigen::VectorXd::Ones(3));
  EXPECT_TRUE(bulk.xbar.row(1).tail(2).isApprox(pairs[1].predictor.mean()));
  EXPECT_TRUE(bulk.ybar.row(2).isApprox(pairs[2].response.mean()));
}

TEST(MlrRpe, PointMassPredictionsAgainstInterceptReference) {
  Rng rng(5);
  std::vector<DistributionPair> pairs;
  for (int i = 0; i < 6; ++i) {
    auto x = test::gaussian_cloud(30, 2, rng, 1.0, rng.normal() * 2.0);
    Eigen::MatrixXd y = x.atoms() * Eigen::Matrix2d::Identity() * 2.0;
    pairs.push_back({std::move(x), EmpiricalDistribution(y)});
  }
  const DDRDataset data(pairs);
  const auto bulk = pseudo_bulk(data);
  const auto draws = run_mlr_chain(bulk.xbar, bulk.ybar, 400, 200, 1);
  const auto ref = run_mlr_chain(bulk.xbar.leftCols(1), bulk.ybar, 400, 200, 2);
  const auto r = mlr_rpe(draws, ref, data, sample_projections(100, 2, 3));
  EXPECT_EQ(r.per_draw.size(), 200u);
  EXPECT_GT(r.mean, 0.0);
  EXPECT_LT(r.mean, 1.0);
  EXPECT_LE(r.lower, r.mean);
  EXPECT_GE(r.upper, r.mean);
}
