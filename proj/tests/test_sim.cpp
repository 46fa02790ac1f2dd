#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "ddr/sim.hpp"
#include "support.hpp"

using namespace ddr;

namespace {

Chain chain_of(const std::vector<Eigen::MatrixXd>& as) {
  Chain c;
  for (const auto& a : as) {
    Draw d;
    d.map = LinearMapParams::zeros(a.cols(), a.rows());
    d.map.A = a;
    d.hs = HorseshoeState::ones(a.rows(), a.cols());
    c.draws.push_back(d);
  }
  return c;
}

std::vector<SemiSimEdge> semi_edges(Rng& rng) {
  std::vector<SemiSimEdge> edges;
  for (auto [s, t, inc] : {std::tuple{"a", "b", true}, std::tuple{"b", "a", false}, std::tuple{"a", "c", true}}) {
    SemiSimEdge e{{s, t}, {}, 2, inc};
    for (int i = 0; i < 4; ++i) e.predictors.push_back(test::gaussian_cloud(20 + i, 3, rng));
    edges.push_back(std::move(e));
  }
  return edges;
}

}  // namespace

TEST(GenScenario, AtomCountsAndSizes) {
  ScenarioConfig cfg;
  cfg.n = 7;
  cfg.n_test = 5;
  cfg.seed = 3;
  const auto data = gen_scenario(cfg);
  ASSERT_EQ(data.train.size(), 7u);
  ASSERT_EQ(data.test.size(), 5u);
  for (const auto& p : data.train.pairs()) {
    EXPECT_EQ(p.predictor.size(), 100);
    EXPECT_EQ(p.response.size(), 100);
    EXPECT_EQ(p.predictor.dim(), 2);
  }
}

TEST(GenScenario, ZeroNoiseGivesExactImages) {
  for (auto s : {Scenario::Gauss1, Scenario::Mixture2, Scenario::Quadratic}) {
    ScenarioConfig cfg;
    cfg.scenario = s;
    cfg.n = 3;
    cfg.n_test = 1;
    cfg.noise_sd = 0.0;
    const auto data = gen_scenario(cfg);
    EXPECT_EQ(data.truth.kind, s == Scenario::Quadratic ? MapKind::QuadraticElementwise : MapKind::Linear);
    for (const auto& p : data.train.pairs()) {
      EXPECT_LT((pushforward(data.truth, p.predictor).atoms() - p.response.atoms()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(GenScenario, NoiseDefaults) {
  ScenarioConfig cfg;
  EXPECT_EQ(cfg.effective_noise_sd(), 1.0);
  cfg.scenario = Scenario::Mixture2;
  EXPECT_EQ(cfg.effective_noise_sd(), 1.0);
  cfg.scenario = Scenario::Quadratic;
  EXPECT_EQ(cfg.effective_noise_sd(), 0.1);
  cfg.noise_sd = 0.5;
  EXPECT_EQ(cfg.effective_noise_sd(), 0.5);
}

TEST(GenScenario, NoiseLevelMatchesConfig) {
  ScenarioConfig cfg;
  cfg.n = 50;
  cfg.n_test = 1;
  const auto data = gen_scenario(cfg);
  double ss = 0.0;
  double count = 0.0;
  for (const auto& p : data.train.pairs()) {
    const Eigen::MatrixXd r = p.response.atoms() - pushforward(data.truth, p.predictor).atoms();
    ss += r.squaredNorm();
    count += static_cast<double>(r.size());
  }
  EXPECT_NEAR(std::sqrt(ss / count), 1.0, 0.03);
}

TEST(GenScenario, MixturePredictorMean) {
  ScenarioConfig cfg;
  cfg.scenario = Scenario::Mixture2;
  cfg.n = 1000;
  cfg.n_test = 1;
  cfg.seed = 8;
  const auto data = gen_scenario(cfg);
  Eigen::RowVector2d sum = Eigen::RowVector2d::Zero();
  double count = 0.0;
  for (const auto& p : data.train.pairs()) {
    sum += p.predictor.atoms().colwise().sum();
    count += static_cast<double>(p.predictor.size());
  }
  EXPECT_EQ(count, 1e5);
  const Eigen::RowVector2d mean = sum / count;
  EXPECT_NEAR(mean(0), 0.0, 0.1);
  EXPECT_NEAR(mean(1), 16.0 / 3.0, 0.1);
}

TEST(GenScenario, DeterministicAndNestedAcrossN) {
  ScenarioConfig small;
  small.n = 10;
  small.n_test = 4;
  small.seed = 21;
  ScenarioConfig large = small;
  large.n = 50;
  const auto a = gen_scenario(small);
  const auto b = gen_scenario(small);
  const auto c = gen_scenario(large);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(a.train[i].predictor, b.train[i].predictor);
    EXPECT_EQ(a.train[i].response, b.train[i].response);
    EXPECT_EQ(a.train[i].predictor, c.train[i].predictor);
    EXPECT_EQ(a.train[i].response, c.train[i].response);
  }
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.test[i].response, c.test[i].response);
  ScenarioConfig other = small;
  other.seed = 22;
  EXPECT_FALSE(gen_scenario(other).train[0].predictor == a.train[0].predictor);
}

TEST(GenScenario, RejectsInvalidConfigs) {
  ScenarioConfig cfg;
  cfg.scenario = Scenario::SemiSimFull;
  EXPECT_THROW(gen_scenario(cfg), std::invalid_argument);
  cfg = {};
  cfg.n = 0;
  EXPECT_THROW(gen_scenario(cfg), std::invalid_argument);
  cfg = {};
  cfg.noise_sd = -1.0;
  EXPECT_THROW(gen_scenario(cfg), std::invalid_argument);
  cfg = {};
  cfg.truth = LinearMapParams::zeros(3, 2);
  EXPECT_THROW(gen_scenario(cfg), std::invalid_argument);
  EXPECT_THROW(scenario_from_string("gauss3"), std::invalid_argument);
  for (auto s : {Scenario::Gauss1, Scenario::Mixture2, Scenario::Quadratic, Scenario::SemiSimNoEdge,
                 Scenario::SemiSimFull, Scenario::SemiSimSparse}) {
    EXPECT_EQ(scenario_from_string(to_string(s)), s);
  }
}

TEST(CoefficientPools, SingleIncludedEdge) {
  Eigen::MatrixXd a(1, 2);
  a << 0.5, -1.5;
  const auto pools = build_coefficient_pools({chain_of({a, 2.0 * a})}, {true});
  EXPECT_EQ(pools.require(PoolLabel::Included).values.size(), 4u);
  EXPECT_EQ(pools.require(PoolLabel::Included).label, PoolLabel::Included);
  try {
    pools.require(PoolLabel::Excluded);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("no edges with flag"), std::string::npos);
  }
}

TEST(CoefficientPools, SizesPartitionAllDraws) {
  Rng rng(2);
  std::vector<Chain> chains;
  std::vector<bool> include;
  const int edges = 5, draws = 7;
  std::multiset<double> all;
  for (int e = 0; e < edges; ++e) {
    std::vector<Eigen::MatrixXd> as;
    for (int t = 0; t < draws; ++t) {
      as.push_back(test::gaussian_atoms(2, 3, rng));
      all.insert(as.back().data(), as.back().data() + 6);
    }
    chains.push_back(chain_of(as));
    include.push_back(e % 2 == 0);
  }
  const auto pools = build_coefficient_pools(chains, include);
  const auto& p0 = pools.require(PoolLabel::Excluded).values;
  const auto& p1 = pools.require(PoolLabel::Included).values;
  EXPECT_EQ(p0.size() + p1.size(), static_cast<std::size_t>(edges * draws * 6));
  EXPECT_EQ(p1.size(), static_cast<std::size_t>(3 * draws * 6));
  std::multiset<double> joined(p0.begin(), p0.end());
  joined.insert(p1.begin(), p1.end());
  EXPECT_EQ(joined, all);
}

TEST(SemiSim, TruthDrawnFromRequestedPools) {
  CoefficientPools pools;
  pools.p0 = CoefficientPool{{0.0, 0.01, -0.01}, PoolLabel::Excluded};
  pools.p1 = CoefficientPool{{2.0, -3.0}, PoolLabel::Included};
  Rng rng(5);
  const auto edges = semi_edges(rng);
  const auto in = [](const std::vector<double>& pool, double v) {
    return std::find(pool.begin(), pool.end(), v) != pool.end();
  };
  for (auto scenario : {Scenario::SemiSimNoEdge, Scenario::SemiSimFull, Scenario::SemiSimSparse}) {
    const auto out = gen_semi_sim(scenario, pools, edges, 9);
    ASSERT_EQ(out.size(), edges.size());
    for (std::size_t e = 0; e < out.size(); ++e) {
      const bool planted = scenario == Scenario::SemiSimFull || (scenario == Scenario::SemiSimSparse && edges[e].include);
      EXPECT_EQ(out[e].planted, planted);
      const auto& pool = planted ? pools.p1->values : pools.p0->values;
      for (Eigen::Index k = 0; k < out[e].truth.A.size(); ++k) EXPECT_TRUE(in(pool, out[e].truth.A.data()[k]));
      for (Eigen::Index k = 0; k < out[e].truth.b.size(); ++k) EXPECT_TRUE(in(pool, out[e].truth.b(k)));
      EXPECT_EQ(out[e].truth.A.rows(), 2);
      EXPECT_EQ(out[e].truth.A.cols(), 3);
      for (std::size_t i = 0; i < edges[e].predictors.size(); ++i) {
        EXPECT_EQ(out[e].dataset[i].response.size(), edges[e].predictors[i].size());
        EXPECT_EQ(out[e].dataset[i].predictor, edges[e].predictors[i]);
      }
    }
  }
  pools.p1.reset();
  EXPECT_THROW(gen_semi_sim(Scenario::SemiSimFull, pools, edges, 9), std::invalid_argument);
  EXPECT_NO_THROW(gen_semi_sim(Scenario::SemiSimNoEdge, pools, edges, 9));
  EXPECT_THROW(gen_semi_sim(Scenario::Gauss1, pools, edges, 9), std::invalid_argument);
}

TEST(SemiSim, ZeroNoiseIsExactAffineImage) {
  CoefficientPools pools;
  pools.p1 = CoefficientPool{{0.7, -1.2, 0.3}, PoolLabel::Included};
  Rng rng(6);
  const auto edges = semi_edges(rng);
  const auto out = gen_semi_sim(Scenario::SemiSimFull, pools, edges, 1, 0.0);
  for (const auto& r : out) {
    for (const auto& p : r.dataset.pairs()) {
      EXPECT_LT((pushforward(r.truth, p.predictor).atoms() - p.response.atoms()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  const auto again = gen_semi_sim(Scenario::SemiSimFull, pools, edges, 1, 0.0);
  EXPECT_EQ(again[1].truth.A, out[1].truth.A);
}

TEST(ParamError, Examples) {
  Rng rng(7);
  const auto truth = test::random_map(2, 2, rng);
  EXPECT_EQ(param_error(truth, truth), 0.0);
  auto shifted = truth;
  shifted.A += Eigen::Matrix2d::Identity();
  EXPECT_NEAR(param_error(shifted, truth), 2.0, 1e-12);
  const auto other = test::random_map(2, 2, rng);
  double direct = 0.0;
  for (int i = 0; i < 2; ++i) {
    direct += (other.b(i) - truth.b(i)) * (other.b(i) - truth.b(i));
    for (int j = 0; j < 2; ++j) direct += (other.A(i, j) - truth.A(i, j)) * (other.A(i, j) - truth.A(i, j));
  }
  EXPECT_NEAR(param_error(other, truth), direct, 1e-12);
  EXPECT_THROW(param_error(LinearMapParams::zeros(3, 2), truth), std::invalid_argument);
}

TEST(InverseWishartDraws, CholeskySucceeds) {
  Rng rng(10);
  for (int k = 0; k < 200; ++k) {
    const Eigen::MatrixXd s = sample_inverse_wishart(Eigen::MatrixXd::Identity(2, 2), 6.0, rng);
    EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(s).info(), Eigen::Success);
  }
}
