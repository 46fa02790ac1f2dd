#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ddr/graph.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ddr;

namespace {

Chain chain_with_max_abs(const std::vector<double>& values) {
  Chain c;
  for (std::size_t t = 0; t < values.size(); ++t) {
    Draw d;
    d.iter = static_cast<int>(t);
    d.map = LinearMapParams::zeros(2, 2);
    d.map.A(1, 0) = -values[t];
    d.map.A(0, 1) = 0.5 * values[t];
    d.hs = HorseshoeState::ones(2, 2);
    c.draws.push_back(d);
    c.accept_flags.push_back(true);
  }
  return c;
}

std::vector<std::vector<double>> raw(const std::vector<CoefficientTrace>& traces) {
  std::vector<std::vector<double>> out;
  for (const auto& t : traces) out.push_back(t.max_abs);
  return out;
}

}  // namespace

TEST(EpsilonInclusion, Examples) {
  const std::vector<double> v{0.5, 1.5, 2.0, 0.1};
  EXPECT_DOUBLE_EQ(epsilon_inclusion_prob(v, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(epsilon_inclusion_prob(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(epsilon_inclusion_prob(v, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(epsilon_inclusion_prob(v, 2.0), 0.0);
  const Chain c = chain_with_max_abs(v);
  EXPECT_DOUBLE_EQ(epsilon_inclusion_prob(c, 1.0), 0.5);
  const auto trace = coefficient_trace({"a", "b"}, c);
  EXPECT_EQ(trace.max_abs, v);
}

TEST(FdrFnr, HandComputedExamples) {
  const std::vector<double> none{0.3, 0.7};
  auto r = fdr_fnr(none, {false, false});
  EXPECT_EQ(r.fdr, 0.0);
  EXPECT_NEAR(r.fnr, 1.0 / 2.001, 1e-12);

  const std::vector<double> all{0.9, 0.9, 0.9};
  r = fdr_fnr(all, {true, true, true});
  EXPECT_NEAR(r.fdr, 0.3 / 3.001, 1e-12);
  EXPECT_NEAR(r.fnr, 0.0, 1e-12);

  const std::vector<double> mixed{0.8, 0.2};
  r = fdr_fnr(mixed, {true, false});
  EXPECT_NEAR(r.fdr, 0.2 / 1.001, 1e-12);
  EXPECT_NEAR(r.fnr, 0.2 / 1.001, 1e-12);
}

TEST(SelectEpsilon, AlwaysIncludedEdgePicksSmallestEpsilon) {
  std::vector<CoefficientTrace> traces{{{"a", "b"}, {5.0, 6.0, 7.0}}};
  const auto d = select_epsilon(traces, 0.10, std::vector<double>{0.1, 0.2, 0.3});
  EXPECT_EQ(d.epsilon, 0.1);
  EXPECT_TRUE(d.feasible);
  EXPECT_TRUE(d.edges[0].include);
  EXPECT_NEAR(d.fdr, 0.0, 1e-12);
  const auto all = select_epsilon(traces, 0.10, std::vector<double>{0.1, 0.2, 0.3}, EpsilonSearch::All);
  EXPECT_EQ(all.epsilon, 0.1);
}

TEST(SelectEpsilon, UnrestrictedSearchIncludesEverything) {
  const auto traces = test::synthetic_traces(7, 12, 40);
  const auto all = select_epsilon(traces, 0.10, std::nullopt, EpsilonSearch::All);
  EXPECT_EQ(all.epsilon, 0.0);
  EXPECT_EQ(all.fnr, 0.0);
  for (const auto& e : all.edges) EXPECT_TRUE(e.include);

  const auto mixed = select_epsilon(traces, 0.10);
  const auto n = std::count_if(mixed.edges.begin(), mixed.edges.end(), [](const EdgeDecision& e) { return e.include; });
  EXPECT_GT(n, 0);
  EXPECT_LT(n, 12);
  EXPECT_TRUE(mixed.feasible);
  EXPECT_LE(mixed.fdr, 0.10);
}

TEST(SelectEpsilon, NontrivialFallsBackWhenNoMixedDecisionIsFeasible) {
  // Both edges cross 0.5 together, so every grid point includes all or none.
  std::vector<CoefficientTrace> traces{{{"a", "b"}, {1.0, 2.0, 3.0}}, {{"b", "a"}, {1.0, 2.0, 3.0}}};
  const auto d = select_epsilon(traces, 0.10);
  const auto all = select_epsilon(traces, 0.10, std::nullopt, EpsilonSearch::All);
  EXPECT_EQ(d.epsilon, all.epsilon);
  EXPECT_EQ(d.epsilon, 0.0);
}

TEST(SelectEpsilon, SearchNamesRoundTrip) {
  for (auto s : {EpsilonSearch::All, EpsilonSearch::Nontrivial}) EXPECT_EQ(epsilon_search_from_string(to_string(s)), s);
  EXPECT_THROW(epsilon_search_from_string("some"), std::invalid_argument);
}

TEST(SelectEpsilon, EmptyGridThrows) {
  std::vector<CoefficientTrace> traces{{{"a", "b"}, {1.0}}};
  EXPECT_THROW(select_epsilon(traces, 0.1, std::vector<double>{}), std::invalid_argument);
}

TEST(SelectEpsilon, MatchesBruteForceOnFineGrid) {
  std::vector<double> fine;
  for (int k = 0; k <= 6000; ++k) fine.push_back(k * 1e-3);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto traces = test::synthetic_traces(seed, 12, 40);
    for (auto [bound, search] : {std::pair{0.05, EpsilonSearch::Nontrivial}, std::pair{0.10, EpsilonSearch::Nontrivial},
                                 std::pair{0.25, EpsilonSearch::Nontrivial}, std::pair{0.10, EpsilonSearch::All}}) {
      const bool nontrivial = search == EpsilonSearch::Nontrivial;
      const auto impl = select_epsilon(traces, bound, std::nullopt, search);
      const auto brute = test::brute_force_threshold(raw(traces), fine, bound, nontrivial);
      EXPECT_EQ(impl.feasible, brute.feasible) << seed;
      EXPECT_EQ(impl.fdr, brute.fdr) << seed;
      EXPECT_EQ(impl.fnr, brute.fnr) << seed;
      // Both grids must land in the same piece of the step function.
      const auto at_brute = decide_at(traces, brute.epsilon);
      for (std::size_t e = 0; e < traces.size(); ++e) EXPECT_EQ(impl.edges[e].include, at_brute.edges[e].include);

      const auto same_grid = select_epsilon(traces, bound, fine, search);
      EXPECT_EQ(same_grid.epsilon, brute.epsilon) << seed;
      EXPECT_EQ(same_grid.fdr, brute.fdr) << seed;
      EXPECT_EQ(same_grid.fnr, brute.fnr) << seed;
    }
  }
}

TEST(SelectEpsilon, InfeasibleReturnsLeastFdr) {
  // Two edges hovering around the decision boundary: any inclusion carries
  // an expected false discovery rate near one half.
  std::vector<CoefficientTrace> traces{{{"a", "b"}, {0.0, 0.0, 1.0, 1.0, 1.0}},
                                       {{"b", "a"}, {0.0, 0.0, 1.0, 1.0, 1.0}}};
  const auto d = select_epsilon(traces, 0.0, std::vector<double>{0.5});
  EXPECT_FALSE(d.feasible);
  const auto brute = test::brute_force_threshold(raw(traces), {0.5}, 0.0);
  EXPECT_FALSE(brute.feasible);
  EXPECT_EQ(d.fdr, brute.fdr);
}

TEST(SelectEpsilon, ReportedRatesAreRecomputable) {
  const auto traces = test::synthetic_traces(99, 8, 25);
  const auto d = select_epsilon(traces, 0.1);
  std::vector<double> eip;
  std::vector<bool> include;
  for (std::size_t e = 0; e < traces.size(); ++e) {
    eip.push_back(epsilon_inclusion_prob(traces[e].max_abs, d.epsilon));
    EXPECT_EQ(d.edges[e].eip, eip.back());
    EXPECT_EQ(d.edges[e].include, eip.back() > 0.5);
    include.push_back(d.edges[e].include);
  }
  const auto r = fdr_fnr(eip, include);
  EXPECT_EQ(r.fdr, d.fdr);
  EXPECT_EQ(r.fnr, d.fnr);
  EXPECT_GE(d.fdr, 0.0);
  EXPECT_LE(d.fdr, 1.0);
  EXPECT_GE(d.fnr, 0.0);
  EXPECT_LE(d.fnr, 1.0);
}

TEST(EdgeWeights, ExponentialKernel) {
  EXPECT_NEAR(edge_rpe_weight({"a", "b"}, 0.5, 1.0).weight, 0.6065306597126334, 1e-12);
  EXPECT_EQ(edge_rpe_weight({"a", "b"}, 0.0, 0.2).weight, 1.0);
  EXPECT_LT(edge_rpe_weight({"a", "b"}, 1e6, 0.2).weight, 1e-300);
}

TEST(MlrInclusion, DropsInterceptRow) {
  MLRState s;
  s.A = Eigen::MatrixXd::Zero(3, 2);
  s.A.row(0) << 10.0, -10.0;
  s.A(2, 1) = -0.4;
  s.Sigma = Eigen::MatrixXd::Identity(2, 2);
  const auto coef = mlr_effective_coefficients({s});
  ASSERT_EQ(coef[0].rows(), 2);
  const auto trace = mlr_inclusion_chain({"a", "b"}, {s});
  EXPECT_DOUBLE_EQ(trace.max_abs[0], 0.4);

  MLRState zero{Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Identity(2, 2)};
  zero.A.row(0).setConstant(3.0);
  EXPECT_EQ(epsilon_inclusion_prob(mlr_inclusion_chain({"a", "b"}, {zero}).max_abs, 1e-9), 0.0);
}

TEST(EdgeSpecValidation, RejectsSelfLoopsAndEmptyData) {
  Rng rng(1);
  const DDRDataset data({{test::gaussian_cloud(5, 2, rng), test::gaussian_cloud(5, 2, rng)}});
  EXPECT_THROW((EdgeSpec{{"a", "a"}, data}.validate()), std::invalid_argument);
  EXPECT_THROW((EdgeSpec{{"a", "b"}, DDRDataset()}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((EdgeSpec{{"a", "b"}, data}.validate()));
}

TEST(FitEdges, ResultsIndependentOfThreadCount) {
  Rng rng(4);
  std::vector<EdgeSpec> edges;
  for (auto [s, t] : {std::pair{"a", "b"}, std::pair{"b", "c"}, std::pair{"c", "a"}}) {
    std::vector<DistributionPair> pairs;
    for (int i = 0; i < 4; ++i) pairs.push_back({test::gaussian_cloud(10, 2, rng), test::gaussian_cloud(10, 2, rng)});
    edges.push_back({{s, t}, DDRDataset(pairs)});
  }
  MalaConfig cfg;
  cfg.eta = 1e-3;
  cfg.w = 10;
  cfg.projections = 20;
  cfg.n_iter = 60;
  cfg.burn_in = 20;
  cfg.seed = 17;
  const auto serial = fit_edges(edges, cfg, MapKind::Linear, 1);
  const auto parallel = fit_edges(edges, cfg, MapKind::Linear, 3);
  ASSERT_EQ(serial.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(serial[e].id, edges[e].id);
    EXPECT_EQ(parallel[e].id, edges[e].id);
    EXPECT_EQ(chain_csv(serial[e].posterior.chain), chain_csv(parallel[e].posterior.chain));
    EXPECT_EQ(serial[e].posterior.rpe.per_draw, parallel[e].posterior.rpe.per_draw);
  }
  // Reordering edges does not change any edge's chain.
  std::vector<EdgeSpec> reversed(edges.rbegin(), edges.rend());
  const auto rev = fit_edges(reversed, cfg);
  EXPECT_EQ(chain_csv(rev[2].posterior.chain), chain_csv(serial[0].posterior.chain));
}

TEST(GraphReport, JsonAndDot) {
  std::vector<CoefficientTrace> traces{{{"a", "b"}, {2.0, 2.0}}, {{"b", "a"}, {0.0, 0.0}}};
  const auto d = select_epsilon(traces);
  std::vector<EdgeWeight> w{edge_rpe_weight({"a", "b"}, 0.1), edge_rpe_weight({"b", "a"}, 0.9)};
  std::vector<RpeSummary> r{{0.1, 0.05, 0.2, {}}, {0.9, 0.8, 1.0, {}}};
  const auto j = nlohmann::json::parse(graph_report_json(w, d, r, R"({"seed": 3})"));
  EXPECT_EQ(j["nodes"], nlohmann::json::array({"a", "b"}));
  ASSERT_EQ(j["edges"].size(), 2u);
  EXPECT_EQ(j["edges"][0]["source"], "a");
  EXPECT_TRUE(j["edges"][0]["included"].get<bool>());
  EXPECT_FALSE(j["edges"][1]["included"].get<bool>());
  EXPECT_DOUBLE_EQ(j["edges"][1]["mean_rpe"].get<double>(), 0.9);
  EXPECT_EQ(j["config"]["seed"], 3);
  for (auto key : {"selected_epsilon", "fdr", "fnr", "feasible"}) EXPECT_TRUE(j.contains(key)) << key;

  const auto dot = weighted_graph_dot(w);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("\"a\" -> \"b\""), std::string::npos);
  const auto sel = selected_graph_dot(d);
  EXPECT_NE(sel.find("\"a\" -> \"b\""), std::string::npos);
  EXPECT_EQ(sel.find("\"b\" -> \"a\""), std::string::npos);
}
