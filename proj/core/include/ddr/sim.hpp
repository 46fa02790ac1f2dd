#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddr/chain.hpp"
#include "ddr/graph.hpp"
#include "ddr/model.hpp"

namespace ddr {

enum class Scenario { Gauss1, Mixture2, Quadratic, SemiSimNoEdge, SemiSimFull, SemiSimSparse };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ScenarioConfig {
  Scenario scenario = Scenario::Gauss1;
  std::size_t n = 10;
  std::size_t n_test = 200;
  Eigen::Index m = 100;
  std::uint64_t seed = 0;
  /// Defaults to 1 for Gauss1/Mixture2 and 0.1 for Quadratic and the
  /// semi-simulations.
  std::optional<double> noise_sd;
  /// Add one noise vector per distribution instead of one per atom.
  bool shared_shift = false;
  /// Defaults to A = [[1, 0], [1, 1]], b = [1, 1].
  std::optional<LinearMapParams> truth;

  double effective_noise_sd() const;
  LinearMapParams effective_truth() const;
  void validate() const;
};

struct ScenarioData {
  DDRDataset train;
  DDRDataset test;
  LinearMapParams truth;
};

/// Generates training and test pairs under one truth. Pair i always comes
/// from its own random substream, so the first n pairs of a larger dataset
/// equal the dataset generated with n.
ScenarioData gen_scenario(const ScenarioConfig& cfg);

LinearMapParams default_truth(MapKind kind = MapKind::Linear);

/// Response atoms for one predictor cloud: f(x) + noise.
EmpiricalDistribution simulate_response(const LinearMapParams& truth, const EmpiricalDistribution& predictor,
                                        double noise_sd, bool shared_shift, Rng& rng);

enum class PoolLabel { Excluded, Included };

/// Flat list of posterior coefficient draws from either the included or the
/// excluded edges.
struct CoefficientPool {
  std::vector<double> values;
  PoolLabel label = PoolLabel::Included;
};

struct CoefficientPools {
  std::optional<CoefficientPool> p0;
  std::optional<CoefficientPool> p1;

  /// Throws "no edges with flag ..." when the requested pool is empty.
  const CoefficientPool& require(PoolLabel label) const;
};

CoefficientPools build_coefficient_pools(const std::vector<Chain>& chains, const std::vector<bool>& include);

struct SemiSimEdge {
  EdgeId id;
  std::vector<EmpiricalDistribution> predictors;
  Eigen::Index response_dim = 0;
  /// Planted edge indicator; only read by SemiSimSparse.
  bool include = false;
};

struct SemiSimResult {
  EdgeId id;
  DDRDataset dataset;
  LinearMapParams truth;
  bool planted = false;
};

/// Draws every entry of A_e and b_e from p0 (no-edge), p1 (full graph) or,
/// for the sparse scenario, from p1 on planted edges and p0 elsewhere, then
/// simulates responses from the given predictor clouds.
std::vector<SemiSimResult> gen_semi_sim(Scenario scenario, const CoefficientPools& pools,
                                        const std::vector<SemiSimEdge>& edges, std::uint64_t seed,
                                        double noise_sd = 0.1, bool shared_shift = false);

/// ||A - A*||_F^2 + ||b - b*||^2.
double param_error(const LinearMapParams& estimate, const LinearMapParams& truth);

}  // namespace ddr
