#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ddr/empirical.hpp"
#include "ddr/horseshoe.hpp"
#include "ddr/ot.hpp"

namespace ddr {

enum class MapKind { Linear, QuadraticElementwise };

/// Regression map f(x) = Ax + b, or its elementwise square (Ax + b)^2.
struct LinearMapParams {
  Eigen::MatrixXd A;  // d2 x d1
  Eigen::VectorXd b;  // d2
  MapKind kind = MapKind::Linear;

  static LinearMapParams zeros(Eigen::Index d1, Eigen::Index d2, MapKind kind = MapKind::Linear);

  Eigen::Index in_dim() const { return A.cols(); }
  Eigen::Index out_dim() const { return A.rows(); }

  /// Flattened parameter vector: A in column-major order, then b.
  Eigen::VectorXd flatten() const;
  static LinearMapParams unflatten(const Eigen::VectorXd& phi, Eigen::Index d1, Eigen::Index d2, MapKind kind);
};

struct DistributionPair {
  EmpiricalDistribution predictor;
  EmpiricalDistribution response;
};

/// Paired predictor/response distributions. All predictors share d1, all
/// responses share d2; atom counts may differ between pairs.
class DDRDataset {
 public:
  DDRDataset() = default;
  explicit DDRDataset(std::vector<DistributionPair> pairs);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  Eigen::Index predictor_dim() const;
  Eigen::Index response_dim() const;
  const std::vector<DistributionPair>& pairs() const { return pairs_; }
  const DistributionPair& operator[](std::size_t i) const { return pairs_[i]; }

  DDRDataset subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<DistributionPair> pairs_;
};

struct GenLikConfig {
  double w = 100.0;
  Eigen::Index projections = 1000;

  void validate() const;
};

struct MapGradient {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  Eigen::VectorXd flatten() const;
};

/// Applies the map to each atom; atom count and order are preserved.
EmpiricalDistribution pushforward(const LinearMapParams& map, const EmpiricalDistribution& f);

/// w * sum_i SW_2^2(f # F_i, G_i) estimated with one shared projection set.
double neg_log_gen_likelihood(const LinearMapParams& map, const DDRDataset& data, const GenLikConfig& cfg,
                              const ProjectionSet& proj);

/// Gradient of neg_log_gen_likelihood with respect to (A, b), taken at the
/// optimal one-dimensional couplings (envelope theorem).
MapGradient grad_neg_log_gen_likelihood(const LinearMapParams& map, const DDRDataset& data,
                                        const GenLikConfig& cfg, const ProjectionSet& proj);

/// Horseshoe log prior on A plus N(0, I) on b, without the 2*pi constants.
double log_prior(const LinearMapParams& map, const HorseshoeState& hs);
MapGradient grad_log_prior(const LinearMapParams& map, const HorseshoeState& hs);

/// Cached evaluator of the sliced generalized likelihood for one dataset and
/// one projection set.
///
/// Response projections are sorted once at construction. The sort order of
/// each projected pushforward is kept between calls and used to warm-start
/// the next sort, which is nearly free along a Markov chain. Results do not
/// depend on the cache: ties are always broken by atom index. Not safe to
/// share between threads.
class SlicedObjective {
 public:
  SlicedObjective(const DDRDataset& data, const ProjectionSet& proj, double w);

  struct Evaluation {
    double value = 0.0;  // w * sum_i SW_2^2
    MapGradient gradient;
  };

  double value(const LinearMapParams& map);
  Evaluation evaluate(const LinearMapParams& map);

  /// Unweighted SW_2^2(f # F_i, G_i) for every pair.
  std::vector<double> per_pair(const LinearMapParams& map);

  const DDRDataset& data() const { return data_; }
  const ProjectionSet& projections() const { return proj_; }
  double weight() const { return w_; }

 private:
  struct PairCache {
    Eigen::MatrixXd sorted_response;  // m2 x L, each column ascending
    Eigen::VectorXd response_mean;    // L projected means
    Eigen::VectorXd response_var;     // L projected variances
    std::vector<int> order;           // L blocks of m1 atom indices
  };

  double pair_term(std::size_t i, const LinearMapParams& map, Eigen::MatrixXd* grad_z);
  double point_mass_term(std::size_t i, const Eigen::VectorXd& z, Eigen::VectorXd* grad_z) const;

  DDRDataset data_;
  ProjectionSet proj_;
  double w_;
  std::vector<PairCache> cache_;
};

}  // namespace ddr
