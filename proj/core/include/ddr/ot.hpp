#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "ddr/empirical.hpp"

namespace ddr {

/// Coupling between two uniform empirical measures and its transport cost.
struct TransportPlan {
  Eigen::MatrixXd coupling;  // m1 x m2, rows sum to 1/m1, columns to 1/m2
  double cost = 0.0;
};

/// Directions on the unit sphere used by the Monte-Carlo sliced estimator.
struct ProjectionSet {
  Eigen::MatrixXd directions;  // L x d, unit rows
  std::uint64_t seed = 0;

  Eigen::Index count() const { return directions.rows(); }
  Eigen::Index dim() const { return directions.cols(); }
};

/// W_p^p between the uniform empirical measures on xs and ys (p in {1, 2}).
///
/// Both samples are sorted and matched with the north-west corner coupling of
/// the merged quantile grid, which is the exact optimum in one dimension.
double wasserstein1d_pp(std::span<const double> xs, std::span<const double> ys, int p);

/// Exact discrete optimal transport by min-cost flow with ground cost
/// ||x - y||_p^p. Meant as a reference for small instances (m1 * m2 <= 1e4).
TransportPlan lp_wasserstein_pp(const EmpiricalDistribution& x, const EmpiricalDistribution& y, int p);

/// L directions drawn uniformly from the unit sphere in R^d by normalizing
/// standard Gaussian vectors. Bit-identical for identical (L, d, seed).
ProjectionSet sample_projections(Eigen::Index count, Eigen::Index dim, std::uint64_t seed);

/// Monte-Carlo sliced Wasserstein: mean over directions of W_p^p of the
/// projected measures.
double sliced_wasserstein_pp(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                             const ProjectionSet& proj, int p);

/// Per-direction terms W_p^p(theta_l # f, theta_l # g); their mean is
/// sliced_wasserstein_pp and their spread gives the Monte-Carlo error.
Eigen::VectorXd sliced_wasserstein_terms(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                                         const ProjectionSet& proj, int p);

/// Sliced W_2^2 between a point mass at z and g. Closed form: for each
/// direction the cost is the squared offset of the projected mean plus the
/// projected variance of g.
double sliced_w2_point_mass(const Eigen::VectorXd& z, const EmpiricalDistribution& g,
                            const ProjectionSet& proj);

namespace detail {

/// Visits the monotone (north-west corner) coupling between two sorted
/// uniform samples of sizes m1 and m2 as visit(i, j, mass). Masses are tracked
/// in integer units of 1 / (m1 m2), so the plan is exact.
template <class Visit>
void north_west_corner(Eigen::Index m1, Eigen::Index m2, Visit&& visit) {
  if (m1 == m2) {
    const double mass = 1.0 / static_cast<double>(m1);
    for (Eigen::Index k = 0; k < m1; ++k) visit(k, k, mass);
    return;
  }
  const double unit = 1.0 / (static_cast<double>(m1) * static_cast<double>(m2));
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  Eigen::Index left_i = m2;
  Eigen::Index left_j = m1;
  while (i < m1 && j < m2) {
    const Eigen::Index moved = left_i < left_j ? left_i : left_j;
    visit(i, j, static_cast<double>(moved) * unit);
    left_i -= moved;
    left_j -= moved;
    if (left_i == 0) {
      ++i;
      left_i = m2;
    }
    if (left_j == 0) {
      ++j;
      left_j = m1;
    }
  }
}

inline double ground_cost_1d(double diff, int p) { return p == 1 ? (diff < 0 ? -diff : diff) : diff * diff; }

void check_order(int p);

/// W_p^p between two already sorted samples.
double sorted_wasserstein_pp(std::span<const double> xs, std::span<const double> ys, int p);

}  // namespace detail

}  // namespace ddr
