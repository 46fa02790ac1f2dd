#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddr/graph.hpp"
#include "ddr/model.hpp"
#include "ddr/random.hpp"

namespace ddr::test {

inline Eigen::MatrixXd gaussian_atoms(Eigen::Index m, Eigen::Index d, Rng& rng, double scale = 1.0, double shift = 0.0) {
  Eigen::MatrixXd x(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = shift + scale * rng.normal();
  return x;
}

inline EmpiricalDistribution gaussian_cloud(Eigen::Index m, Eigen::Index d, Rng& rng, double scale = 1.0,
                                            double shift = 0.0) {
  return EmpiricalDistribution(gaussian_atoms(m, d, rng, scale, shift));
}

inline std::vector<double> gaussian_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

/// Random linear map with entries of order one.
inline LinearMapParams random_map(Eigen::Index d1, Eigen::Index d2, Rng& rng, MapKind kind = MapKind::Linear) {
  LinearMapParams m = LinearMapParams::zeros(d1, d2, kind);
  for (Eigen::Index i = 0; i < m.A.size(); ++i) m.A.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < d2; ++i) m.b(i) = rng.normal();
  return m;
}

inline DDRDataset random_dataset(std::size_t n, Eigen::Index d1, Eigen::Index d2, Eigen::Index m, Rng& rng) {
  std::vector<DistributionPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index m1 = m > 0 ? m : 2 + static_cast<Eigen::Index>(rng.index(19));
    const Eigen::Index m2 = m > 0 ? m : 2 + static_cast<Eigen::Index>(rng.index(19));
    pairs.push_back({test::gaussian_cloud(m1, d1, rng, 1.5), test::gaussian_cloud(m2, d2, rng, 2.0, 0.5)});
  }
  return DDRDataset(std::move(pairs));
}

/// Smallest gap between projected pushforward atoms of one pair along one
/// direction. The objective is smooth wherever this is positive.
inline double min_projected_gap(const LinearMapParams& map, const DDRDataset& data, const ProjectionSet& proj) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& pr : data.pairs()) {
    const Eigen::MatrixXd z = pushforward(map, pr.predictor).atoms() * proj.directions.transpose();
    for (Eigen::Index l = 0; l < z.cols(); ++l) {
      std::vector<double> v(z.col(l).data(), z.col(l).data() + z.rows());
      std::sort(v.begin(), v.end());
      for (std::size_t k = 1; k < v.size(); ++k) gap = std::min(gap, v[k] - v[k - 1]);
    }
  }
  return gap;
}

/// Ordinary least-squares slope of log(y) on log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Synthetic per-edge traces on a 0.01 lattice offset by 0.0005, so every
// piece of the piecewise-constant rates contains points of a 1e-3 grid.
inline std::vector<CoefficientTrace> synthetic_traces(std::uint64_t seed, int edges, int draws) {
  Rng rng(seed);
  std::vector<CoefficientTrace> out;
  for (int e = 0; e < edges; ++e) {
    CoefficientTrace t{{"n" + std::to_string(e), "m" + std::to_string(e)}, {}};
    const double center = rng.uniform() * 2.0;
    const double spread = 0.05 + rng.uniform() * 0.5;
    for (int k = 0; k < draws; ++k) {
      const double v = std::abs(center + spread * rng.normal());
      t.max_abs.push_back(std::floor(v * 100.0) / 100.0 + 0.0005);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace ddr::test
