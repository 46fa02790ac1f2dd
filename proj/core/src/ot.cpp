#include "ddr/ot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "min_cost_flow.hpp"
#include "ddr/random.hpp"

namespace ddr {

namespace detail {

void check_order(int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("only p = 1 and p = 2 are supported");
}

double sorted_wasserstein_pp(std::span<const double> xs, std::span<const double> ys, int p) {
  double cost = 0.0;
  north_west_corner(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()),
                    [&](Eigen::Index i, Eigen::Index j, double mass) {
                      cost += mass * ground_cost_1d(xs[static_cast<std::size_t>(i)] -
                                                        ys[static_cast<std::size_t>(j)],
                                                    p);
                    });
  return cost;
}

}  // namespace detail

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double x : out) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite atom");
  }
  std::stable_sort(out.begin(), out.end());
  return out;
}

void check_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double wasserstein1d_pp(std::span<const double> xs, std::span<const double> ys, int p) {
  detail::check_order(p);
  if (xs.empty() || ys.empty()) throw std::invalid_argument("empty distribution");
  const auto sx = sorted_copy(xs);
  const auto sy = sorted_copy(ys);
  return detail::sorted_wasserstein_pp(sx, sy, p);
}

TransportPlan lp_wasserstein_pp(const EmpiricalDistribution& x, const EmpiricalDistribution& y, int p) {
  detail::check_order(p);
  check_same_dim(x.dim(), y.dim());
  const Eigen::Index m1 = x.size();
  const Eigen::Index m2 = y.size();
  if (m1 * m2 > 10000) throw std::invalid_argument("oracle instance too large");

  // Scale masses to integers: each source atom supplies m2 units and each
  // sink atom absorbs m1 units, so the optimal flow divided by m1*m2 is the
  // optimal coupling.
  const int source = 0;
  const int sink = static_cast<int>(m1 + m2) + 1;
  detail::MinCostFlow flow(static_cast<int>(m1 + m2) + 2);
  for (Eigen::Index i = 0; i < m1; ++i) flow.add_arc(source, 1 + static_cast<int>(i), m2, 0.0);
  std::vector<int> arcs(static_cast<std::size_t>(m1 * m2));
  for (Eigen::Index i = 0; i < m1; ++i) {
    for (Eigen::Index j = 0; j < m2; ++j) {
      const Eigen::RowVectorXd diff = x.atom(i) - y.atom(j);
      const double c = p == 1 ? diff.cwiseAbs().sum() : diff.squaredNorm();
      arcs[static_cast<std::size_t>(i * m2 + j)] =
          flow.add_arc(1 + static_cast<int>(i), 1 + static_cast<int>(m1 + j), m1 * m2, c);
    }
  }
  for (Eigen::Index j = 0; j < m2; ++j) flow.add_arc(1 + static_cast<int>(m1 + j), sink, m1, 0.0);
  flow.solve(source, sink, m1 * m2);

  const double unit = 1.0 / static_cast<double>(m1 * m2);
  TransportPlan plan;
  plan.coupling = Eigen::MatrixXd::Zero(m1, m2);
  for (Eigen::Index i = 0; i < m1; ++i) {
    for (Eigen::Index j = 0; j < m2; ++j) {
      const auto units = flow.flow_on(arcs[static_cast<std::size_t>(i * m2 + j)]);
      plan.coupling(i, j) = static_cast<double>(units) * unit;
    }
  }
  plan.cost = std::max(0.0, flow.total_cost() * unit);
  return plan;
}

ProjectionSet sample_projections(Eigen::Index count, Eigen::Index dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("projection requires d ≥ 2");
  if (count < 1) throw std::invalid_argument("projection count must be positive");
  Rng rng(seed);
  ProjectionSet proj;
  proj.seed = seed;
  proj.directions.resize(count, dim);
  for (Eigen::Index l = 0; l < count; ++l) {
    double norm = 0.0;
    do {
      for (Eigen::Index k = 0; k < dim; ++k) proj.directions(l, k) = rng.normal();
      norm = proj.directions.row(l).norm();
    } while (norm < 1e-12);
    proj.directions.row(l) /= norm;
  }
  return proj;
}

Eigen::VectorXd sliced_wasserstein_terms(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                                         const ProjectionSet& proj, int p) {
  detail::check_order(p);
  check_same_dim(f.dim(), g.dim());
  check_same_dim(f.dim(), proj.dim());
  const Eigen::MatrixXd pf = f.atoms() * proj.directions.transpose();
  const Eigen::MatrixXd pg = g.atoms() * proj.directions.transpose();
  Eigen::VectorXd terms(proj.count());
  std::vector<double> xs(static_cast<std::size_t>(f.size()));
  std::vector<double> ys(static_cast<std::size_t>(g.size()));
  for (Eigen::Index l = 0; l < proj.count(); ++l) {
    Eigen::Map<Eigen::VectorXd>(xs.data(), f.size()) = pf.col(l);
    Eigen::Map<Eigen::VectorXd>(ys.data(), g.size()) = pg.col(l);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    terms[l] = detail::sorted_wasserstein_pp(xs, ys, p);
  }
  return terms;
}

double sliced_wasserstein_pp(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                             const ProjectionSet& proj, int p) {
  return sliced_wasserstein_terms(f, g, proj, p).mean();
}

double sliced_w2_point_mass(const Eigen::VectorXd& z, const EmpiricalDistribution& g,
                            const ProjectionSet& proj) {
  check_same_dim(z.size(), g.dim());
  check_same_dim(g.dim(), proj.dim());
  const Eigen::MatrixXd pg = g.atoms() * proj.directions.transpose();
  const Eigen::VectorXd pz = proj.directions * z;
  double total = 0.0;
  for (Eigen::Index l = 0; l < proj.count(); ++l) {
    const auto col = pg.col(l);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    const double offset = pz[l] - mean;
    total += offset * offset + var;
  }
  return total / static_cast<double>(proj.count());
}

}  // namespace ddr
