#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ddr/model.hpp"

namespace ddr {

namespace {

// Sorts `order` so that (vals[order[k]], order[k]) is ascending. The previous
// contents of `order` are used as a starting point: insertion sort finishes in
// linear time when little has changed, otherwise fall back to a full sort.
void sort_warm(const double* vals, int* order, int m) {
  const auto less = [vals](int a, int b) { return vals[a] < vals[b] || (vals[a] == vals[b] && a < b); };
  long budget = 8L * m;
  for (int k = 1; k < m; ++k) {
    const int key = order[k];
    int pos = k;
    while (pos > 0 && less(key, order[pos - 1])) {
      order[pos] = order[pos - 1];
      --pos;
      if (--budget < 0) break;
    }
    order[pos] = key;
    if (budget < 0) {
      std::sort(order, order + m, less);
      return;
    }
  }
}

bool is_zero(const Eigen::MatrixXd& a) { return (a.array() == 0.0).all(); }

}  // namespace

SlicedObjective::SlicedObjective(const DDRDataset& data, const ProjectionSet& proj, double w)
    : data_(data), proj_(proj), w_(w) {
  if (data_.empty()) throw std::invalid_argument("dataset must contain at least one pair");
  if (proj_.dim() != data_.response_dim()) throw std::invalid_argument("dimension mismatch");
  if (!(w_ > 0.0)) throw std::invalid_argument("loss weight w must be positive");
  const Eigen::Index L = proj_.count();
  cache_.resize(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const auto& pair = data_[i];
    auto& c = cache_[i];
    c.sorted_response = pair.response.atoms() * proj_.directions.transpose();
    c.response_mean.resize(L);
    c.response_var.resize(L);
    for (Eigen::Index l = 0; l < L; ++l) {
      auto col = c.sorted_response.col(l);
      std::sort(col.begin(), col.end());
      const double mean = col.mean();
      c.response_mean[l] = mean;
      c.response_var[l] = (col.array() - mean).square().mean();
    }
    const auto m1 = static_cast<int>(pair.predictor.size());
    c.order.resize(static_cast<std::size_t>(m1) * static_cast<std::size_t>(L));
    for (Eigen::Index l = 0; l < L; ++l) {
      std::iota(c.order.begin() + l * m1, c.order.begin() + (l + 1) * m1, 0);
    }
  }
}

double SlicedObjective::point_mass_term(std::size_t i, const Eigen::VectorXd& z, Eigen::VectorXd* grad_z) const {
  const auto& c = cache_[i];
  const Eigen::VectorXd offset = proj_.directions * z - c.response_mean;
  const double L = static_cast<double>(proj_.count());
  if (grad_z) *grad_z = (2.0 / L) * (proj_.directions.transpose() * offset);
  return (offset.squaredNorm() + c.response_var.sum()) / L;
}

double SlicedObjective::pair_term(std::size_t i, const LinearMapParams& map, Eigen::MatrixXd* grad_z) {
  const auto& pair = data_[i];
  auto& c = cache_[i];
  const Eigen::Index m1 = pair.predictor.size();
  const Eigen::Index m2 = pair.response.size();
  const Eigen::Index L = proj_.count();

  Eigen::MatrixXd z = pair.predictor.atoms() * map.A.transpose();
  z.rowwise() += map.b.transpose();
  if (map.kind == MapKind::QuadraticElementwise) z = z.array().square().matrix();
  const Eigen::MatrixXd projected = z * proj_.directions.transpose();  // m1 x L
  if (!projected.allFinite()) {
    if (grad_z) *grad_z = Eigen::MatrixXd::Constant(m1, map.out_dim(), std::numeric_limits<double>::quiet_NaN());
    return std::numeric_limits<double>::infinity();
  }

  Eigen::MatrixXd coeff;
  if (grad_z) coeff = Eigen::MatrixXd::Zero(m1, L);

  double total = 0.0;
  for (Eigen::Index l = 0; l < L; ++l) {
    const double* vals = projected.col(l).data();
    int* order = c.order.data() + l * m1;
    sort_warm(vals, order, static_cast<int>(m1));
    const double* q = c.sorted_response.col(l).data();
    double cost = 0.0;
    if (grad_z) {
      double* cl = coeff.col(l).data();
      detail::north_west_corner(m1, m2, [&](Eigen::Index a, Eigen::Index b, double mass) {
        const int atom = order[a];
        const double diff = vals[atom] - q[b];
        cost += mass * diff * diff;
        cl[atom] += 2.0 * mass * diff;
      });
    } else {
      detail::north_west_corner(m1, m2, [&](Eigen::Index a, Eigen::Index b, double mass) {
        const double diff = vals[order[a]] - q[b];
        cost += mass * diff * diff;
      });
    }
    total += cost;
  }
  if (grad_z) *grad_z = coeff * proj_.directions / static_cast<double>(L);
  return total / static_cast<double>(L);
}

std::vector<double> SlicedObjective::per_pair(const LinearMapParams& map) {
  if (map.out_dim() != data_.response_dim() || map.in_dim() != data_.predictor_dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
  std::vector<double> out(data_.size());
  if (is_zero(map.A)) {
    const Eigen::VectorXd z =
        map.kind == MapKind::QuadraticElementwise ? Eigen::VectorXd(map.b.array().square()) : map.b;
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = point_mass_term(i, z, nullptr);
    return out;
  }
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = pair_term(i, map, nullptr);
  return out;
}

double SlicedObjective::value(const LinearMapParams& map) {
  const auto terms = per_pair(map);
  return w_ * std::accumulate(terms.begin(), terms.end(), 0.0);
}

SlicedObjective::Evaluation SlicedObjective::evaluate(const LinearMapParams& map) {
  if (map.out_dim() != data_.response_dim() || map.in_dim() != data_.predictor_dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const Eigen::Index d1 = map.in_dim();
  const Eigen::Index d2 = map.out_dim();
  const bool quadratic = map.kind == MapKind::QuadraticElementwise;
  Evaluation ev;
  ev.gradient.A = Eigen::MatrixXd::Zero(d2, d1);
  ev.gradient.b = Eigen::VectorXd::Zero(d2);

  if (is_zero(map.A)) {
    // Every atom lands on the same point.
    const Eigen::VectorXd z = quadratic ? Eigen::VectorXd(map.b.array().square()) : map.b;
    Eigen::VectorXd gz;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      ev.value += point_mass_term(i, z, &gz);
      const Eigen::VectorXd gs = quadratic ? Eigen::VectorXd(2.0 * gz.array() * map.b.array()) : gz;
      ev.gradient.A.noalias() += gs * data_[i].predictor.mean();
      ev.gradient.b += gs;
    }
  } else {
    Eigen::MatrixXd gz;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      ev.value += pair_term(i, map, &gz);
      const auto& x = data_[i].predictor.atoms();
      if (quadratic) {
        Eigen::MatrixXd s = x * map.A.transpose();
        s.rowwise() += map.b.transpose();
        gz = (gz.array() * 2.0 * s.array()).matrix();
      }
      ev.gradient.A.noalias() += gz.transpose() * x;
      ev.gradient.b += gz.colwise().sum().transpose();
    }
  }
  ev.value *= w_;
  ev.gradient.A *= w_;
  ev.gradient.b *= w_;
  return ev;
}

}  // namespace ddr
