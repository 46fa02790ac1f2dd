#pragma once

#include <Eigen/Dense>

namespace ddr {

/// Uniformly weighted point cloud: m atoms in R^d, each with mass 1/m.
///
/// Atoms are stored one per row. Construction rejects empty clouds and
/// non-finite entries, so every instance is a valid probability measure.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(Eigen::MatrixXd atoms);

  Eigen::Index size() const { return atoms_.rows(); }
  Eigen::Index dim() const { return atoms_.cols(); }
  const Eigen::MatrixXd& atoms() const { return atoms_; }
  auto atom(Eigen::Index i) const { return atoms_.row(i); }

  Eigen::RowVectorXd mean() const { return atoms_.colwise().mean(); }

  friend bool operator==(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return a.atoms_.rows() == b.atoms_.rows() && a.atoms_.cols() == b.atoms_.cols() &&
           a.atoms_ == b.atoms_;
  }

 private:
  Eigen::MatrixXd atoms_;
};

}  // namespace ddr
