#include "ddr/empirical.hpp"

#include <stdexcept>

namespace ddr {

EmpiricalDistribution::EmpiricalDistribution(Eigen::MatrixXd atoms) : atoms_(std::move(atoms)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1) throw std::invalid_argument("empty distribution");
  if (!atoms_.allFinite()) throw std::invalid_argument("non-finite atom");
}

}  // namespace ddr
