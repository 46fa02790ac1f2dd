#include "ddr/rpe.hpp"

#include <numeric>
#include <stdexcept>

namespace ddr {

namespace {

RpeSummary summarize(std::vector<double> values) {
  RpeSummary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::tie(s.lower, s.upper) = central_interval(values, 0.95);
  s.per_draw = std::move(values);
  return s;
}

double ratio_mean(const std::vector<double>& num, const std::vector<double>& den) {
  double total = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (!(den[i] > 0.0)) throw std::runtime_error("degenerate reference fit");
    total += num[i] / den[i];
  }
  return total / static_cast<double>(num.size());
}

}  // namespace

double rpe(const LinearMapParams& fitted, const LinearMapParams& reference, SlicedObjective& objective) {
  return ratio_mean(objective.per_pair(fitted), objective.per_pair(reference));
}

RpeSummary mean_rpe(const Chain& chain, const Chain& ref_chain, const DDRDataset& data, const GenLikConfig& cfg,
                    const ProjectionSet& proj) {
  cfg.validate();
  if (chain.size() != ref_chain.size()) throw std::invalid_argument("chain length mismatch");
  if (chain.size() == 0) throw std::invalid_argument("empty chain");
  SlicedObjective objective(data, proj, cfg.w);
  std::vector<double> values(chain.size());
  for (std::size_t t = 0; t < chain.size(); ++t) {
    values[t] = rpe(chain.draws[t].map, ref_chain.draws[t].map, objective);
  }
  return summarize(std::move(values));
}

RpeSummary mlr_rpe(const std::vector<MLRState>& draws, const std::vector<MLRState>& ref_draws,
                   const DDRDataset& data, const ProjectionSet& proj) {
  if (draws.size() != ref_draws.size()) throw std::invalid_argument("chain length mismatch");
  if (draws.empty()) throw std::invalid_argument("empty chain");
  const PseudoBulk bulk = pseudo_bulk(data);
  const Eigen::Index n = bulk.xbar.rows();
  std::vector<double> values(draws.size());
  std::vector<double> num(static_cast<std::size_t>(n));
  std::vector<double> den(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < draws.size(); ++t) {
    const Eigen::MatrixXd fitted = bulk.xbar * draws[t].A;
    const Eigen::MatrixXd reference = bulk.xbar.leftCols(1) * ref_draws[t].A;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& g = data[static_cast<std::size_t>(i)].response;
      num[static_cast<std::size_t>(i)] = sliced_w2_point_mass(fitted.row(i).transpose(), g, proj);
      den[static_cast<std::size_t>(i)] = sliced_w2_point_mass(reference.row(i).transpose(), g, proj);
    }
    values[t] = ratio_mean(num, den);
  }
  return summarize(std::move(values));
}

}  // namespace ddr
