#pragma once

#include <vector>

#include "ddr/chain.hpp"
#include "ddr/mlr.hpp"
#include "ddr/model.hpp"
#include "ddr/ot.hpp"

namespace ddr {

/// Relative predictive error summary over posterior draws.
struct RpeSummary {
  double mean = 0.0;
  double lower = 0.0;  // 2.5% quantile of the per-draw values
  double upper = 0.0;  // 97.5% quantile
  std::vector<double> per_draw;
};

/// RPE of one fitted map against one reference map:
/// (1/N) sum_i SW_2^2(f # F_i, G_i) / SW_2^2(f0 # F_i, G_i).
/// Throws std::runtime_error("degenerate reference fit") on a zero denominator.
double rpe(const LinearMapParams& fitted, const LinearMapParams& reference, SlicedObjective& objective);

/// Pairs draw t of the fitted chain with draw t of the reference
/// (intercept-only) chain and summarizes the per-draw RPE values.
RpeSummary mean_rpe(const Chain& chain, const Chain& ref_chain, const DDRDataset& data, const GenLikConfig& cfg,
                    const ProjectionSet& proj);

/// The same diagnostic for the pseudo-bulk regression, whose prediction for
/// sample i is a point mass at its fitted mean. `ref_draws` come from an
/// intercept-only regression (design = ones column only).
RpeSummary mlr_rpe(const std::vector<MLRState>& draws, const std::vector<MLRState>& ref_draws,
                   const DDRDataset& data, const ProjectionSet& proj);

}  // namespace ddr
