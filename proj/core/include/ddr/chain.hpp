#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ddr/horseshoe.hpp"
#include "ddr/mala.hpp"
#include "ddr/model.hpp"

namespace ddr {

struct Draw {
  int iter = 0;  // absolute iteration index, counted from 0
  LinearMapParams map;
  HorseshoeState hs;
};

/// Post-burn-in posterior draws with the acceptance flag of the MALA update
/// made at each retained iteration.
struct Chain {
  std::vector<Draw> draws;
  std::vector<bool> accept_flags;
  MalaConfig config;
  MapKind kind = MapKind::Linear;
  bool intercept_only = false;
  int divergences = 0;

  std::size_t size() const { return draws.size(); }
  double accept_rate() const;
};

/// Posterior simulation for one dataset.
///
/// Starts at the point chosen by cfg.start with all horseshoe scales at one,
/// then alternates a horseshoe Gibbs sweep and a MALA update
/// of (A, b) n_iter times. Under
/// FixedPerRun one projection set is drawn at the start and reused, so the
/// chain targets a fixed surrogate posterior. Deterministic for a given seed.
/// In intercept-only mode A stays at zero and the Gibbs sweep is skipped.
/// Throws std::runtime_error after 50 consecutive divergent proposals.
Chain run_ddr_chain(const DDRDataset& data, const MalaConfig& cfg, MapKind kind = MapKind::Linear,
                    bool intercept_only = false);

struct ChainSummary {
  LinearMapParams mean;
  LinearMapParams lower;  // 2.5% quantile per entry
  LinearMapParams upper;  // 97.5% quantile per entry
  double accept_rate = 0.0;
  std::size_t draws = 0;
};

ChainSummary chain_summary(const Chain& chain);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Central interval (lower, upper) holding `mass` of the values.
std::pair<double, double> central_interval(const std::vector<double>& values, double mass = 0.95);

/// Columnar chain export: iter, A_i_j (row-major over A), b_i, lambda2_i_j,
/// tau2, zeta, accepted.
std::string chain_csv(const Chain& chain);
void write_chain_csv(const Chain& chain, const std::filesystem::path& path);
/// Reads draws back from chain_csv output. Shapes come from the header.
Chain read_chain_csv(const std::filesystem::path& path, MapKind kind = MapKind::Linear);

/// JSON manifest: config, seed, accept rate, shapes.
std::string chain_manifest_json(const Chain& chain);

/// Ridge regression (penalty `ridge` on A only) of the response means on the
/// predictor means across pairs.
LinearMapParams mean_regression(const DDRDataset& data, double ridge = 1e-6);

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& s);
std::string to_string(ProjectionPolicy policy);
ProjectionPolicy projection_policy_from_string(const std::string& s);
std::string to_string(HorseshoeVariant v);
HorseshoeVariant horseshoe_variant_from_string(const std::string& s);
std::string to_string(ChainStart s);
ChainStart chain_start_from_string(const std::string& s);

}  // namespace ddr
