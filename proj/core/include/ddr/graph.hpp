#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddr/chain.hpp"
#include "ddr/mlr.hpp"
#include "ddr/rpe.hpp"

namespace ddr {

/// Directed edge between two distribution-valued nodes.
struct EdgeId {
  std::string source;
  std::string target;

  /// Filesystem-friendly name, "source__target".
  std::string name() const { return source + "__" + target; }
  auto operator<=>(const EdgeId&) const = default;
};

struct EdgeSpec {
  EdgeId id;
  DDRDataset dataset;

  void validate() const;
};

struct EdgePosterior {
  Chain chain;
  Chain ref_chain;
  RpeSummary rpe;
};

struct EdgeFit {
  EdgeId id;
  EdgePosterior posterior;
};

/// Per-draw max_ij |A_ij| for one edge; everything the inclusion decision
/// needs from a chain.
struct CoefficientTrace {
  EdgeId id;
  std::vector<double> max_abs;
};

CoefficientTrace coefficient_trace(const EdgeId& id, const Chain& chain);

/// Fraction of draws whose largest absolute coefficient exceeds eps.
double epsilon_inclusion_prob(std::span<const double> max_abs, double eps);
double epsilon_inclusion_prob(const Chain& chain, double eps);

struct ErrorRates {
  double fdr = 0.0;
  double fnr = 0.0;
};

/// Posterior expected false discovery and false negative rates, with 0.001
/// added to each denominator.
ErrorRates fdr_fnr(std::span<const double> eip, const std::vector<bool>& include);

struct EdgeDecision {
  EdgeId id;
  double eip = 0.0;
  bool include = false;
};

struct GraphDecision {
  double epsilon = 0.0;
  std::vector<EdgeDecision> edges;
  double fdr = 0.0;
  double fnr = 0.0;
  bool feasible = true;
};

/// Decision rule include_e = [eIP_e(eps) > 0.5] evaluated at one threshold.
GraphDecision decide_at(const std::vector<CoefficientTrace>& traces, double eps);

/// {0} together with every observed per-draw max |A|, sorted and deduplicated.
/// The error rates are piecewise constant in eps with breaks exactly there.
std::vector<double> default_epsilon_grid(const std::vector<CoefficientTrace>& traces);

/// Which grid points take part in the threshold search.
///
/// All: every grid point. Since every eIP is 1 at eps = 0, where both rates
/// vanish, this always selects eps = 0 and includes every edge.
/// Nontrivial: only points where at least one edge is included and at least
/// one excluded; falls back to All when none of them meets the FDR bound.
enum class EpsilonSearch { All, Nontrivial };

/// Minimizes the FNR over the grid subject to FDR <= fdr_bound, breaking ties
/// by the smallest eps. When no grid point is feasible, returns the point with
/// the smallest FDR and sets feasible = false. Uses default_epsilon_grid when
/// no grid is given.
GraphDecision select_epsilon(const std::vector<CoefficientTrace>& traces, double fdr_bound = 0.10,
                             std::optional<std::vector<double>> grid = std::nullopt,
                             EpsilonSearch search = EpsilonSearch::Nontrivial);

std::string to_string(EpsilonSearch s);
EpsilonSearch epsilon_search_from_string(const std::string& s);

struct EdgeWeight {
  EdgeId id;
  double weight = 0.0;
  double mean_rpe = 0.0;
};

/// Fully connected weighted graph: weight = exp(-mean_rpe / kernel_scale).
std::vector<EdgeWeight> edge_rpe_weights(const std::vector<EdgeFit>& fits, double kernel_scale = 0.2);
EdgeWeight edge_rpe_weight(const EdgeId& id, double mean_rpe, double kernel_scale = 0.2);

/// Coefficient draws of the pseudo-bulk regression without the intercept
/// row, shaped d1 x d2.
std::vector<Eigen::MatrixXd> mlr_effective_coefficients(const std::vector<MLRState>& draws);

/// Adapts pseudo-bulk regression draws to the inclusion machinery.
CoefficientTrace mlr_inclusion_chain(const EdgeId& id, const std::vector<MLRState>& draws);

/// Seed of the chains for one edge, derived from the run seed and the edge
/// name so that it does not depend on edge order.
std::uint64_t edge_seed(std::uint64_t seed, const EdgeId& id);

/// Fits one edge: the DDR chain, the intercept-only reference chain, and the
/// in-sample mean RPE with a separately seeded projection set.
EdgeFit fit_edge(const EdgeSpec& edge, const MalaConfig& cfg, MapKind kind = MapKind::Linear);

/// fit_edge over all edges. With threads > 1 edges are fitted concurrently;
/// results are returned in input order and do not depend on threads.
std::vector<EdgeFit> fit_edges(const std::vector<EdgeSpec>& edges, const MalaConfig& cfg,
                               MapKind kind = MapKind::Linear, unsigned threads = 1);

/// Graph report: nodes, per-edge statistics, selected threshold, attained
/// error rates, and the given config object echoed verbatim.
std::string graph_report_json(const std::vector<EdgeWeight>& weights, const GraphDecision& decision,
                              const std::vector<RpeSummary>& rpe, const std::string& config_json);

/// Graphviz export of the weighted graph (penwidth and label from weights).
std::string weighted_graph_dot(const std::vector<EdgeWeight>& weights);
/// Graphviz export of the selected edges.
std::string selected_graph_dot(const GraphDecision& decision);

}  // namespace ddr
