#include "ddr/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ddr/io.hpp"

namespace ddr {

void EdgeSpec::validate() const {
  if (id.source == id.target) throw std::invalid_argument("edge " + id.name() + " is a self loop");
  if (dataset.empty()) throw std::invalid_argument("edge " + id.name() + " has no data");
}

CoefficientTrace coefficient_trace(const EdgeId& id, const Chain& chain) {
  CoefficientTrace trace{id, {}};
  trace.max_abs.reserve(chain.size());
  for (const auto& d : chain.draws) trace.max_abs.push_back(d.map.A.cwiseAbs().maxCoeff());
  return trace;
}

double epsilon_inclusion_prob(std::span<const double> max_abs, double eps) {
  if (max_abs.empty()) throw std::invalid_argument("empty chain");
  const auto above = std::count_if(max_abs.begin(), max_abs.end(), [eps](double v) { return v > eps; });
  return static_cast<double>(above) / static_cast<double>(max_abs.size());
}

double epsilon_inclusion_prob(const Chain& chain, double eps) {
  const auto trace = coefficient_trace({}, chain);
  return epsilon_inclusion_prob(trace.max_abs, eps);
}

ErrorRates fdr_fnr(std::span<const double> eip, const std::vector<bool>& include) {
  if (eip.size() != include.size()) throw std::invalid_argument("edge sets differ");
  double false_disc = 0.0;
  double false_neg = 0.0;
  double selected = 0.0;
  for (std::size_t e = 0; e < eip.size(); ++e) {
    const double d = include[e] ? 1.0 : 0.0;
    false_disc += (1.0 - eip[e]) * d;
    false_neg += eip[e] * (1.0 - d);
    selected += d;
  }
  const double total = static_cast<double>(eip.size());
  return {false_disc / (selected + 0.001), false_neg / (total - selected + 0.001)};
}

namespace {

struct SortedTraces {
  std::vector<EdgeId> ids;
  std::vector<std::vector<double>> values;
};

SortedTraces sort_traces(const std::vector<CoefficientTrace>& traces) {
  SortedTraces s;
  for (const auto& t : traces) {
    if (t.max_abs.empty()) throw std::invalid_argument("empty chain for edge " + t.id.name());
    s.ids.push_back(t.id);
    s.values.push_back(t.max_abs);
    std::sort(s.values.back().begin(), s.values.back().end());
  }
  return s;
}

GraphDecision decide_sorted(const SortedTraces& s, double eps) {
  GraphDecision g;
  g.epsilon = eps;
  std::vector<double> eip;
  std::vector<bool> include;
  for (std::size_t e = 0; e < s.ids.size(); ++e) {
    const auto& v = s.values[e];
    const auto above = v.end() - std::upper_bound(v.begin(), v.end(), eps);
    const double p = static_cast<double>(above) / static_cast<double>(v.size());
    eip.push_back(p);
    include.push_back(p > 0.5);
    g.edges.push_back({s.ids[e], p, p > 0.5});
  }
  const auto rates = fdr_fnr(eip, include);
  g.fdr = rates.fdr;
  g.fnr = rates.fnr;
  return g;
}

}  // namespace

GraphDecision decide_at(const std::vector<CoefficientTrace>& traces, double eps) {
  return decide_sorted(sort_traces(traces), eps);
}

std::vector<double> default_epsilon_grid(const std::vector<CoefficientTrace>& traces) {
  std::vector<double> grid{0.0};
  for (const auto& t : traces) grid.insert(grid.end(), t.max_abs.begin(), t.max_abs.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

GraphDecision select_epsilon(const std::vector<CoefficientTrace>& traces, double fdr_bound,
                             std::optional<std::vector<double>> grid, EpsilonSearch search) {
  std::vector<double> eps = grid ? std::move(*grid) : default_epsilon_grid(traces);
  if (eps.empty()) throw std::invalid_argument("empty epsilon grid");
  std::sort(eps.begin(), eps.end());
  const SortedTraces sorted = sort_traces(traces);

  std::optional<GraphDecision> best_feasible;
  std::optional<GraphDecision> best_nontrivial;
  std::optional<GraphDecision> least_fdr;
  for (double e : eps) {
    if (e < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    GraphDecision g = decide_sorted(sorted, e);
    const auto selected = std::count_if(g.edges.begin(), g.edges.end(), [](const EdgeDecision& d) { return d.include; });
    const bool nontrivial = selected > 0 && selected < static_cast<std::ptrdiff_t>(g.edges.size());
    if (g.fdr <= fdr_bound) {
      if (!best_feasible || g.fnr < best_feasible->fnr) best_feasible = g;
      if (nontrivial && (!best_nontrivial || g.fnr < best_nontrivial->fnr)) best_nontrivial = g;
    }
    if (!least_fdr || g.fdr < least_fdr->fdr) least_fdr = std::move(g);
  }
  if (search == EpsilonSearch::Nontrivial && best_nontrivial) return *best_nontrivial;
  if (best_feasible) return *best_feasible;
  least_fdr->feasible = false;
  return *least_fdr;
}

std::string to_string(EpsilonSearch s) { return s == EpsilonSearch::All ? "all" : "nontrivial"; }

EpsilonSearch epsilon_search_from_string(const std::string& s) {
  if (s == "all") return EpsilonSearch::All;
  if (s == "nontrivial") return EpsilonSearch::Nontrivial;
  throw std::invalid_argument("unknown epsilon search: " + s);
}

EdgeWeight edge_rpe_weight(const EdgeId& id, double mean_rpe, double kernel_scale) {
  if (!(kernel_scale > 0.0)) throw std::invalid_argument("kernel scale must be positive");
  return {id, std::exp(-mean_rpe / kernel_scale), mean_rpe};
}

std::vector<EdgeWeight> edge_rpe_weights(const std::vector<EdgeFit>& fits, double kernel_scale) {
  std::vector<EdgeWeight> out;
  out.reserve(fits.size());
  for (const auto& f : fits) out.push_back(edge_rpe_weight(f.id, f.posterior.rpe.mean, kernel_scale));
  return out;
}

std::vector<Eigen::MatrixXd> mlr_effective_coefficients(const std::vector<MLRState>& draws) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    if (d.A.rows() < 2) throw std::invalid_argument("MLR coefficients lack predictor rows");
    out.push_back(d.A.bottomRows(d.A.rows() - 1));
  }
  return out;
}

CoefficientTrace mlr_inclusion_chain(const EdgeId& id, const std::vector<MLRState>& draws) {
  if (draws.empty()) throw std::invalid_argument("empty chain");
  CoefficientTrace trace{id, {}};
  for (const auto& a : mlr_effective_coefficients(draws)) trace.max_abs.push_back(a.cwiseAbs().maxCoeff());
  return trace;
}

std::uint64_t edge_seed(std::uint64_t seed, const EdgeId& id) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : id.name()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return derive_seed(seed, h);
}

EdgeFit fit_edge(const EdgeSpec& edge, const MalaConfig& cfg, MapKind kind) {
  edge.validate();
  const std::uint64_t base = edge_seed(cfg.seed, edge.id);
  MalaConfig fit_cfg = cfg;
  fit_cfg.seed = derive_seed(base, 1);
  MalaConfig ref_cfg = cfg;
  ref_cfg.seed = derive_seed(base, 2);
  EdgeFit fit;
  fit.id = edge.id;
  fit.posterior.chain = run_ddr_chain(edge.dataset, fit_cfg, kind, false);
  fit.posterior.ref_chain = run_ddr_chain(edge.dataset, ref_cfg, kind, true);
  const auto proj = sample_projections(cfg.projections, edge.dataset.response_dim(), derive_seed(base, 3));
  fit.posterior.rpe =
      mean_rpe(fit.posterior.chain, fit.posterior.ref_chain, edge.dataset, cfg.likelihood(), proj);
  return fit;
}

std::vector<EdgeFit> fit_edges(const std::vector<EdgeSpec>& edges, const MalaConfig& cfg, MapKind kind,
                               unsigned threads) {
  std::vector<EdgeFit> out(edges.size());
  if (threads <= 1 || edges.size() <= 1) {
    for (std::size_t e = 0; e < edges.size(); ++e) out[e] = fit_edge(edges[e], cfg, kind);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < std::min<std::size_t>(threads, edges.size()); ++w) {
    workers.emplace_back([&] {
      for (std::size_t e = next++; e < edges.size(); e = next++) {
        try {
          out[e] = fit_edge(edges[e], cfg, kind);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
  return out;
}

std::string graph_report_json(const std::vector<EdgeWeight>& weights, const GraphDecision& decision,
                              const std::vector<RpeSummary>& rpe, const std::string& config_json) {
  if (weights.size() != decision.edges.size() || weights.size() != rpe.size()) {
    throw std::invalid_argument("edge lists differ in length");
  }
  std::set<std::string> nodes;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (std::size_t e = 0; e < weights.size(); ++e) {
    if (weights[e].id != decision.edges[e].id) throw std::invalid_argument("edge lists are not aligned");
    nodes.insert(weights[e].id.source);
    nodes.insert(weights[e].id.target);
    edges.push_back({{"source", weights[e].id.source},
                     {"target", weights[e].id.target},
                     {"mean_rpe", weights[e].mean_rpe},
                     {"rpe_ci", {rpe[e].lower, rpe[e].upper}},
                     {"weight", weights[e].weight},
                     {"eip_at_selected_eps", decision.edges[e].eip},
                     {"included", decision.edges[e].include}});
  }
  nlohmann::ordered_json j;
  j["nodes"] = nodes;
  j["edges"] = edges;
  j["selected_epsilon"] = decision.epsilon;
  j["fdr"] = decision.fdr;
  j["fnr"] = decision.fnr;
  j["feasible"] = decision.feasible;
  j["config"] = config_json.empty() ? nlohmann::ordered_json::object() : nlohmann::ordered_json::parse(config_json);
  return j.dump(2) + "\n";
}

std::string weighted_graph_dot(const std::vector<EdgeWeight>& weights) {
  std::ostringstream out;
  out << "digraph weighted {\n";
  for (const auto& w : weights) {
    out << "  \"" << w.id.source << "\" -> \"" << w.id.target << "\" [weight=" << io::format_double(w.weight)
        << ", penwidth=" << io::format_double(0.5 + 4.5 * w.weight) << ", label=\""
        << io::format_double(std::round(w.mean_rpe * 1000.0) / 1000.0) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string selected_graph_dot(const GraphDecision& decision) {
  std::set<std::string> nodes;
  for (const auto& e : decision.edges) {
    nodes.insert(e.id.source);
    nodes.insert(e.id.target);
  }
  std::ostringstream out;
  out << "digraph selected {\n";
  for (const auto& n : nodes) out << "  \"" << n << "\";\n";
  for (const auto& e : decision.edges) {
    if (e.include) {
      out << "  \"" << e.id.source << "\" -> \"" << e.id.target << "\" [label=\""
          << io::format_double(std::round(e.eip * 1000.0) / 1000.0) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ddr
