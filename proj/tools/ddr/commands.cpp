#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ddr/chain.hpp"
#include "ddr/data.hpp"
#include "ddr/graph.hpp"
#include "ddr/io.hpp"
#include "ddr/mlr.hpp"
#include "ddr/rpe.hpp"
#include "ddr/sim.hpp"

namespace ddr::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSplitStream = 11;
constexpr std::uint64_t kOosProjectionStream = 12;
constexpr std::uint64_t kMlrStream = 13;
constexpr int kDensityDraws = 25;

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json map_json(const LinearMapParams& map) {
  return {{"kind", to_string(map.kind)}, {"A", matrix_json(map.A)}, {"b", vector_json(map.b)}};
}

void write_json(const fs::path& path, const json& j) { io::write_file_atomic(path, j.dump(2) + "\n"); }

MalaConfig mala_config(const SamplerOptions& s, std::uint64_t seed) {
  MalaConfig cfg;
  cfg.eta = s.eta;
  cfg.w = s.w;
  cfg.projections = s.projections;
  cfg.n_iter = s.n_iter;
  cfg.burn_in = s.burn_in;
  cfg.seed = seed;
  cfg.projection_policy = projection_policy_from_string(s.policy);
  cfg.horseshoe = horseshoe_variant_from_string(s.horseshoe);
  cfg.start = chain_start_from_string(s.start);
  cfg.validate();
  return cfg;
}

EdgeData select_edge(std::vector<EdgeData> edges, const std::string& name, const std::string& source) {
  if (name.empty()) {
    if (edges.size() != 1) throw CliError(source + " holds " + std::to_string(edges.size()) + " edges; pass --edge");
    return std::move(edges.front());
  }
  for (auto& e : edges) {
    if (e.id.name() == name) return std::move(e);
  }
  throw CliError("edge " + name + " not found in " + source);
}

IngestResult ingest_logged(const std::string& dir, std::optional<std::size_t> min_cells) {
  if (dir.empty()) throw CliError("--data is required");
  if (!fs::exists(fs::path(dir) / "manifest.json")) throw CliError("no manifest.json in " + dir);
  IngestResult r = ingest(dir, min_cells);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return r;
}

struct PreparedEdge {
  EdgeId id;
  DDRDataset train;
  DDRDataset test;
  std::vector<std::string> train_donors;
  std::vector<std::string> test_donors;
  std::optional<Standardization> standardization;
};

std::vector<std::string> pick(const std::vector<std::string>& v, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

PreparedEdge prepare_fit_data(const FitOptions& opts) {
  EdgeData edge = select_edge(ingest_logged(opts.data, opts.min_cells).edges, opts.edge, opts.data);
  PreparedEdge p;
  p.id = edge.id;
  if (!opts.test_data.empty()) {
    EdgeData test = select_edge(ingest_logged(opts.test_data, opts.min_cells).edges, edge.id.name(), opts.test_data);
    p.train = edge.dataset;
    p.train_donors = edge.donors;
    p.test = test.dataset;
    p.test_donors = test.donors;
  } else {
    const auto s = split_indices(edge.dataset.size(), opts.train_fraction, derive_seed(opts.seed, kSplitStream));
    p.train = edge.dataset.subset(s.train);
    p.train_donors = pick(edge.donors, s.train);
    if (!s.test.empty()) p.test = edge.dataset.subset(s.test);
    p.test_donors = pick(edge.donors, s.test);
  }
  if (opts.standardize) {
    p.standardization = fit_standardization(p.train, edge.predictor_genes, edge.response_genes);
    p.train = p.standardization->apply(p.train);
    if (!p.test.empty()) p.test = p.standardization->apply(p.test);
  }
  return p;
}

std::string rpe_draws_csv(const RpeSummary& in_sample, const std::optional<RpeSummary>& out_of_sample) {
  std::string out = out_of_sample ? "draw,in_sample,out_of_sample\n" : "draw,in_sample\n";
  for (std::size_t t = 0; t < in_sample.per_draw.size(); ++t) {
    out += std::to_string(t) + "," + io::format_double(in_sample.per_draw[t]);
    if (out_of_sample) out += "," + io::format_double(out_of_sample->per_draw[t]);
    out += '\n';
  }
  return out;
}

json rpe_json(const RpeSummary& r) { return {{"mean", r.mean}, {"ci", {r.lower, r.upper}}}; }

/// Observed response atoms and pushforward atoms for 25 evenly spaced draws,
/// all projected on the first principal directions of each donor's response.
std::string fitted_density_csv(const Chain& chain, const DDRDataset& data, const std::vector<std::string>& donors) {
  const Eigen::Index k = std::min<Eigen::Index>(2, data.response_dim());
  std::string out = k == 2 ? "donor,source,draw,atom,pc1,pc2\n" : "donor,source,draw,atom,pc1\n";
  const auto emit = [&](const std::string& donor, const char* source, long draw, const Eigen::MatrixXd& proj) {
    for (Eigen::Index a = 0; a < proj.rows(); ++a) {
      out += donor + "," + source + "," + std::to_string(draw) + "," + std::to_string(a);
      for (Eigen::Index c = 0; c < k; ++c) out += "," + io::format_double(proj(a, c));
      out += '\n';
    }
  };
  const std::size_t T = chain.size();
  const int n_draws = static_cast<int>(std::min<std::size_t>(kDensityDraws, T));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].response.size() < 2) continue;
    const PcaResult pca = pca_export(data[i].response, k);
    emit(donors[i], "observed", -1, pca.projected);
    for (int s = 0; s < n_draws; ++s) {
      const std::size_t t = n_draws == 1 ? 0 : static_cast<std::size_t>(std::llround(
                                                   static_cast<double>(s) * static_cast<double>(T - 1) / (n_draws - 1)));
      emit(donors[i], "fitted", static_cast<long>(t),
           pca.project(pushforward(chain.draws[t].map, data[i].predictor).atoms()));
    }
  }
  return out;
}

json sampler_json(const SamplerOptions& s) {
  return {{"eta", s.eta},       {"w", s.w},
          {"projections", s.projections}, {"n_iter", s.n_iter},
          {"burn_in", s.burn_in}, {"projection_policy", s.policy},
          {"horseshoe", s.horseshoe}, {"start", s.start}, {"map", s.map}};
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = std::to_string(i);
    out.push_back(prefix + std::string(id.size() < 3 ? 3 - id.size() : 0, '0') + id);
  }
  return out;
}

/// Fits the regression on pseudo-bulk means plus its intercept-only reference.
struct MlrFit {
  std::vector<MLRState> draws;
  std::vector<MLRState> ref_draws;
  RpeSummary rpe;
};

MlrFit fit_mlr(const DDRDataset& data, int n_iter, int burn_in, long projections, std::uint64_t seed) {
  const PseudoBulk bulk = pseudo_bulk(data);
  MlrFit f;
  f.draws = run_mlr_chain(bulk.xbar, bulk.ybar, n_iter, burn_in, derive_seed(seed, 1));
  f.ref_draws = run_mlr_chain(bulk.xbar.leftCols(1), bulk.ybar, n_iter, burn_in, derive_seed(seed, 2));
  f.rpe = mlr_rpe(f.draws, f.ref_draws, data, sample_projections(projections, data.response_dim(), derive_seed(seed, 3)));
  return f;
}

Eigen::MatrixXd mlr_mean(const std::vector<MLRState>& draws) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(draws.front().A.rows(), draws.front().A.cols());
  for (const auto& d : draws) m += d.A;
  return m / static_cast<double>(draws.size());
}

}  // namespace

fs::path prepare_output(const OutputOptions& opts, const std::string& fallback_name) {
  fs::path out = opts.out.empty() ? fs::path(fallback_name) : fs::path(opts.out);
  if (out.is_relative()) {
    if (const char* root = std::getenv("DDR_OUTPUT_ROOT"); root != nullptr && *root != '\0') out = fs::path(root) / out;
  }
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) throw CliError("output path " + out.string() + " exists and is not a directory");
    if (!fs::is_empty(out) && !opts.force) {
      throw CliError("output directory " + out.string() + " already exists; pass --force to overwrite");
    }
  }
  fs::create_directories(out);
  return out;
}

void run_simulate(const SimulateOptions& opts) {
  const Scenario scenario = scenario_from_string(opts.scenario);
  const bool semi = scenario == Scenario::SemiSimNoEdge || scenario == Scenario::SemiSimFull ||
                    scenario == Scenario::SemiSimSparse;
  json truth;
  truth["scenario"] = opts.scenario;
  truth["seed"] = opts.seed;

  if (!semi) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    cfg.n = opts.n;
    cfg.n_test = opts.n_test;
    cfg.m = opts.m;
    cfg.seed = opts.seed;
    cfg.noise_sd = opts.noise_sd;
    cfg.shared_shift = opts.shared_shift;
    cfg.validate();
    const fs::path out = prepare_output(opts.output, "simulate");
    const ScenarioData data = gen_scenario(cfg);
    const EdgeId id{"x", "y"};
    write_dataset(out / "train", {{id, numbered("train", data.train.size()), {}, {}, data.train}});
    if (!data.test.empty()) write_dataset(out / "test", {{id, numbered("test", data.test.size()), {}, {}, data.test}});
    truth["n"] = cfg.n;
    truth["n_test"] = cfg.n_test;
    truth["m"] = cfg.m;
    truth["noise_sd"] = cfg.effective_noise_sd();
    truth["shared_shift"] = cfg.shared_shift;
    truth["truth"] = map_json(data.truth);
    write_json(out / "truth.json", truth);
    std::cout << "wrote " << data.train.size() << " training and " << data.test.size() << " test pairs to "
              << out.string() << "\n";
    return;
  }

  if (opts.graph_run.empty() || opts.data.empty()) {
    throw CliError("semi-simulation needs --graph-run (pools and reference graph) and --data (predictors)");
  }
  const fs::path run(opts.graph_run);
  const auto graph = nlohmann::json::parse(io::read_file(run / "graph.json"));
  std::vector<Chain> chains;
  std::vector<bool> include;
  std::map<std::string, bool> included_by_name;
  for (const auto& e : graph.at("edges")) {
    const EdgeId id{e.at("source").get<std::string>(), e.at("target").get<std::string>()};
    chains.push_back(read_chain_csv(run / "edges" / id.name() / "chain.csv"));
    include.push_back(e.at("included").get<bool>());
    included_by_name[id.name()] = include.back();
  }
  const CoefficientPools pools = build_coefficient_pools(chains, include);

  const IngestResult real = ingest_logged(opts.data, std::nullopt);
  std::vector<SemiSimEdge> edges;
  for (const auto& e : real.edges) {
    SemiSimEdge s;
    s.id = e.id;
    s.response_dim = static_cast<Eigen::Index>(e.response_genes.size());
    const fs::path stats = run / "edges" / e.id.name() / "standardization.json";
    std::optional<Standardization> st;
    if (fs::exists(stats)) st = Standardization::from_json(io::read_file(stats));
    for (const auto& p : e.dataset.pairs()) {
      s.predictors.emplace_back(st ? st->predictor.apply(p.predictor.atoms()) : p.predictor.atoms());
    }
    const auto it = included_by_name.find(e.id.name());
    if (scenario == Scenario::SemiSimSparse && it == included_by_name.end()) {
      throw CliError("edge " + e.id.name() + " is missing from the reference graph");
    }
    s.include = it != included_by_name.end() && it->second;
    edges.push_back(std::move(s));
  }
  const fs::path out = prepare_output(opts.output, "simulate");
  const auto sims = gen_semi_sim(scenario, pools, edges, opts.seed, opts.noise_sd.value_or(0.1), opts.shared_shift);
  std::vector<EdgeData> written;
  json edges_json = json::array();
  for (std::size_t e = 0; e < sims.size(); ++e) {
    const auto& src = real.edges[e];
    written.push_back({sims[e].id, src.donors, src.predictor_genes, src.response_genes, sims[e].dataset});
    edges_json.push_back({{"source", sims[e].id.source},
                          {"target", sims[e].id.target},
                          {"planted", sims[e].planted},
                          {"truth", map_json(sims[e].truth)}});
  }
  write_dataset(out / "data", written);
  truth["noise_sd"] = opts.noise_sd.value_or(0.1);
  truth["edges"] = edges_json;
  write_json(out / "truth.json", truth);
  std::cout << "wrote " << sims.size() << " semi-simulated edges to " << out.string() << "\n";
}

void run_fit_ddr(const FitOptions& opts) {
  const MalaConfig cfg = mala_config(opts.sampler, opts.seed);
  const MapKind kind = map_kind_from_string(opts.sampler.map);
  const PreparedEdge p = prepare_fit_data(opts);
  const fs::path out = prepare_output(opts.output, "fit-ddr");

  const EdgeFit fit = fit_edge({p.id, p.train}, cfg, kind);
  const Chain& chain = fit.posterior.chain;
  std::optional<RpeSummary> oos;
  if (!p.test.empty()) {
    oos = mean_rpe(chain, fit.posterior.ref_chain, p.test, cfg.likelihood(),
                   sample_projections(cfg.projections, p.test.response_dim(), derive_seed(opts.seed, kOosProjectionStream)));
  }
  const ChainSummary summary = chain_summary(chain);

  write_chain_csv(chain, out / "chain.csv");
  write_chain_csv(fit.posterior.ref_chain, out / "ref_chain.csv");
  io::write_file_atomic(out / "chain.json", chain_manifest_json(chain));
  io::write_file_atomic(out / "rpe_draws.csv", rpe_draws_csv(fit.posterior.rpe, oos));
  io::write_file_atomic(out / "fitted_density.csv", fitted_density_csv(chain, p.train, p.train_donors));
  if (p.standardization) io::write_file_atomic(out / "standardization.json", p.standardization->to_json());

  json s;
  s["model"] = "ddr";
  s["edge"] = p.id.name();
  s["mean_rpe"] = fit.posterior.rpe.mean;
  s["rpe_ci"] = {fit.posterior.rpe.lower, fit.posterior.rpe.upper};
  s["accept_rate"] = chain.accept_rate();
  s["in_sample_rpe"] = rpe_json(fit.posterior.rpe);
  s["out_of_sample_rpe"] = oos ? rpe_json(*oos) : json(nullptr);
  s["posterior_mean"] = map_json(summary.mean);
  s["posterior_lower"] = map_json(summary.lower);
  s["posterior_upper"] = map_json(summary.upper);
  s["draws"] = chain.size();
  s["divergences"] = chain.divergences;
  s["train_donors"] = p.train_donors;
  s["test_donors"] = p.test_donors;
  s["seed"] = opts.seed;
  s["sampler"] = sampler_json(opts.sampler);
  write_json(out / "summary.json", s);
  std::cout << "mean RPE " << fit.posterior.rpe.mean << " [" << fit.posterior.rpe.lower << ", "
            << fit.posterior.rpe.upper << "], accept rate " << chain.accept_rate() << "\n";
}

void run_fit_mlr(const FitOptions& opts) {
  if (!(opts.sampler.burn_in > 0 && opts.sampler.burn_in < opts.sampler.n_iter)) {
    throw CliError("burn-in must lie in (0, n-iter)");
  }
  const PreparedEdge p = prepare_fit_data(opts);
  const fs::path out = prepare_output(opts.output, "fit-mlr");
  const std::uint64_t seed = derive_seed(opts.seed, kMlrStream);
  const MlrFit fit = fit_mlr(p.train, opts.sampler.n_iter, opts.sampler.burn_in, opts.sampler.projections, seed);
  std::optional<RpeSummary> oos;
  if (!p.test.empty()) {
    oos = mlr_rpe(fit.draws, fit.ref_draws, p.test,
                  sample_projections(opts.sampler.projections, p.test.response_dim(),
                                     derive_seed(opts.seed, kOosProjectionStream)));
  }
  io::write_file_atomic(out / "chain.csv", mlr_chain_csv(fit.draws, opts.sampler.burn_in));
  io::write_file_atomic(out / "ref_chain.csv", mlr_chain_csv(fit.ref_draws, opts.sampler.burn_in));
  io::write_file_atomic(out / "rpe_draws.csv", rpe_draws_csv(fit.rpe, oos));
  if (p.standardization) io::write_file_atomic(out / "standardization.json", p.standardization->to_json());

  json s;
  s["model"] = "mlr";
  s["edge"] = p.id.name();
  s["mean_rpe"] = fit.rpe.mean;
  s["rpe_ci"] = {fit.rpe.lower, fit.rpe.upper};
  s["accept_rate"] = 1.0;
  s["in_sample_rpe"] = rpe_json(fit.rpe);
  s["out_of_sample_rpe"] = oos ? rpe_json(*oos) : json(nullptr);
  s["posterior_mean"] = {{"A", matrix_json(mlr_mean(fit.draws))}};
  s["draws"] = fit.draws.size();
  s["train_donors"] = p.train_donors;
  s["test_donors"] = p.test_donors;
  s["seed"] = opts.seed;
  write_json(out / "summary.json", s);
  std::cout << "mean RPE " << fit.rpe.mean << " [" << fit.rpe.lower << ", " << fit.rpe.upper << "]\n";
}

void run_graph(const GraphOptions& opts) {
  if (opts.method != "ddr" && opts.method != "mlr") throw CliError("--method must be ddr or mlr");
  const MalaConfig cfg = mala_config(opts.sampler, opts.seed);
  const MapKind kind = map_kind_from_string(opts.sampler.map);
  const IngestResult data = ingest_logged(opts.data, opts.min_cells);
  const fs::path out = prepare_output(opts.output, "graph");

  std::vector<EdgeSpec> specs;
  std::vector<std::optional<Standardization>> stats;
  for (const auto& e : data.edges) {
    std::optional<Standardization> st;
    if (opts.standardize) st = fit_standardization(e.dataset, e.predictor_genes, e.response_genes);
    specs.push_back({e.id, st ? st->apply(e.dataset) : e.dataset});
    stats.push_back(std::move(st));
  }

  std::vector<CoefficientTrace> traces;
  std::vector<RpeSummary> rpes;
  std::vector<EdgeWeight> weights;
  if (opts.method == "ddr") {
    const auto fits = fit_edges(specs, cfg, kind, opts.threads);
    for (std::size_t e = 0; e < fits.size(); ++e) {
      const fs::path dir = out / "edges" / fits[e].id.name();
      const auto& post = fits[e].posterior;
      write_chain_csv(post.chain, dir / "chain.csv");
      write_chain_csv(post.ref_chain, dir / "ref_chain.csv");
      io::write_file_atomic(dir / "rpe_draws.csv", rpe_draws_csv(post.rpe, std::nullopt));
      write_json(dir / "summary.json", {{"model", "ddr"},
                                        {"edge", fits[e].id.name()},
                                        {"mean_rpe", post.rpe.mean},
                                        {"rpe_ci", {post.rpe.lower, post.rpe.upper}},
                                        {"accept_rate", post.chain.accept_rate()},
                                        {"posterior_mean", map_json(chain_summary(post.chain).mean)}});
      traces.push_back(coefficient_trace(fits[e].id, post.chain));
      rpes.push_back(post.rpe);
    }
    weights = edge_rpe_weights(fits, opts.kernel_scale);
  } else {
    for (const auto& spec : specs) {
      const MlrFit fit = fit_mlr(spec.dataset, cfg.n_iter, cfg.burn_in, cfg.projections,
                                 derive_seed(edge_seed(opts.seed, spec.id), kMlrStream));
      const fs::path dir = out / "edges" / spec.id.name();
      io::write_file_atomic(dir / "chain.csv", mlr_chain_csv(fit.draws, cfg.burn_in));
      io::write_file_atomic(dir / "rpe_draws.csv", rpe_draws_csv(fit.rpe, std::nullopt));
      write_json(dir / "summary.json", {{"model", "mlr"},
                                        {"edge", spec.id.name()},
                                        {"mean_rpe", fit.rpe.mean},
                                        {"rpe_ci", {fit.rpe.lower, fit.rpe.upper}},
                                        {"accept_rate", 1.0},
                                        {"posterior_mean", {{"A", matrix_json(mlr_mean(fit.draws))}}}});
      traces.push_back(mlr_inclusion_chain(spec.id, fit.draws));
      rpes.push_back(fit.rpe);
      weights.push_back(edge_rpe_weight(spec.id, fit.rpe.mean, opts.kernel_scale));
    }
  }
  for (std::size_t e = 0; e < specs.size(); ++e) {
    if (stats[e]) io::write_file_atomic(out / "edges" / specs[e].id.name() / "standardization.json", stats[e]->to_json());
  }

  const GraphDecision decision =
      select_epsilon(traces, opts.fdr_bound, std::nullopt, epsilon_search_from_string(opts.epsilon_search));
  json config{{"data", opts.data},          {"method", opts.method},   {"fdr_bound", opts.fdr_bound},
              {"epsilon_search", opts.epsilon_search},
              {"kernel_scale", opts.kernel_scale}, {"standardize", opts.standardize}, {"seed", opts.seed},
              {"sampler", sampler_json(opts.sampler)}};
  io::write_file_atomic(out / "graph.json", graph_report_json(weights, decision, rpes, config.dump()));
  io::write_file_atomic(out / "weighted.dot", weighted_graph_dot(weights));
  io::write_file_atomic(out / "selected.dot", selected_graph_dot(decision));
  const auto n_selected = std::count_if(decision.edges.begin(), decision.edges.end(), [](const auto& d) { return d.include; });
  std::cout << "selected " << n_selected << " of " << decision.edges.size() << " edges at epsilon " << decision.epsilon
            << " (FDR " << decision.fdr << ", FNR " << decision.fnr << (decision.feasible ? "" : ", infeasible")
            << ")\n";
}

void run_report(const ReportOptions& opts) {
  if (opts.runs.empty()) throw CliError("report needs at least one --run directory");
  std::vector<std::pair<std::string, fs::path>> runs;
  for (const auto& r : opts.runs) {
    const fs::path root(r);
    if (!fs::is_directory(root)) throw CliError("run directory " + r + " does not exist");
    std::vector<fs::path> found;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().filename() == "summary.json") found.push_back(entry.path().parent_path());
    }
    std::sort(found.begin(), found.end());
    if (found.empty()) throw CliError("no summary.json under " + r);
    for (const auto& f : found) {
      const auto rel = fs::relative(f, root).generic_string();
      runs.emplace_back(rel == "." ? root.filename().generic_string() : root.filename().generic_string() + "/" + rel, f);
    }
  }
  const fs::path out = prepare_output(opts.output, "report");

  json report;
  report["runs"] = json::array();
  std::string rpe_box = "run,draw,in_sample_rpe\n";
  std::string coef_box = "run,coefficient,value\n";
  std::string density = "run,donor,source,draw,atom,pc1,pc2\n";
  for (const auto& [label, dir] : runs) {
    report["runs"].push_back({{"run", label}, {"summary", json::parse(io::read_file(dir / "summary.json"))}});
    if (fs::exists(dir / "graph.json")) report["runs"].back()["graph"] = json::parse(io::read_file(dir / "graph.json"));

    if (fs::exists(dir / "rpe_draws.csv")) {
      std::istringstream in(io::read_file(dir / "rpe_draws.csv"));
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        const auto f = io::split_csv_line(line);
        if (f.size() >= 2) rpe_box += label + "," + std::string(f[0]) + "," + std::string(f[1]) + "\n";
      }
    }
    if (fs::exists(dir / "chain.csv")) {
      std::istringstream in(io::read_file(dir / "chain.csv"));
      std::string line;
      std::getline(in, line);
      std::vector<std::string> header;
      for (auto h : io::split_csv_line(line)) header.emplace_back(h);
      while (std::getline(in, line)) {
        const auto f = io::split_csv_line(line);
        for (std::size_t c = 0; c < f.size() && c < header.size(); ++c) {
          if (header[c].rfind("A_", 0) == 0 || header[c].rfind("b_", 0) == 0) {
            coef_box += label + "," + header[c] + "," + std::string(f[c]) + "\n";
          }
        }
      }
    }
    if (fs::exists(dir / "fitted_density.csv")) {
      std::istringstream in(io::read_file(dir / "fitted_density.csv"));
      std::string line;
      std::getline(in, line);
      const bool two = io::split_csv_line(line).size() == 6;
      while (std::getline(in, line)) density += label + "," + line + (two ? "\n" : ",\n");
    }
  }
  write_json(out / "report.json", report);
  io::write_file_atomic(out / "rpe_boxplot.csv", rpe_box);
  io::write_file_atomic(out / "coefficient_boxplot.csv", coef_box);
  io::write_file_atomic(out / "fitted_density.csv", density);
  std::cout << "aggregated " << runs.size() << " runs into " << out.string() << "\n";
}

}  // namespace ddr::cli
