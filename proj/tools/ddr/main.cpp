#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace ddr::cli;

void add_output(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out,-o", o.out, "Output directory (relative paths resolve against $DDR_OUTPUT_ROOT)");
  cmd->add_flag("--force", o.force, "Reuse a non-empty output directory");
}

void add_sampler(CLI::App* cmd, SamplerOptions& s) {
  cmd->add_option("--eta", s.eta, "MALA step size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--w", s.w, "Likelihood weight")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--projections,-L", s.projections, "Number of projection directions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--n-iter", s.n_iter, "MCMC iterations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--burn-in", s.burn_in, "Discarded iterations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--projection-policy", s.policy, "fixed or resample")
      ->check(CLI::IsMember({"fixed", "resample"}))
      ->capture_default_str();
  cmd->add_option("--horseshoe", s.horseshoe, "Shrinkage conditionals: half-cauchy or published")
      ->check(CLI::IsMember({"half-cauchy", "published"}))
      ->capture_default_str();
  cmd->add_option("--start", s.start, "Chain starting point: mean-regression or origin")
      ->check(CLI::IsMember({"mean-regression", "origin"}))
      ->capture_default_str();
  cmd->add_option("--map", s.map, "linear or quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}))
      ->capture_default_str();
}

std::map<CLI::App*, std::string> config_files;

void add_config(CLI::App* cmd) {
  cmd->add_option("--config", config_files[cmd], "key=value file supplying values for options not given on the command line")
      ->check(CLI::ExistingFile);
}

/// Keys are long option names without dashes. Options given on the command
/// line take precedence over the file.
void apply_config(CLI::App* cmd, const std::string& path) {
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty()) throw CliError(path + ": sections are not supported (" + item.fullname() + ")");
    if (item.name == "config") throw CliError(path + ": config files cannot be nested");
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw CliError(path + ": unknown option '" + item.name + "' for " + cmd->get_name());
    if (opt->count() > 0) continue;
    for (const auto& v : item.inputs) opt->add_result(opt->get_expected_min() == 0 ? opt->get_flag_value(item.name, v) : v);
    opt->run_callback();
  }
}

void add_fit(CLI::App* cmd, FitOptions& f) {
  cmd->add_option("--data", f.data, "Dataset directory with manifest.json (required)");
  cmd->add_option("--test-data", f.test_data, "Separate test dataset; disables the random split");
  cmd->add_option("--edge", f.edge, "Edge name source__target when the dataset holds several");
  cmd->add_option("--train-fraction", f.train_fraction, "Fraction of donors used for training")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("!--no-standardize", f.standardize, "Skip per-gene standardization");
  cmd->add_option("--min-cells", f.min_cells, "Donor filter; overrides the manifest");
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  add_sampler(cmd, f.sampler);
  add_output(cmd, f.output);
  add_config(cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-on-distribution regression with sliced Wasserstein posteriors"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a simulated dataset and its truth");
  simulate->add_option("--scenario", sim.scenario, "gauss1, mixture2, quadratic, semisim-noedge, semisim-full, semisim-sparse")
      ->check(CLI::IsMember({"gauss1", "mixture2", "quadratic", "semisim-noedge", "semisim-full", "semisim-sparse"}))
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "Training pairs")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--n-test", sim.n_test, "Test pairs")->capture_default_str();
  simulate->add_option("--m", sim.m, "Atoms per distribution")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--noise-sd", sim.noise_sd, "Response noise standard deviation");
  simulate->add_flag("--shared-shift", sim.shared_shift, "One noise draw per distribution");
  simulate->add_option("--graph-run", sim.graph_run, "Semi-simulation: output of `ddr graph` supplying pools");
  simulate->add_option("--data", sim.data, "Semi-simulation: dataset supplying predictor clouds");
  add_output(simulate, sim.output);
  add_config(simulate);

  FitOptions ddr_opts;
  auto* fit_ddr = app.add_subcommand("fit-ddr", "Fit the distributional regression to one edge");
  add_fit(fit_ddr, ddr_opts);

  FitOptions mlr_opts;
  auto* fit_mlr = app.add_subcommand("fit-mlr", "Fit the pseudo-bulk linear regression baseline to one edge");
  add_fit(fit_mlr, mlr_opts);

  GraphOptions graph_opts;
  auto* graph = app.add_subcommand("graph", "Fit every edge and select a graph with error-rate control");
  graph->add_option("--data", graph_opts.data, "Dataset directory with manifest.json (required)");
  graph->add_option("--method", graph_opts.method, "ddr or mlr")
      ->check(CLI::IsMember({"ddr", "mlr"}))
      ->capture_default_str();
  graph->add_option("--fdr-bound", graph_opts.fdr_bound, "Bound on the expected false discovery rate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  graph->add_option("--epsilon-search", graph_opts.epsilon_search,
                    "nontrivial: skip thresholds that include all or no edges; all: every threshold")
      ->check(CLI::IsMember({"nontrivial", "all"}))
      ->capture_default_str();
  graph->add_option("--kernel-scale", graph_opts.kernel_scale, "Edge weight exp(-rpe / scale)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  graph->add_option("--threads", graph_opts.threads, "Edges fitted concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  graph->add_flag("!--no-standardize", graph_opts.standardize, "Skip per-gene standardization");
  graph->add_option("--min-cells", graph_opts.min_cells, "Donor filter; overrides the manifest");
  graph->add_option("--seed", graph_opts.seed, "Master seed")->capture_default_str();
  add_sampler(graph, graph_opts.sampler);
  add_output(graph, graph_opts.output);
  add_config(graph);

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "Aggregate run directories into report tables");
  report->add_option("--run", report_opts.runs, "Run directory (repeatable)")->required();
  add_output(report, report_opts.output);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, path] : config_files) {
      if (*cmd && !path.empty()) apply_config(cmd, path);
    }
    for (auto [cmd, data] : {std::pair{fit_ddr, &ddr_opts.data}, std::pair{fit_mlr, &mlr_opts.data},
                             std::pair{graph, &graph_opts.data}}) {
      if (*cmd && data->empty()) throw CliError(cmd->get_name() + ": --data is required");
    }
    if (*simulate) run_simulate(sim);
    if (*fit_ddr) run_fit_ddr(ddr_opts);
    if (*fit_mlr) run_fit_mlr(mlr_opts);
    if (*graph) run_graph(graph_opts);
    if (*report) run_report(report_opts);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
