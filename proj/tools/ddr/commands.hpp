#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ddr::cli {

/// Raised for user-facing failures; main prints the message and exits 1.
struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string out;
  bool force = false;
};

struct SamplerOptions {
  double eta = 1e-4;
  double w = 100.0;
  long projections = 1000;
  int n_iter = 1000;
  int burn_in = 500;
  std::string policy = "fixed";
  std::string horseshoe = "half-cauchy";
  std::string start = "mean-regression";
  std::string map = "linear";
};

struct SimulateOptions {
  std::string scenario = "gauss1";
  std::size_t n = 10;
  std::size_t n_test = 200;
  long m = 100;
  std::uint64_t seed = 0;
  std::optional<double> noise_sd;
  bool shared_shift = false;
  std::string graph_run;
  std::string data;
  OutputOptions output;
};

struct FitOptions {
  std::string data;
  std::string test_data;
  std::string edge;
  double train_fraction = 0.8;
  bool standardize = true;
  std::optional<std::size_t> min_cells;
  std::uint64_t seed = 0;
  SamplerOptions sampler;
  OutputOptions output;
};

struct GraphOptions {
  std::string data;
  std::string method = "ddr";
  double fdr_bound = 0.10;
  std::string epsilon_search = "nontrivial";
  double kernel_scale = 0.2;
  unsigned threads = 1;
  bool standardize = true;
  std::optional<std::size_t> min_cells;
  std::uint64_t seed = 0;
  SamplerOptions sampler;
  OutputOptions output;
};

struct ReportOptions {
  std::vector<std::string> runs;
  OutputOptions output;
};

/// Resolves the output directory against DDR_OUTPUT_ROOT and refuses to reuse
/// a non-empty directory unless forced.
std::filesystem::path prepare_output(const OutputOptions& opts, const std::string& fallback_name);

void run_simulate(const SimulateOptions& opts);
void run_fit_ddr(const FitOptions& opts);
void run_fit_mlr(const FitOptions& opts);
void run_graph(const GraphOptions& opts);
void run_report(const ReportOptions& opts);

}  // namespace ddr::cli
