#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddr/graph.hpp"
#include "ddr/model.hpp"

namespace ddr {

/// One edge of an on-disk dataset: donor ids aligned with the dataset pairs.
struct EdgeData {
  EdgeId id;
  std::vector<std::string> donors;
  std::vector<std::string> predictor_genes;
  std::vector<std::string> response_genes;
  DDRDataset dataset;
};

struct IngestResult {
  std::vector<EdgeData> edges;
  std::vector<std::string> warnings;
};

/// Reads `manifest.json` and `<source>__<target>/<donor>_{pred,resp}.csv`
/// under root. Donors missing a file are skipped with a warning, donors with
/// fewer than min_cells cells in either role are dropped with a warning.
/// min_cells overrides the manifest value when given.
IngestResult ingest(const std::filesystem::path& root, std::optional<std::size_t> min_cells = std::nullopt);

/// Writes edges in the layout read by ingest. Numbers are written in
/// shortest round-trip form, so ingest returns identical atoms.
void write_dataset(const std::filesystem::path& root, const std::vector<EdgeData>& edges, std::size_t min_cells = 0);

/// Cells x genes CSV with a header row of gene names.
std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& columns);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path, std::vector<std::string>* header = nullptr);

std::vector<std::string> default_gene_names(Eigen::Index d, const std::string& prefix = "g");

struct GeneStats {
  std::vector<std::string> genes;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;

  /// Pools all rows of the given clouds; sd uses the n - 1 denominator.
  /// Throws naming the first gene with zero sd.
  static GeneStats fit(const std::vector<const Eigen::MatrixXd*>& clouds, std::vector<std::string> genes);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& atoms) const;
};

/// Affine per-gene standardization of both roles of one edge.
struct Standardization {
  GeneStats predictor;
  GeneStats response;

  DDRDataset apply(const DDRDataset& data) const;
  std::string to_json() const;
  static Standardization from_json(const std::string& text);
};

/// Statistics from all cells of all training donors.
Standardization fit_standardization(const DDRDataset& train, const std::vector<std::string>& predictor_genes,
                                    const std::vector<std::string>& response_genes);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded uniform shuffle of 0..n-1; the first ceil(fraction * n) go to train.
SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed);
std::pair<DDRDataset, DDRDataset> split(const DDRDataset& data, double train_fraction, std::uint64_t seed);

struct PcaResult {
  Eigen::RowVectorXd center;
  Eigen::MatrixXd directions;   // d x k, unit columns
  Eigen::VectorXd eigenvalues;  // all d, descending
  Eigen::MatrixXd projected;    // m x k

  /// Projects other atoms with the same center and directions.
  Eigen::MatrixXd project(const Eigen::MatrixXd& atoms) const;
};

/// Principal directions of the centered atoms (covariance with n - 1).
/// Each direction is signed so that its largest-magnitude entry is positive.
PcaResult pca_export(const EmpiricalDistribution& g, Eigen::Index k = 2);

}  // namespace ddr
