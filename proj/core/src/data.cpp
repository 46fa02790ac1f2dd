#include "ddr/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ddr/io.hpp"
#include "ddr/random.hpp"

namespace ddr {

namespace fs = std::filesystem;

std::vector<std::string> default_gene_names(Eigen::Index d, const std::string& prefix) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < d; ++j) names.push_back(prefix + std::to_string(j));
  return names;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& columns) {
  if (static_cast<Eigen::Index>(columns.size()) != m.cols()) throw std::invalid_argument("header size mismatch");
  std::string out;
  for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + columns[j];
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += io::format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path, std::vector<std::string>* header) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  const auto names = io::split_csv_line(line);
  const std::size_t cols = names.size();
  if (header) {
    header->clear();
    for (auto n : names) header->emplace_back(n);
  }
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = io::split_csv_line(line);
    if (fields.size() != cols) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                               " fields, found " + std::to_string(fields.size()));
    }
    for (auto f : fields) {
      try {
        values.push_back(io::parse_double(f));
      } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    ++rows;
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  return m;
}

IngestResult ingest(const fs::path& root, std::optional<std::size_t> min_cells) {
  const auto manifest = nlohmann::json::parse(io::read_file(root / "manifest.json"));
  const std::size_t filter = min_cells ? *min_cells : manifest.value("min_cells", std::size_t{0});
  IngestResult result;
  for (const auto& e : manifest.at("edges")) {
    EdgeData edge;
    edge.id = {e.at("source").get<std::string>(), e.at("target").get<std::string>()};
    std::vector<DistributionPair> pairs;
    for (const auto& donor_json : e.at("donors")) {
      const auto donor = donor_json.get<std::string>();
      const fs::path pred = root / edge.id.name() / (donor + "_pred.csv");
      const fs::path resp = root / edge.id.name() / (donor + "_resp.csv");
      if (!fs::exists(pred) || !fs::exists(resp)) {
        result.warnings.push_back("edge " + edge.id.name() + ": donor " + donor + " lacks a " +
                                  (fs::exists(pred) ? "response" : "predictor") + " file, skipped");
        continue;
      }
      std::vector<std::string> pred_genes;
      std::vector<std::string> resp_genes;
      Eigen::MatrixXd x = read_matrix_csv(pred, &pred_genes);
      Eigen::MatrixXd y = read_matrix_csv(resp, &resp_genes);
      if (static_cast<std::size_t>(std::min(x.rows(), y.rows())) < std::max<std::size_t>(filter, 1)) {
        result.warnings.push_back("edge " + edge.id.name() + ": donor " + donor + " has " +
                                  std::to_string(std::min(x.rows(), y.rows())) + " cells, below " +
                                  std::to_string(filter) + ", excluded");
        continue;
      }
      if (edge.donors.empty()) {
        edge.predictor_genes = pred_genes;
        edge.response_genes = resp_genes;
      } else if (pred_genes != edge.predictor_genes || resp_genes != edge.response_genes) {
        throw std::runtime_error("edge " + edge.id.name() + ": donor " + donor + " has a different gene list");
      }
      edge.donors.push_back(donor);
      pairs.push_back({EmpiricalDistribution(std::move(x)), EmpiricalDistribution(std::move(y))});
    }
    if (pairs.empty()) throw std::runtime_error("edge " + edge.id.name() + " has no usable donors");
    edge.dataset = DDRDataset(std::move(pairs));
    result.edges.push_back(std::move(edge));
  }
  return result;
}

void write_dataset(const fs::path& root, const std::vector<EdgeData>& edges, std::size_t min_cells) {
  nlohmann::ordered_json manifest;
  manifest["edges"] = nlohmann::ordered_json::array();
  for (const auto& edge : edges) {
    if (edge.donors.size() != edge.dataset.size()) throw std::invalid_argument("one donor id per pair required");
    const auto pg = edge.predictor_genes.empty() ? default_gene_names(edge.dataset.predictor_dim(), "x")
                                                 : edge.predictor_genes;
    const auto rg = edge.response_genes.empty() ? default_gene_names(edge.dataset.response_dim(), "y")
                                                : edge.response_genes;
    for (std::size_t i = 0; i < edge.dataset.size(); ++i) {
      const fs::path dir = root / edge.id.name();
      io::write_file_atomic(dir / (edge.donors[i] + "_pred.csv"), matrix_csv(edge.dataset[i].predictor.atoms(), pg));
      io::write_file_atomic(dir / (edge.donors[i] + "_resp.csv"), matrix_csv(edge.dataset[i].response.atoms(), rg));
    }
    manifest["edges"].push_back({{"source", edge.id.source}, {"target", edge.id.target}, {"donors", edge.donors}});
  }
  manifest["min_cells"] = min_cells;
  io::write_file_atomic(root / "manifest.json", manifest.dump(2) + "\n");
}

GeneStats GeneStats::fit(const std::vector<const Eigen::MatrixXd*>& clouds, std::vector<std::string> genes) {
  if (clouds.empty()) throw std::invalid_argument("training split is empty");
  const Eigen::Index d = clouds.front()->cols();
  if (static_cast<Eigen::Index>(genes.size()) != d) throw std::invalid_argument("gene name count mismatch");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  double n = 0.0;
  for (const auto* c : clouds) {
    sum += c->colwise().sum().transpose();
    n += static_cast<double>(c->rows());
  }
  if (n < 2.0) throw std::invalid_argument("need at least two training cells");
  GeneStats s;
  s.mean = sum / n;
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(d);
  for (const auto* c : clouds) ss += (c->rowwise() - s.mean.transpose()).colwise().squaredNorm().transpose();
  s.sd = (ss / (n - 1.0)).cwiseSqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(s.sd(j) > 0.0)) throw std::invalid_argument("gene " + genes[j] + " has zero standard deviation");
  }
  s.genes = std::move(genes);
  return s;
}

Eigen::MatrixXd GeneStats::apply(const Eigen::MatrixXd& atoms) const {
  if (atoms.cols() != mean.size()) throw std::invalid_argument("dimension mismatch");
  return (atoms.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
}

DDRDataset Standardization::apply(const DDRDataset& data) const {
  std::vector<DistributionPair> pairs;
  pairs.reserve(data.size());
  for (const auto& p : data.pairs()) {
    pairs.push_back({EmpiricalDistribution(predictor.apply(p.predictor.atoms())),
                     EmpiricalDistribution(response.apply(p.response.atoms()))});
  }
  return DDRDataset(std::move(pairs));
}

namespace {

nlohmann::ordered_json stats_json(const GeneStats& s) {
  nlohmann::ordered_json j;
  j["genes"] = s.genes;
  j["mean"] = std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size());
  j["sd"] = std::vector<double>(s.sd.data(), s.sd.data() + s.sd.size());
  return j;
}

GeneStats stats_from_json(const nlohmann::json& j) {
  GeneStats s;
  s.genes = j.at("genes").get<std::vector<std::string>>();
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto sd = j.at("sd").get<std::vector<double>>();
  if (mean.size() != s.genes.size() || sd.size() != s.genes.size()) throw std::runtime_error("malformed statistics");
  s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  s.sd = Eigen::Map<const Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
  return s;
}

}  // namespace

std::string Standardization::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["predictor"] = stats_json(predictor);
  j["response"] = stats_json(response);
  return j.dump(2) + "\n";
}

Standardization Standardization::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("version", 0) != 1) throw std::runtime_error("unsupported standardization version");
  return {stats_from_json(j.at("predictor")), stats_from_json(j.at("response"))};
}

Standardization fit_standardization(const DDRDataset& train, const std::vector<std::string>& predictor_genes,
                                    const std::vector<std::string>& response_genes) {
  std::vector<const Eigen::MatrixXd*> xs;
  std::vector<const Eigen::MatrixXd*> ys;
  for (const auto& p : train.pairs()) {
    xs.push_back(&p.predictor.atoms());
    ys.push_back(&p.response.atoms());
  }
  return {GeneStats::fit(xs, predictor_genes), GeneStats::fit(ys, response_genes)};
}

SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("train fraction must be in (0, 1)");
  if (n < 2) throw std::invalid_argument("split needs at least two donors");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  const auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  SplitIndices s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return s;
}

std::pair<DDRDataset, DDRDataset> split(const DDRDataset& data, double train_fraction, std::uint64_t seed) {
  const auto s = split_indices(data.size(), train_fraction, seed);
  return {data.subset(s.train), s.test.empty() ? DDRDataset{} : data.subset(s.test)};
}

Eigen::MatrixXd PcaResult::project(const Eigen::MatrixXd& atoms) const {
  if (atoms.cols() != center.size()) throw std::invalid_argument("dimension mismatch");
  return (atoms.rowwise() - center) * directions;
}

PcaResult pca_export(const EmpiricalDistribution& g, Eigen::Index k) {
  if (k < 1 || k > g.dim()) throw std::invalid_argument("k must be between 1 and the dimension");
  if (g.size() < 2) throw std::invalid_argument("PCA needs at least two atoms");
  PcaResult r;
  r.center = g.mean();
  const Eigen::MatrixXd centered = g.atoms().rowwise() - r.center;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(g.size() - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::Index d = g.dim();
  r.eigenvalues = eig.eigenvalues().reverse();
  r.directions.resize(d, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    r.directions.col(c) = v;
  }
  r.projected = centered * r.directions;
  return r;
}

}  // namespace ddr
