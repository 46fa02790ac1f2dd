#include "ddr/sim.hpp"

#include <array>
#include <stdexcept>

namespace ddr {

namespace {

constexpr std::uint64_t kTrainStream = 0x7472;
constexpr std::uint64_t kTestStream = 0x7465;

Eigen::MatrixXd gaussian_cloud(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, Eigen::Index m, Rng& rng) {
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::runtime_error("covariance draw is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd out(m, mu.size());
  for (Eigen::Index j = 0; j < m; ++j) out.row(j) = (mu + L * rng.normal_vector(mu.size())).transpose();
  return out;
}

Eigen::MatrixXd predictor_atoms(const ScenarioConfig& cfg, Rng& rng) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  switch (cfg.scenario) {
    case Scenario::Gauss1: {
      const Eigen::VectorXd mu = 2.0 * rng.normal_vector(2);
      return gaussian_cloud(mu, sample_inverse_wishart(I, 6.0, rng), cfg.m, rng);
    }
    case Scenario::Mixture2: {
      static const std::array<Eigen::Vector2d, 3> centers{Eigen::Vector2d(0, 0), Eigen::Vector2d(8, 8),
                                                          Eigen::Vector2d(-8, 8)};
      std::array<Eigen::VectorXd, 3> mu;
      std::array<Eigen::MatrixXd, 3> L;
      for (int k = 0; k < 3; ++k) {
        mu[k] = centers[k] + 2.0 * rng.normal_vector(2);
        L[k] = Eigen::LLT<Eigen::MatrixXd>(sample_inverse_wishart(I, 6.0, rng)).matrixL();
      }
      Eigen::MatrixXd out(cfg.m, 2);
      for (Eigen::Index j = 0; j < cfg.m; ++j) {
        const auto k = rng.index(3);
        out.row(j) = (mu[k] + L[k] * rng.normal_vector(2)).transpose();
      }
      return out;
    }
    case Scenario::Quadratic: {
      const Eigen::VectorXd mu = rng.normal_vector(2);
      return gaussian_cloud(mu, sample_inverse_wishart(I, 10.0, rng), cfg.m, rng);
    }
    default:
      throw std::invalid_argument("scenario " + to_string(cfg.scenario) + " requires coefficient pools");
  }
}

DDRDataset generate_pairs(const ScenarioConfig& cfg, const LinearMapParams& truth, std::size_t n,
                          std::uint64_t stream) {
  std::vector<DistributionPair> pairs;
  pairs.reserve(n);
  const std::uint64_t base = derive_seed(cfg.seed, stream);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(base, i));
    EmpiricalDistribution x(predictor_atoms(cfg, rng));
    auto y = simulate_response(truth, x, cfg.effective_noise_sd(), cfg.shared_shift, rng);
    pairs.push_back({std::move(x), std::move(y)});
  }
  return DDRDataset(std::move(pairs));
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Gauss1: return "gauss1";
    case Scenario::Mixture2: return "mixture2";
    case Scenario::Quadratic: return "quadratic";
    case Scenario::SemiSimNoEdge: return "semisim-noedge";
    case Scenario::SemiSimFull: return "semisim-full";
    case Scenario::SemiSimSparse: return "semisim-sparse";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  for (auto sc : {Scenario::Gauss1, Scenario::Mixture2, Scenario::Quadratic, Scenario::SemiSimNoEdge,
                  Scenario::SemiSimFull, Scenario::SemiSimSparse}) {
    if (to_string(sc) == s) return sc;
  }
  throw std::invalid_argument("unknown scenario: " + s);
}

LinearMapParams default_truth(MapKind kind) {
  LinearMapParams t = LinearMapParams::zeros(2, 2, kind);
  t.A << 1.0, 0.0, 1.0, 1.0;
  t.b << 1.0, 1.0;
  return t;
}

double ScenarioConfig::effective_noise_sd() const {
  if (noise_sd) return *noise_sd;
  return scenario == Scenario::Gauss1 || scenario == Scenario::Mixture2 ? 1.0 : 0.1;
}

LinearMapParams ScenarioConfig::effective_truth() const {
  const MapKind kind = scenario == Scenario::Quadratic ? MapKind::QuadraticElementwise : MapKind::Linear;
  if (!truth) return default_truth(kind);
  LinearMapParams t = *truth;
  t.kind = kind;
  return t;
}

void ScenarioConfig::validate() const {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(effective_noise_sd() >= 0.0)) throw std::invalid_argument("noise sd must be nonnegative");
  if (scenario != Scenario::Gauss1 && scenario != Scenario::Mixture2 && scenario != Scenario::Quadratic) {
    throw std::invalid_argument("scenario " + to_string(scenario) + " requires coefficient pools");
  }
  if (truth && (truth->in_dim() != 2 || truth->out_dim() != 2 || truth->b.size() != 2)) {
    throw std::invalid_argument("truth must be 2 x 2");
  }
}

ScenarioData gen_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioData out;
  out.truth = cfg.effective_truth();
  out.train = generate_pairs(cfg, out.truth, cfg.n, kTrainStream);
  if (cfg.n_test > 0) out.test = generate_pairs(cfg, out.truth, cfg.n_test, kTestStream);
  return out;
}

EmpiricalDistribution simulate_response(const LinearMapParams& truth, const EmpiricalDistribution& predictor,
                                        double noise_sd, bool shared_shift, Rng& rng) {
  Eigen::MatrixXd y = pushforward(truth, predictor).atoms();
  if (noise_sd > 0.0) {
    if (shared_shift) {
      const Eigen::RowVectorXd shift = noise_sd * rng.normal_vector(y.cols()).transpose();
      y.rowwise() += shift;
    } else {
      for (Eigen::Index j = 0; j < y.rows(); ++j) y.row(j) += noise_sd * rng.normal_vector(y.cols()).transpose();
    }
  }
  return EmpiricalDistribution(std::move(y));
}

const CoefficientPool& CoefficientPools::require(PoolLabel label) const {
  const auto& pool = label == PoolLabel::Included ? p1 : p0;
  if (!pool) throw std::invalid_argument(label == PoolLabel::Included ? "no edges with flag 1" : "no edges with flag 0");
  return *pool;
}

CoefficientPools build_coefficient_pools(const std::vector<Chain>& chains, const std::vector<bool>& include) {
  if (chains.size() != include.size()) throw std::invalid_argument("one include flag per chain required");
  CoefficientPool p0{{}, PoolLabel::Excluded};
  CoefficientPool p1{{}, PoolLabel::Included};
  for (std::size_t e = 0; e < chains.size(); ++e) {
    auto& pool = include[e] ? p1 : p0;
    for (const auto& d : chains[e].draws) pool.values.insert(pool.values.end(), d.map.A.data(), d.map.A.data() + d.map.A.size());
  }
  CoefficientPools pools;
  if (!p0.values.empty()) pools.p0 = std::move(p0);
  if (!p1.values.empty()) pools.p1 = std::move(p1);
  return pools;
}

std::vector<SemiSimResult> gen_semi_sim(Scenario scenario, const CoefficientPools& pools,
                                        const std::vector<SemiSimEdge>& edges, std::uint64_t seed,
                                        double noise_sd, bool shared_shift) {
  if (scenario != Scenario::SemiSimNoEdge && scenario != Scenario::SemiSimFull && scenario != Scenario::SemiSimSparse) {
    throw std::invalid_argument("scenario " + to_string(scenario) + " is not a semi-simulation");
  }
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise sd must be nonnegative");
  std::vector<SemiSimResult> out;
  out.reserve(edges.size());
  for (const auto& edge : edges) {
    if (edge.predictors.empty()) throw std::invalid_argument("edge " + edge.id.name() + " has no data");
    if (edge.response_dim < 1) throw std::invalid_argument("edge " + edge.id.name() + " needs a response dimension");
    bool planted = scenario == Scenario::SemiSimFull || (scenario == Scenario::SemiSimSparse && edge.include);
    const auto& pool = pools.require(planted ? PoolLabel::Included : PoolLabel::Excluded).values;

    Rng rng(edge_seed(seed, edge.id));
    const Eigen::Index d1 = edge.predictors.front().dim();
    LinearMapParams truth = LinearMapParams::zeros(d1, edge.response_dim);
    for (Eigen::Index c = 0; c < d1; ++c) {
      for (Eigen::Index r = 0; r < edge.response_dim; ++r) truth.A(r, c) = pool[rng.index(pool.size())];
    }
    for (Eigen::Index r = 0; r < edge.response_dim; ++r) truth.b(r) = pool[rng.index(pool.size())];

    std::vector<DistributionPair> pairs;
    for (const auto& x : edge.predictors) pairs.push_back({x, simulate_response(truth, x, noise_sd, shared_shift, rng)});
    out.push_back({edge.id, DDRDataset(std::move(pairs)), std::move(truth), planted});
  }
  return out;
}

double param_error(const LinearMapParams& estimate, const LinearMapParams& truth) {
  if (estimate.A.rows() != truth.A.rows() || estimate.A.cols() != truth.A.cols() || estimate.b.size() != truth.b.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  return (estimate.A - truth.A).squaredNorm() + (estimate.b - truth.b).squaredNorm();
}

}  // namespace ddr
