#include "ddr/chain.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ddr/io.hpp"

namespace ddr {

namespace {

constexpr int kMaxConsecutiveDivergences = 50;

std::uint64_t projection_seed(const MalaConfig& cfg, int iter) {
  const std::uint64_t base = derive_seed(cfg.seed, 2);
  if (cfg.projection_policy == ProjectionPolicy::FixedPerRun) return base;
  return derive_seed(base, static_cast<std::uint64_t>(iter));
}

}  // namespace

double Chain::accept_rate() const {
  if (accept_flags.empty()) return 0.0;
  const auto n = std::count(accept_flags.begin(), accept_flags.end(), true);
  return static_cast<double>(n) / static_cast<double>(accept_flags.size());
}

Chain run_ddr_chain(const DDRDataset& data, const MalaConfig& cfg, MapKind kind, bool intercept_only) {
  cfg.validate();
  if (data.empty()) throw std::invalid_argument("dataset must contain at least one pair");
  const Eigen::Index d1 = data.predictor_dim();
  const Eigen::Index d2 = data.response_dim();

  Chain chain;
  chain.config = cfg;
  chain.kind = kind;
  chain.intercept_only = intercept_only;
  chain.draws.reserve(static_cast<std::size_t>(cfg.n_iter - cfg.burn_in));
  chain.accept_flags.reserve(static_cast<std::size_t>(cfg.n_iter - cfg.burn_in));

  Rng rng(derive_seed(cfg.seed, 1));
  auto objective = std::make_unique<SlicedObjective>(
      data, sample_projections(cfg.projections, d2, projection_seed(cfg, 0)), cfg.w);
  auto posterior = std::make_unique<DdrPosterior>(*objective, kind, intercept_only);

  HorseshoeState hs = HorseshoeState::ones(d2, d1);
  MalaState state;
  // At A = 0 every projected pushforward atom ties and the loss has a kink,
  // so Langevin moves away from the origin are often all rejected.
  const bool regress = cfg.start == ChainStart::MeanRegression && kind == MapKind::Linear && !intercept_only;
  const LinearMapParams start = regress ? mean_regression(data) : LinearMapParams::zeros(d1, d2, kind);
  state.position = posterior->to_vector(start);
  auto [nll, grad_nll] = posterior->likelihood(state.position);

  int consecutive = 0;
  for (int iter = 0; iter < cfg.n_iter; ++iter) {
    if (cfg.projection_policy == ProjectionPolicy::ResamplePerIteration && iter > 0) {
      objective = std::make_unique<SlicedObjective>(
          data, sample_projections(cfg.projections, d2, projection_seed(cfg, iter)), cfg.w);
      posterior = std::make_unique<DdrPosterior>(*objective, kind, intercept_only);
      std::tie(nll, grad_nll) = posterior->likelihood(state.position);
    }
    if (!intercept_only) {
      const LinearMapParams current = posterior->to_map(state.position);
      hs = horseshoe_gibbs_sweep(current.A, hs, rng, cfg.horseshoe);
    }
    posterior->set_prior(hs);

    auto [lp, grad_lp] = posterior->prior(state.position);
    state.log_density = lp - nll;
    state.gradient = grad_lp - grad_nll;

    double proposal_nll = 0.0;
    Eigen::VectorXd proposal_grad;
    auto target = [&](const Eigen::VectorXd& position) {
      std::tie(proposal_nll, proposal_grad) = posterior->likelihood(position);
      auto [p, gp] = posterior->prior(position);
      return std::pair<double, Eigen::VectorXd>{p - proposal_nll, gp - proposal_grad};
    };
    const MalaOutcome outcome = mala_transition(state, target, cfg.eta, rng);
    if (outcome == MalaOutcome::Accepted) {
      nll = proposal_nll;
      grad_nll = proposal_grad;
    }
    if (outcome == MalaOutcome::Divergent) {
      ++chain.divergences;
      if (++consecutive >= kMaxConsecutiveDivergences) {
        std::ostringstream msg;
        msg << "divergent step: " << consecutive << " consecutive non-finite proposals at iteration " << iter
            << " (eta = " << cfg.eta << "); reduce the step size";
        throw std::runtime_error(msg.str());
      }
    } else {
      consecutive = 0;
    }

    if (iter >= cfg.burn_in) {
      chain.draws.push_back({iter, posterior->to_map(state.position), hs});
      chain.accept_flags.push_back(outcome == MalaOutcome::Accepted);
    }
  }
  return chain;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::pair<double, double> central_interval(const std::vector<double>& values, double mass) {
  const double tail = 0.5 * (1.0 - mass);
  return {quantile(values, tail), quantile(values, 1.0 - tail)};
}

ChainSummary chain_summary(const Chain& chain) {
  if (chain.draws.empty()) throw std::invalid_argument("empty chain");
  const auto& first = chain.draws.front().map;
  const Eigen::Index d1 = first.in_dim();
  const Eigen::Index d2 = first.out_dim();
  const std::size_t T = chain.draws.size();

  Eigen::MatrixXd flat(static_cast<Eigen::Index>(T), first.flatten().size());
  for (std::size_t t = 0; t < T; ++t) flat.row(static_cast<Eigen::Index>(t)) = chain.draws[t].map.flatten();

  Eigen::VectorXd mean = flat.colwise().mean();
  Eigen::VectorXd lower(flat.cols());
  Eigen::VectorXd upper(flat.cols());
  std::vector<double> column(T);
  for (Eigen::Index k = 0; k < flat.cols(); ++k) {
    for (std::size_t t = 0; t < T; ++t) column[t] = flat(static_cast<Eigen::Index>(t), k);
    std::tie(lower[k], upper[k]) = central_interval(column, 0.95);
  }
  ChainSummary s;
  s.mean = LinearMapParams::unflatten(mean, d1, d2, first.kind);
  s.lower = LinearMapParams::unflatten(lower, d1, d2, first.kind);
  s.upper = LinearMapParams::unflatten(upper, d1, d2, first.kind);
  s.accept_rate = chain.accept_rate();
  s.draws = T;
  return s;
}

std::string chain_csv(const Chain& chain) {
  std::ostringstream out;
  if (chain.draws.empty()) throw std::invalid_argument("empty chain");
  const Eigen::Index d1 = chain.draws.front().map.in_dim();
  const Eigen::Index d2 = chain.draws.front().map.out_dim();
  out << "iter";
  for (Eigen::Index i = 0; i < d2; ++i)
    for (Eigen::Index j = 0; j < d1; ++j) out << ",A_" << i << '_' << j;
  for (Eigen::Index i = 0; i < d2; ++i) out << ",b_" << i;
  for (Eigen::Index i = 0; i < d2; ++i)
    for (Eigen::Index j = 0; j < d1; ++j) out << ",lambda2_" << i << '_' << j;
  out << ",tau2,zeta,accepted\n";
  for (std::size_t t = 0; t < chain.draws.size(); ++t) {
    const auto& d = chain.draws[t];
    out << d.iter;
    for (Eigen::Index i = 0; i < d2; ++i)
      for (Eigen::Index j = 0; j < d1; ++j) out << ',' << io::format_double(d.map.A(i, j));
    for (Eigen::Index i = 0; i < d2; ++i) out << ',' << io::format_double(d.map.b[i]);
    for (Eigen::Index i = 0; i < d2; ++i)
      for (Eigen::Index j = 0; j < d1; ++j) out << ',' << io::format_double(d.hs.lambda_sq(i, j));
    out << ',' << io::format_double(d.hs.tau_sq) << ',' << io::format_double(d.hs.zeta) << ','
        << (chain.accept_flags[t] ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_chain_csv(const Chain& chain, const std::filesystem::path& path) {
  io::write_file_atomic(path, chain_csv(chain));
}

Chain read_chain_csv(const std::filesystem::path& path, MapKind kind) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty chain file " + path.string());
  const auto header = io::split_csv_line(line);
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  for (auto name : header) {
    if (name.starts_with("A_")) {
      const auto rest = name.substr(2);
      const auto sep = rest.find('_');
      d2 = std::max<Eigen::Index>(d2, std::stol(std::string(rest.substr(0, sep))) + 1);
      d1 = std::max<Eigen::Index>(d1, std::stol(std::string(rest.substr(sep + 1))) + 1);
    }
  }
  if (d1 == 0 || d2 == 0) throw std::runtime_error("chain file has no coefficient columns: " + path.string());
  const auto expected = static_cast<std::size_t>(1 + 2 * d1 * d2 + d2 + 3);
  if (header.size() != expected) throw std::runtime_error("unexpected chain header in " + path.string());

  Chain chain;
  chain.kind = kind;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = io::split_csv_line(line);
    if (f.size() != expected) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong number of fields");
    }
    Draw d;
    d.iter = static_cast<int>(io::parse_double(f[0]));
    d.map = LinearMapParams::zeros(d1, d2, kind);
    d.hs = HorseshoeState::ones(d2, d1);
    std::size_t k = 1;
    for (Eigen::Index i = 0; i < d2; ++i)
      for (Eigen::Index j = 0; j < d1; ++j) d.map.A(i, j) = io::parse_double(f[k++]);
    for (Eigen::Index i = 0; i < d2; ++i) d.map.b[i] = io::parse_double(f[k++]);
    for (Eigen::Index i = 0; i < d2; ++i)
      for (Eigen::Index j = 0; j < d1; ++j) d.hs.lambda_sq(i, j) = io::parse_double(f[k++]);
    d.hs.tau_sq = io::parse_double(f[k++]);
    d.hs.zeta = io::parse_double(f[k++]);
    chain.accept_flags.push_back(io::parse_double(f[k]) != 0.0);
    chain.draws.push_back(std::move(d));
  }
  return chain;
}

LinearMapParams mean_regression(const DDRDataset& data, double ridge) {
  if (data.empty()) throw std::invalid_argument("dataset must contain at least one pair");
  if (!(ridge > 0.0)) throw std::invalid_argument("ridge penalty must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index d1 = data.predictor_dim();
  Eigen::MatrixXd x(n, d1), y(n, data.response_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = data[static_cast<std::size_t>(i)].predictor.atoms().colwise().mean();
    y.row(i) = data[static_cast<std::size_t>(i)].response.atoms().colwise().mean();
  }
  const Eigen::RowVectorXd x_bar = x.colwise().mean(), y_bar = y.colwise().mean();
  x.rowwise() -= x_bar;
  y.rowwise() -= y_bar;
  const Eigen::MatrixXd gram = x.transpose() * x + ridge * Eigen::MatrixXd::Identity(d1, d1);
  LinearMapParams out = LinearMapParams::zeros(d1, data.response_dim());
  out.A = gram.ldlt().solve(x.transpose() * y).transpose();
  out.b = (y_bar - x_bar * out.A.transpose()).transpose();
  return out;
}

std::string to_string(MapKind kind) { return kind == MapKind::Linear ? "linear" : "quadratic"; }

MapKind map_kind_from_string(const std::string& s) {
  if (s == "linear") return MapKind::Linear;
  if (s == "quadratic") return MapKind::QuadraticElementwise;
  throw std::invalid_argument("unknown map kind '" + s + "' (expected linear or quadratic)");
}

std::string to_string(ProjectionPolicy policy) {
  return policy == ProjectionPolicy::FixedPerRun ? "fixed" : "resample";
}

ProjectionPolicy projection_policy_from_string(const std::string& s) {
  if (s == "fixed") return ProjectionPolicy::FixedPerRun;
  if (s == "resample") return ProjectionPolicy::ResamplePerIteration;
  throw std::invalid_argument("unknown projection policy '" + s + "' (expected fixed or resample)");
}

std::string to_string(HorseshoeVariant v) { return v == HorseshoeVariant::Published ? "published" : "half-cauchy"; }

HorseshoeVariant horseshoe_variant_from_string(const std::string& s) {
  if (s == "published") return HorseshoeVariant::Published;
  if (s == "half-cauchy") return HorseshoeVariant::HalfCauchy;
  throw std::invalid_argument("unknown horseshoe variant '" + s + "' (expected published or half-cauchy)");
}

std::string to_string(ChainStart s) { return s == ChainStart::Origin ? "origin" : "mean-regression"; }

ChainStart chain_start_from_string(const std::string& s) {
  if (s == "origin") return ChainStart::Origin;
  if (s == "mean-regression") return ChainStart::MeanRegression;
  throw std::invalid_argument("unknown chain start '" + s + "' (expected origin or mean-regression)");
}

std::string chain_manifest_json(const Chain& chain) {
  nlohmann::ordered_json j;
  const auto& c = chain.config;
  j["config"] = {{"eta", c.eta},
                 {"w", c.w},
                 {"projections", c.projections},
                 {"n_iter", c.n_iter},
                 {"burn_in", c.burn_in},
                 {"projection_policy", to_string(c.projection_policy)},
                 {"horseshoe", to_string(c.horseshoe)},
                 {"start", to_string(c.start)}};
  j["seed"] = c.seed;
  j["map_kind"] = to_string(chain.kind);
  j["intercept_only"] = chain.intercept_only;
  j["draws"] = chain.draws.size();
  if (!chain.draws.empty()) {
    j["d1"] = chain.draws.front().map.in_dim();
    j["d2"] = chain.draws.front().map.out_dim();
  }
  j["accept_rate"] = chain.accept_rate();
  j["divergences"] = chain.divergences;
  return j.dump(2) + "\n";
}

}  // namespace ddr
