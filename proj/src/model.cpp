#include "hypermosbm/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hypermosbm/combinatorics.hpp"
#include "hypermosbm/parallel.hpp"

namespace hypermosbm {

namespace {

// lambda_e = sum_{i in e} u_i^T W (s - u_i), s = sum_{i in e} u_i.
double rate_direct(std::span<const NodeId> e, const Matrix& u, const Matrix& w) {
  const std::size_t k = u.cols();
  std::vector<double> s(k, 0.0);
  for (NodeId i : e)
    for (std::size_t a = 0; a < k; ++a) s[a] += u(i, a);
  double rate = 0.0;
  for (NodeId i : e) {
    for (std::size_t a = 0; a < k; ++a) {
      const double uia = u(i, a);
      if (uia == 0.0) continue;
      double inner = 0.0;
      for (std::size_t b = 0; b < k; ++b) inner += w(a, b) * (s[b] - u(i, b));
      rate += uia * inner;
    }
  }
  return rate;
}

// Row i of U W (equal to (W u_i)^T since W is symmetric).
std::vector<Matrix> membership_times_affinity(const ModelParams& params) {
  const Matrix& u = params.memberships;
  const std::size_t n = u.rows(), k = u.cols();
  std::vector<Matrix> out;
  out.reserve(params.affinities.size());
  for (const Matrix& w : params.affinities) {
    Matrix uw(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      auto ui = u.row(i);
      auto row = uw.row(i);
      for (std::size_t a = 0; a < k; ++a) {
        const double uia = ui[a];
        if (uia == 0.0) continue;
        auto wa = w.row(a);
        for (std::size_t b = 0; b < k; ++b) row[b] += uia * wa[b];
      }
    }
    out.push_back(std::move(uw));
  }
  return out;
}

// s = sum of membership rows over e; returns lambda = sum_i UW[i] . (s - u_i).
double rate_from_products(const Hyperedge& edge, const Matrix& u, const Matrix& uw,
                          std::vector<double>& s) {
  const std::size_t k = u.cols();
  std::fill(s.begin(), s.end(), 0.0);
  for (NodeId i : edge.nodes) {
    auto ui = u.row(i);
    for (std::size_t a = 0; a < k; ++a) s[a] += ui[a];
  }
  double rate = 0.0;
  for (NodeId i : edge.nodes) {
    auto ui = u.row(i);
    auto uwi = uw.row(i);
    for (std::size_t a = 0; a < k; ++a) rate += uwi[a] * (s[a] - ui[a]);
  }
  return rate;
}

std::vector<double> column_sums(const Matrix& u) {
  std::vector<double> t(u.cols(), 0.0);
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t a = 0; a < u.cols(); ++a) t[a] += u(i, a);
  return t;
}

}  // namespace

void FitConfig::validate() const {
  if (num_communities < 1) throw std::invalid_argument("number of communities must be >= 1");
  if (num_iterations < 1) throw std::invalid_argument("number of iterations must be >= 1");
  if (num_restarts < 1) throw std::invalid_argument("number of restarts must be >= 1");
  if (!(rate_floor > 0.0)) throw std::invalid_argument("rate floor must be positive");
  if (!(init_scale > 0.0)) throw std::invalid_argument("initialization scale must be positive");
  if (convergence_tolerance && !(*convergence_tolerance >= 0.0))
    throw std::invalid_argument("convergence tolerance must be non-negative");
}

// ---------------------------------------------------------------------------

MultiOrderModel::MultiOrderModel(const Hypergraph& h, OrderPartition partition,
                                 double rate_floor)
    : h_(&h), partition_(std::move(partition)), rate_floor_(rate_floor) {
  if (partition_.max_order() != h.max_order())
    throw std::invalid_argument("partition covers {2.." + std::to_string(partition_.max_order()) +
                                "} but the hypergraph has maximum order " +
                                std::to_string(h.max_order()));
  if (h.num_nodes() < static_cast<std::size_t>(h.max_order()))
    throw std::invalid_argument("maximum order exceeds the number of nodes");
  if (!(rate_floor > 0.0)) throw std::invalid_argument("rate floor must be positive");
  for (const auto& subset : partition_.subsets())
    subset_constants_.push_back(subset_constant(subset, h.num_nodes()));
  edge_subset_.reserve(h.num_edges());
  for (const auto& e : h.edges())
    edge_subset_.push_back(static_cast<std::uint32_t>(partition_.subset_of(static_cast<int>(e.size()))));
}

void MultiOrderModel::check_dimensions(const ModelParams& params) const {
  const std::size_t k = params.num_communities();
  if (k < 1) throw std::invalid_argument("parameters have no communities");
  if (params.num_nodes() != h_->num_nodes())
    throw std::invalid_argument("membership matrix has " + std::to_string(params.num_nodes()) +
                                " rows, hypergraph has " + std::to_string(h_->num_nodes()) +
                                " nodes");
  if (params.num_subsets() != partition_.size())
    throw std::invalid_argument("expected " + std::to_string(partition_.size()) +
                                " affinity matrices, got " +
                                std::to_string(params.num_subsets()));
  for (const Matrix& w : params.affinities)
    if (w.rows() != k || w.cols() != k)
      throw std::invalid_argument("affinity matrix is not K x K");
}

double MultiOrderModel::edge_rate(std::span<const NodeId> e, const ModelParams& params) const {
  return rate_direct(e, params.memberships,
                     params.affinities[partition_.subset_of(static_cast<int>(e.size()))]);
}

Matrix MultiOrderModel::pair_mass(const Matrix& u) const {
  // sum_{i != j} u_ik u_jq = sum_i u_ik (t_q - u_iq); each factor is >= 0.
  const std::size_t k = u.cols();
  const auto t = column_sums(u);
  Matrix d(k, k);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    auto ui = u.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      if (ui[a] == 0.0) continue;
      for (std::size_t b = 0; b < k; ++b) d(a, b) += ui[a] * (t[b] - ui[b]);
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double sym = 0.5 * (d(a, b) + d(b, a));
      d(a, b) = sym;
      d(b, a) = sym;
    }
  return d;
}

LogLikelihood MultiOrderModel::log_likelihood(const ModelParams& params) const {
  check_dimensions(params);
  const std::size_t k = params.num_communities();
  LogLikelihood out;

  const Matrix d = pair_mass(params.memberships);
  double non_edge = 0.0;
  for (std::size_t l = 0; l < partition_.size(); ++l) {
    const Matrix& w = params.affinities[l];
    double sum = 0.0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sum += w(a, b) * d(a, b);
    non_edge += subset_constants_[l] * sum;
  }

  const auto uw = membership_times_affinity(params);
  std::vector<double> s(k);
  double edge_term = 0.0;
  for (std::size_t e = 0; e < h_->num_edges(); ++e) {
    const Hyperedge& edge = h_->edge(e);
    double rate = rate_from_products(edge, params.memberships, uw[edge_subset_[e]], s);
    if (rate < rate_floor_) {
      rate = rate_floor_;
      ++out.floored_edges;
    }
    edge_term += static_cast<double>(edge.weight) * std::log(rate);
  }
  out.value = edge_term - non_edge;
  return out;
}

SufficientStats MultiOrderModel::e_step(const ModelParams& params) const {
  check_dimensions(params);
  const Matrix& u = params.memberships;
  const std::size_t n = u.rows(), k = u.cols(), num_subsets = partition_.size();
  const auto uw = membership_times_affinity(params);

  // h[l](i, :) = sum over edges e of subset l containing i of
  //              (A_e / lambda_e) * (s_e - u_i).
  std::vector<Matrix> h(num_subsets, Matrix(n, k));
  SufficientStats stats;
  std::vector<double> s(k);
  for (std::size_t e = 0; e < h_->num_edges(); ++e) {
    const Hyperedge& edge = h_->edge(e);
    const std::size_t l = edge_subset_[e];
    const double rate = rate_from_products(edge, u, uw[l], s);
    if (rate < rate_floor_) {
      ++stats.floored_edges;
      continue;
    }
    const double r = static_cast<double>(edge.weight) / rate;
    for (NodeId i : edge.nodes) {
      auto ui = u.row(i);
      auto hi = h[l].row(i);
      for (std::size_t a = 0; a < k; ++a) hi[a] += r * (s[a] - ui[a]);
    }
  }

  stats.membership_numerator = Matrix(n, k);
  for (std::size_t l = 0; l < num_subsets; ++l) {
    const Matrix& w = params.affinities[l];
    for (std::size_t i = 0; i < n; ++i) {
      auto ui = u.row(i);
      auto hi = h[l].row(i);
      auto num = stats.membership_numerator.row(i);
      for (std::size_t a = 0; a < k; ++a) {
        if (ui[a] == 0.0) continue;
        auto wa = w.row(a);
        double inner = 0.0;
        for (std::size_t b = 0; b < k; ++b) inner += wa[b] * hi[b];
        num[a] += ui[a] * inner;
      }
    }
  }

  stats.affinity_numerator.reserve(num_subsets);
  for (std::size_t l = 0; l < num_subsets; ++l) {
    Matrix g(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      auto ui = u.row(i);
      auto hi = h[l].row(i);
      for (std::size_t a = 0; a < k; ++a) {
        if (ui[a] == 0.0) continue;
        for (std::size_t b = 0; b < k; ++b) g(a, b) += ui[a] * hi[b];
      }
    }
    const Matrix& w = params.affinities[l];
    Matrix num(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        const double v = w(a, b) * (0.5 * (g(a, b) + g(b, a)));
        num(a, b) = v;
        num(b, a) = v;
      }
    stats.affinity_numerator.push_back(std::move(num));
  }
  return stats;
}

Matrix MultiOrderModel::m_step_memberships(const ModelParams& params,
                                           const SufficientStats& stats) const {
  const Matrix& u = params.memberships;
  const std::size_t n = u.rows(), k = u.cols();
  const auto t = column_sums(u);
  Matrix updated(n, k);
  std::vector<double> rest(k);
  for (std::size_t i = 0; i < n; ++i) {
    auto ui = u.row(i);
    for (std::size_t b = 0; b < k; ++b) rest[b] = t[b] - ui[b];
    for (std::size_t a = 0; a < k; ++a) {
      const double num = stats.membership_numerator(i, a);
      if (num <= 0.0) continue;
      double den = 0.0;
      for (std::size_t l = 0; l < partition_.size(); ++l) {
        auto wa = params.affinities[l].row(a);
        double inner = 0.0;
        for (std::size_t b = 0; b < k; ++b) inner += wa[b] * rest[b];
        den += subset_constants_[l] * inner;
      }
      if (den > 0.0) updated(i, a) = num / den;
    }
  }
  return updated;
}

std::vector<Matrix> MultiOrderModel::m_step_affinities(const ModelParams& params,
                                                       const SufficientStats& stats) const {
  const std::size_t k = params.num_communities();
  const Matrix d = pair_mass(params.memberships);
  std::vector<Matrix> updated;
  updated.reserve(partition_.size());
  for (std::size_t l = 0; l < partition_.size(); ++l) {
    Matrix w(k, k);
    const Matrix& num = stats.affinity_numerator[l];
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double den = subset_constants_[l] * d(a, b);
        if (den > 0.0 && num(a, b) > 0.0) w(a, b) = num(a, b) / den;
      }
    updated.push_back(std::move(w));
  }
  return updated;
}

void MultiOrderModel::em_iteration(ModelParams& params) const {
  const SufficientStats stats = e_step(params);
  params.memberships = m_step_memberships(params, stats);
  params.affinities = m_step_affinities(params, stats);
}

namespace {
double safe_log(double x) {
  return std::log(std::max(x, std::numeric_limits<double>::denorm_min()));
}
}  // namespace

double MultiOrderModel::elbo(const ModelParams& params, const ModelParams& rho_params) const {
  check_dimensions(params);
  check_dimensions(rho_params);
  const std::size_t k = params.num_communities();
  const Matrix& u = params.memberships;
  const Matrix& ur = rho_params.memberships;

  const Matrix d = pair_mass(u);
  double value = 0.0;
  for (std::size_t l = 0; l < partition_.size(); ++l) {
    double sum = 0.0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sum += params.affinities[l](a, b) * d(a, b);
    value -= subset_constants_[l] * sum;
  }

  for (std::size_t e = 0; e < h_->num_edges(); ++e) {
    const Hyperedge& edge = h_->edge(e);
    const std::size_t l = edge_subset_[e];
    const Matrix& w = params.affinities[l];
    const Matrix& wr = rho_params.affinities[l];
    const double rate_r = rate_direct(edge.nodes, ur, wr);
    const double weight = static_cast<double>(edge.weight);
    if (rate_r < rate_floor_) {
      value += weight * std::log(rate_floor_);
      continue;
    }
    double bound = 0.0;
    for (NodeId i : edge.nodes)
      for (NodeId j : edge.nodes) {
        if (i == j) continue;
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) {
            const double rho = ur(i, a) * ur(j, b) * wr(a, b) / rate_r;
            if (rho <= 0.0) continue;
            // Factors that underflowed to zero are read as the smallest
            // positive double; rho is itself negligible in that case.
            const double lx = safe_log(u(i, a)) + safe_log(u(j, b)) + safe_log(w(a, b));
            bound += rho * (lx - std::log(rho));
          }
      }
    value += weight * bound;
  }
  return value;
}

ModelParams MultiOrderModel::random_params(std::size_t k, double init_scale, Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, init_scale);
  ModelParams params;
  params.memberships = Matrix(h_->num_nodes(), k);
  for (double& x : params.memberships.data()) x = uniform(rng);
  for (std::size_t l = 0; l < partition_.size(); ++l) {
    Matrix w(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        w(a, b) = uniform(rng);
        w(b, a) = w(a, b);
      }
    params.affinities.push_back(std::move(w));
  }
  return params;
}

// ---------------------------------------------------------------------------

double edge_rate(std::span<const NodeId> e, const ModelParams& params,
                 const OrderPartition& partition) {
  return rate_direct(e, params.memberships,
                     params.affinities.at(partition.subset_of(static_cast<int>(e.size()))));
}

LogLikelihood log_likelihood(const Hypergraph& h, const ModelParams& params,
                             const OrderPartition& partition, double rate_floor) {
  return MultiOrderModel(h, partition, rate_floor).log_likelihood(params);
}

FitResult fit(const Hypergraph& h, const OrderPartition& partition, const FitConfig& cfg) {
  cfg.validate();
  const MultiOrderModel model(h, partition, cfg.rate_floor);

  struct RestartOutcome {
    ModelParams params;
    double loglik = 0.0;
    std::vector<double> trace;
  };
  std::vector<RestartOutcome> outcomes(cfg.num_restarts);

  parallel_for(cfg.num_restarts, cfg.threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, {stream::kFit, r}));
    RestartOutcome& out = outcomes[r];
    out.params = model.random_params(cfg.num_communities, cfg.init_scale, rng);
    double previous = cfg.convergence_tolerance ? model.log_likelihood(out.params).value : 0.0;
    for (std::size_t it = 0; it < cfg.num_iterations; ++it) {
      if (cfg.record_elbo) {
        const ModelParams before = out.params;
        model.em_iteration(out.params);
        out.trace.push_back(model.elbo(out.params, before));
      } else {
        model.em_iteration(out.params);
      }
      if (cfg.convergence_tolerance) {
        const double current = model.log_likelihood(out.params).value;
        if (current - previous < *cfg.convergence_tolerance) break;
        previous = current;
      }
    }
    out.loglik = model.log_likelihood(out.params).value;
  });

  FitResult result;
  result.per_restart_loglik.reserve(cfg.num_restarts);
  for (std::size_t r = 0; r < cfg.num_restarts; ++r) {
    result.per_restart_loglik.push_back(outcomes[r].loglik);
    if (r == 0 || outcomes[r].loglik > outcomes[result.best_restart].loglik)
      result.best_restart = r;
  }
  RestartOutcome& best = outcomes[result.best_restart];
  result.params = std::move(best.params);
  result.log_likelihood = best.loglik;
  result.elbo_trace = std::move(best.trace);
  return result;
}

double score_hyperedge(std::span<const NodeId> e, const ModelParams& params,
                       const OrderPartition& partition, std::size_t num_nodes,
                       double rate_floor) {
  const double rate = std::max(edge_rate(e, params, partition), rate_floor);
  return std::log(rate) - log_kappa(e.size(), num_nodes);
}

HyperedgeScorer::HyperedgeScorer(const ModelParams& params, const OrderPartition& partition,
                                 std::size_t num_nodes, double rate_floor)
    : params_(&params), partition_(&partition), rate_floor_(rate_floor) {
  log_kappa_.assign(static_cast<std::size_t>(partition.max_order()) + 1, 0.0);
  for (int s = 2; s <= partition.max_order(); ++s)
    log_kappa_[s] = log_kappa(static_cast<std::uint64_t>(s), num_nodes);
}

double HyperedgeScorer::operator()(std::span<const NodeId> e) const {
  const double rate = std::max(edge_rate(e, *params_, *partition_), rate_floor_);
  return std::log(rate) - log_kappa_[e.size()];
}

}  // namespace hypermosbm
