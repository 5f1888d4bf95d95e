#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypermosbm/hypergraph.hpp"
#include "hypermosbm/matrix.hpp"
#include "hypermosbm/partition.hpp"
#include "hypermosbm/random.hpp"

namespace hypermosbm {

/// Latent parameters: N x K memberships U (rows not normalized) and one
/// symmetric K x K affinity matrix per order subset.
struct ModelParams {
  Matrix memberships;
  std::vector<Matrix> affinities;

  std::size_t num_nodes() const { return memberships.rows(); }
  std::size_t num_communities() const { return memberships.cols(); }
  std::size_t num_subsets() const { return affinities.size(); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct FitConfig {
  std::size_t num_communities = 2;
  std::size_t num_iterations = 500;
  std::size_t num_restarts = 10;
  std::uint64_t seed = 0;
  double rate_floor = 1e-12;
  double init_scale = 1.0;
  /// Stop a restart early once the log-likelihood gain of an iteration drops
  /// below this absolute value. Off by default.
  std::optional<double> convergence_tolerance;
  /// Record the objective after every iteration of the winning restart.
  bool record_elbo = false;
  unsigned threads = 1;

  void validate() const;
};

struct FitResult {
  ModelParams params;
  double log_likelihood = 0.0;
  std::vector<double> per_restart_loglik;
  std::size_t best_restart = 0;
  /// Objective F(rho_t, theta_{t+1}) after each E/M pair (rho from the
  /// E-step of that iteration); filled only with FitConfig::record_elbo.
  std::vector<double> elbo_trace;
};

/// Expected-count statistics of the E-step. The per-edge posterior rho is
/// never stored; only its two marginals consumed by the M-step are kept.
struct SufficientStats {
  /// [i, k] = sum over edges e containing i of A_e * sum_{j != i, q} rho_ijkq.
  Matrix membership_numerator;
  /// [l](k, q) = sum over edges with |e| in S_l of A_e * sum_{i, j != i} rho_ijkq.
  std::vector<Matrix> affinity_numerator;
  /// Edges whose rate fell below the floor; they contribute no statistics.
  std::size_t floored_edges = 0;
};

struct LogLikelihood {
  double value = 0.0;
  std::size_t floored_edges = 0;
};

/// HyperMOSBM bound to one hypergraph and one order partition. Precomputes the
/// subset of every edge and the per-subset constants C_l.
class MultiOrderModel {
 public:
  /// Throws std::invalid_argument if the partition does not cover the
  /// hypergraph's orders {2..D} or D exceeds N.
  MultiOrderModel(const Hypergraph& h, OrderPartition partition, double rate_floor = 1e-12);

  const Hypergraph& hypergraph() const { return *h_; }
  const OrderPartition& partition() const { return partition_; }
  std::span<const double> subset_constants() const { return subset_constants_; }
  double rate_floor() const { return rate_floor_; }

  /// Poisson rate lambda_e of node set `e` (size in [2, D]).
  double edge_rate(std::span<const NodeId> e, const ModelParams& params) const;

  /// Log-likelihood with the non-edge term in closed form.
  LogLikelihood log_likelihood(const ModelParams& params) const;

  SufficientStats e_step(const ModelParams& params) const;
  /// Multiplicative membership update; denominators use `params` as given.
  Matrix m_step_memberships(const ModelParams& params, const SufficientStats& stats) const;
  /// Affinity update; denominators use the memberships in `params`.
  std::vector<Matrix> m_step_affinities(const ModelParams& params,
                                        const SufficientStats& stats) const;

  /// One EM iteration: E-step, then U, then every W^(l) with the same stats.
  void em_iteration(ModelParams& params) const;

  /// Evidence lower bound at `params`, with the variational distribution set
  /// to the posterior under `rho_params`. Equal to the log-likelihood when the
  /// two coincide. Costs O(sum |e|^2 K^2); meant for diagnostics.
  double elbo(const ModelParams& params, const ModelParams& rho_params) const;

  /// u_ik ~ U(0, scale) row-major, then each W^(l) upper triangle row-major,
  /// mirrored.
  ModelParams random_params(std::size_t k, double init_scale, Rng& rng) const;

  void check_dimensions(const ModelParams& params) const;

 private:
  /// Closed-form sum_{i != j} u_ik u_jq, i.e. t t^T - U^T U with t = colsum(U).
  Matrix pair_mass(const Matrix& u) const;

  const Hypergraph* h_;
  OrderPartition partition_;
  double rate_floor_;
  std::vector<double> subset_constants_;
  std::vector<std::uint32_t> edge_subset_;
};

/// Free-function forms.
double edge_rate(std::span<const NodeId> e, const ModelParams& params,
                 const OrderPartition& partition);
LogLikelihood log_likelihood(const Hypergraph& h, const ModelParams& params,
                             const OrderPartition& partition, double rate_floor = 1e-12);

/// Runs num_restarts independent EM runs of exactly num_iterations iterations
/// and keeps the restart with the highest final log-likelihood (ties: the
/// lowest restart index). Restart r draws from derive_seed(seed, {kFit, r}).
FitResult fit(const Hypergraph& h, const OrderPartition& partition, const FitConfig& cfg);

/// log(max(lambda_e, floor)) - log kappa_{|e|}.
double score_hyperedge(std::span<const NodeId> e, const ModelParams& params,
                       const OrderPartition& partition, std::size_t num_nodes,
                       double rate_floor = 1e-12);

/// Scores node sets repeatedly against fixed parameters; caches log kappa.
class HyperedgeScorer {
 public:
  HyperedgeScorer(const ModelParams& params, const OrderPartition& partition,
                  std::size_t num_nodes, double rate_floor = 1e-12);
  double operator()(std::span<const NodeId> e) const;

 private:
  const ModelParams* params_;
  const OrderPartition* partition_;
  double rate_floor_;
  std::vector<double> log_kappa_;
};

}  // namespace hypermosbm
