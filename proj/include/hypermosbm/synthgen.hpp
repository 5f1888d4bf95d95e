#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "hypermosbm/hypergraph.hpp"
#include "hypermosbm/matrix.hpp"

namespace hypermosbm {

inline constexpr std::array<int, 3> kSyntheticOrders{2, 3, 4};

struct SyntheticConfig {
  std::size_t num_nodes = 100;
  double target_degree = 20.0;
  double assortative = 5.0;
  double baseline = 1.0;
  double zeta = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// (a_s, b_s) for s = 2, 3, 4 (index s - 2).
struct OrderAffinities {
  std::array<double, 3> within{};
  std::array<double, 3> across{};
};

OrderAffinities interpolate_affinity(double a, double b, double zeta);

/// Global scale tau that makes the expected node degree equal target_degree.
double solve_tau(const SyntheticConfig& cfg);

struct EdgeProbabilities {
  std::array<double, 3> within{};  // p_s
  std::array<double, 3> across{};  // q_s
  bool clipped = false;
};

EdgeProbabilities edge_probabilities(const SyntheticConfig& cfg, double tau);

struct SyntheticInstance {
  Hypergraph hypergraph;
  Matrix ground_truth;  // N x 2 one-hot
  double tau = 0.0;
  EdgeProbabilities probabilities;
};

/// Two equal communities (nodes [0, N/2) and [N/2, N)). For each order and
/// composition class the number of edges is drawn from the class binomial and
/// that many distinct edges are drawn uniformly from the class.
SyntheticInstance generate(const SyntheticConfig& cfg);

}  // namespace hypermosbm
