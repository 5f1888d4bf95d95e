#include "hypermosbm/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "hypermosbm/combinatorics.hpp"
#include "hypermosbm/random.hpp"

namespace hypermosbm {

void SyntheticConfig::validate() const {
  if (num_nodes < 4 || num_nodes % 2 != 0)
    throw std::invalid_argument("number of nodes must be even and at least 4");
  if (!(target_degree > 0.0)) throw std::invalid_argument("target degree must be positive");
  if (!(assortative > 0.0) || !(baseline > 0.0))
    throw std::invalid_argument("affinity parameters a and b must be positive");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta must lie in [0, 1]");
}

OrderAffinities interpolate_affinity(double a, double b, double zeta) {
  OrderAffinities out;
  out.within[0] = a;
  out.across[0] = b;
  out.within[1] = (1.0 - zeta) * a + zeta * b;
  out.across[1] = (1.0 - zeta) * b + zeta * a;
  out.within[2] = (1.0 - zeta) * a + zeta / 2.0 * (a + b);
  out.across[2] = (1.0 - zeta) * b + zeta / 2.0 * (a + b);
  return out;
}

double solve_tau(const SyntheticConfig& cfg) {
  cfg.validate();
  const auto aff = interpolate_affinity(cfg.assortative, cfg.baseline, cfg.zeta);
  const std::uint64_t n = cfg.num_nodes, half = n / 2;
  // Expected degree of a node = tau * sum_s [a_s C(N/2-1, s-1)
  //   + b_s (C(N-1, s-1) - C(N/2-1, s-1))] / C(N-1, s-1).
  double per_unit_tau = 0.0;
  for (std::size_t idx = 0; idx < kSyntheticOrders.size(); ++idx) {
    const auto s = static_cast<std::uint64_t>(kSyntheticOrders[idx]);
    const double all = std::exp(log_binomial(n - 1, s - 1));
    const double within = s - 1 <= half - 1 ? std::exp(log_binomial(half - 1, s - 1)) : 0.0;
    per_unit_tau += (aff.within[idx] * within + aff.across[idx] * (all - within)) / all;
  }
  return cfg.target_degree / per_unit_tau;
}

EdgeProbabilities edge_probabilities(const SyntheticConfig& cfg, double tau) {
  const auto aff = interpolate_affinity(cfg.assortative, cfg.baseline, cfg.zeta);
  EdgeProbabilities out;
  for (std::size_t idx = 0; idx < kSyntheticOrders.size(); ++idx) {
    const auto s = static_cast<std::uint64_t>(kSyntheticOrders[idx]);
    const double all = std::exp(log_binomial(cfg.num_nodes - 1, s - 1));
    double p = tau * aff.within[idx] / all;
    double q = tau * aff.across[idx] / all;
    if (p > 1.0 || q > 1.0) out.clipped = true;
    out.within[idx] = std::min(p, 1.0);
    out.across[idx] = std::min(q, 1.0);
  }
  return out;
}

namespace {

// The rank-th (0-based, lexicographic) k-combination of [0, n).
void unrank_combination(std::uint64_t rank, std::uint64_t n, std::uint64_t k, NodeId offset,
                        NodeSet& out) {
  std::uint64_t next = 0;
  for (std::uint64_t remaining = k; remaining > 0; --remaining) {
    for (;; ++next) {
      // Combinations whose smallest remaining element is `next`.
      const std::uint64_t block = binomial(n - next - 1, remaining - 1);
      if (rank < block) break;
      rank -= block;
    }
    out.push_back(static_cast<NodeId>(next) + offset);
    ++next;
  }
}

// `count` distinct values uniformly from [0, n) (Floyd), in ascending order.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t count,
                                                      Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = n - count; j < n; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    const std::uint64_t v = chosen.insert(t).second ? t : j;
    if (v == j) chosen.insert(j);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SyntheticInstance generate(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticInstance inst;
  inst.tau = solve_tau(cfg);
  inst.probabilities = edge_probabilities(cfg, inst.tau);

  const std::uint64_t n = cfg.num_nodes, half = n / 2;
  Rng rng(cfg.seed);
  std::vector<Hyperedge> edges;
  for (std::size_t idx = 0; idx < kSyntheticOrders.size(); ++idx) {
    const auto s = static_cast<std::uint64_t>(kSyntheticOrders[idx]);
    const std::uint64_t c_lo = s > half ? s - half : 0;
    const std::uint64_t c_hi = std::min(s, half);
    for (std::uint64_t c = c_lo; c <= c_hi; ++c) {
      // c members from community 1, s - c from community 2.
      const std::uint64_t size_first = binomial(half, c);
      const std::uint64_t size_second = binomial(half, s - c);
      const std::uint64_t class_size = size_first * size_second;
      const double prob = (c == 0 || c == s) ? inst.probabilities.within[idx]
                                             : inst.probabilities.across[idx];
      std::uint64_t count = 0;
      if (prob >= 1.0) {
        count = class_size;
      } else if (prob > 0.0) {
        std::binomial_distribution<std::uint64_t> draw(class_size, prob);
        count = draw(rng);
      }
      for (std::uint64_t rank : sample_without_replacement(class_size, count, rng)) {
        Hyperedge e;
        e.nodes.reserve(s);
        unrank_combination(rank / size_second, half, c, 0, e.nodes);
        unrank_combination(rank % size_second, half, s - c, static_cast<NodeId>(half), e.nodes);
        edges.push_back(std::move(e));
      }
    }
  }

  inst.hypergraph = Hypergraph(n, kSyntheticOrders.back(), std::move(edges));
  inst.ground_truth = Matrix(n, 2);
  for (std::uint64_t v = 0; v < n; ++v) inst.ground_truth(v, v < half ? 0 : 1) = 1.0;
  return inst;
}

}  // namespace hypermosbm
