#include "hypermosbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "hypermosbm/combinatorics.hpp"

namespace hypermosbm {

// ---------------------------------------------------------------------------
// Negative sampling and AUC

NegativeSampler::NegativeSampler(const Hypergraph& h)
    : num_nodes_(h.num_nodes()), max_order_(h.max_order()), hist_(order_histogram(h)) {
  observed_.reserve(h.num_edges());
  for (const auto& e : h.edges()) observed_.insert(e.nodes);
}

NodeSet NegativeSampler::sample(int size, Rng& rng) const {
  if (size < 2 || size > max_order_ || static_cast<std::size_t>(size) > num_nodes_)
    throw std::invalid_argument("cannot sample a negative of size " + std::to_string(size));
  const auto available = binomial_exact(num_nodes_, static_cast<std::uint64_t>(size));
  if (available && *available <= hist_[size])
    throw std::runtime_error("every node set of size " + std::to_string(size) +
                             " is observed; no negative exists");

  NodeSet nodes;
  nodes.reserve(static_cast<std::size_t>(size));
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    // Floyd's algorithm: a uniform size-subset of [0, N).
    nodes.clear();
    for (std::size_t j = num_nodes_ - static_cast<std::size_t>(size); j < num_nodes_; ++j) {
      std::uniform_int_distribution<std::size_t> pick(0, j);
      const auto t = static_cast<NodeId>(pick(rng));
      if (std::find(nodes.begin(), nodes.end(), t) == nodes.end())
        nodes.push_back(t);
      else
        nodes.push_back(static_cast<NodeId>(j));
    }
    std::sort(nodes.begin(), nodes.end());
    if (!observed_.contains(nodes)) return nodes;
  }
  throw std::runtime_error("negative sampling of size " + std::to_string(size) + " exceeded " +
                           std::to_string(kMaxRetries) + " retries");
}

NodeSet sample_negative(int size, const Hypergraph& h, Rng& rng) {
  return NegativeSampler(h).sample(size, rng);
}

std::vector<AucPair> sample_auc_pairs(std::span<const Hyperedge> test_edges,
                                      const NegativeSampler& sampler, std::size_t num_pairs,
                                      Rng& rng) {
  if (test_edges.empty()) throw std::invalid_argument("no test hyperedges to evaluate");
  std::uniform_int_distribution<std::size_t> pick(0, test_edges.size() - 1);
  std::vector<AucPair> pairs;
  pairs.reserve(num_pairs);
  for (std::size_t p = 0; p < num_pairs; ++p) {
    const Hyperedge& pos = test_edges[pick(rng)];
    pairs.push_back({pos.nodes, sampler.sample(static_cast<int>(pos.size()), rng)});
  }
  return pairs;
}

double auc_from_pairs(std::span<const AucPair> pairs, const ScoreFn& score) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to score");
  // Integer count of half-points keeps the sum exact.
  std::uint64_t half_points = 0;
  for (const auto& pair : pairs) {
    const double p = score(pair.positive);
    const double n = score(pair.negative);
    if (p > n)
      half_points += 2;
    else if (p == n)
      half_points += 1;
  }
  return static_cast<double>(half_points) / (2.0 * static_cast<double>(pairs.size()));
}

AucEstimate estimate_auc(std::span<const Hyperedge> test_edges, const Hypergraph& h,
                         const ScoreFn& score, std::size_t num_pairs, std::uint64_t seed) {
  Rng rng(seed);
  const NegativeSampler sampler(h);
  const auto pairs = sample_auc_pairs(test_edges, sampler, num_pairs, rng);
  return {auc_from_pairs(pairs, score), num_pairs, seed};
}

// ---------------------------------------------------------------------------
// Cosine similarity

std::vector<std::size_t> max_weight_assignment(const Matrix& weights) {
  const std::size_t n = weights.rows();
  if (weights.cols() != n) throw std::invalid_argument("assignment matrix must be square");
  if (n == 0) return {};
  // Hungarian method with potentials on cost = -weight; 1-based with a dummy
  // column 0.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weights(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

CosineSimilarity cosine_similarity(const Matrix& u_true, const Matrix& u_hat) {
  if (u_true.rows() != u_hat.rows() || u_true.cols() != u_hat.cols())
    throw std::invalid_argument("cosine similarity: matrices differ in shape");
  const std::size_t n = u_true.rows(), k = u_true.cols();
  CosineSimilarity out;

  auto norm = [k](std::span<const double> row) {
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) s += row[a] * row[a];
    return std::sqrt(s);
  };

  // A[a, b] = sum_i u_ia * uhat_ib / (|u_i| |uhat_i|); the objective for a
  // permutation pi is sum_a A[a, pi(a)] / rows_used.
  Matrix affinity(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    const double nt = norm(u_true.row(i));
    const double nh = norm(u_hat.row(i));
    if (nt == 0.0 || nh == 0.0) {
      out.excluded_rows.push_back(i);
      continue;
    }
    ++out.rows_used;
    const double scale = 1.0 / (nt * nh);
    for (std::size_t a = 0; a < k; ++a) {
      if (u_true(i, a) == 0.0) continue;
      for (std::size_t b = 0; b < k; ++b) affinity(a, b) += u_true(i, a) * u_hat(i, b) * scale;
    }
  }
  out.permutation = max_weight_assignment(affinity);
  if (out.rows_used == 0) return out;
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) total += affinity(a, out.permutation[a]);
  out.value = total / static_cast<double>(out.rows_used);
  return out;
}

MembershipSummary membership_summary(const Matrix& memberships,
                                     std::span<const std::string> labels) {
  const std::size_t n = memberships.rows(), k = memberships.cols();
  if (!labels.empty() && labels.size() != n)
    throw std::invalid_argument("label count does not match the membership matrix");
  MembershipSummary out;
  out.normalized = Matrix(n, k);
  out.zero_row.assign(n, false);
  out.entropy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (double x : memberships.row(i)) total += x;
    if (!(total > 0.0)) {
      out.zero_row[i] = true;
      continue;
    }
    double h = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double p = memberships(i, a) / total;
      out.normalized(i, a) = p;
      if (p > 0.0) h -= p * std::log(p);
    }
    out.entropy[i] = std::clamp(h, 0.0, std::log(static_cast<double>(k)));
  }

  if (labels.empty()) return out;
  std::map<std::string, std::size_t> class_index;
  for (const auto& l : labels)
    if (!l.empty()) class_index.emplace(l, 0);
  for (auto& [name, idx] : class_index) {
    idx = out.classes.size();
    out.classes.push_back(name);
  }
  out.class_average = Matrix(out.classes.size(), k);
  out.class_size.assign(out.classes.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i].empty()) {
      ++out.unlabeled;
      continue;
    }
    if (out.zero_row[i]) continue;
    const std::size_t c = class_index.at(labels[i]);
    ++out.class_size[c];
    for (std::size_t a = 0; a < k; ++a) out.class_average(c, a) += out.normalized(i, a);
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    if (out.class_size[c] > 0)
      for (std::size_t a = 0; a < k; ++a)
        out.class_average(c, a) /= static_cast<double>(out.class_size[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

TTestResult paired_t_test_one_sided(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("paired t-test: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - y[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double var = ss / static_cast<double>(n - 1);

  TTestResult out;
  out.degrees_of_freedom = n - 1;
  out.mean_difference = mean;
  // Treat variance at rounding level of the mean as zero.
  const double scale = std::max(std::abs(mean), 1e-300);
  if (var <= 1e-24 * scale * scale || var == 0.0) {
    if (mean > 0.0 && std::all_of(diff.begin(), diff.end(), [](double d) { return d > 0.0; })) {
      out.t_statistic = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
      out.p_below_representable = true;
    } else {
      out.t_statistic = mean < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
      out.p_value = 1.0;
    }
    return out;
  }
  out.t_statistic = mean / std::sqrt(var / static_cast<double>(n));
  boost::math::students_t dist(static_cast<double>(n - 1));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
  return out;
}

double bonferroni(double p, std::size_t num_tests) {
  return std::min(1.0, p * static_cast<double>(num_tests));
}

std::pair<double, double> bootstrap_mean_ci(std::span<const double> samples, double level,
                                            std::size_t resamples, std::uint64_t seed) {
  if (samples.size() < 2) throw std::invalid_argument("bootstrap needs at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  if (resamples < 1) throw std::invalid_argument("need at least one resample");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) s += samples[pick(rng)];
    m = s / static_cast<double>(samples.size());
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] + frac * (means[hi] - means[lo]);
  };
  const double alpha = (1.0 - level) / 2.0;
  return {quantile(alpha), quantile(1.0 - alpha)};
}

}  // namespace hypermosbm
