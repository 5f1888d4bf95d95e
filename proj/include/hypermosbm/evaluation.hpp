#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hypermosbm/hypergraph.hpp"
#include "hypermosbm/matrix.hpp"
#include "hypermosbm/random.hpp"

namespace hypermosbm {

// ---------------------------------------------------------------------------
// Hyperlink prediction

/// Draws non-observed node sets of a given size. Membership is tested against
/// every edge of the hypergraph it was built from (use the full hypergraph,
/// not a training view).
class NegativeSampler {
 public:
  static constexpr int kMaxRetries = 1000;

  explicit NegativeSampler(const Hypergraph& h);

  /// Uniform over size-`size` node subsets not present as edges. Throws
  /// std::runtime_error if no such subset exists or the retry cap is hit.
  NodeSet sample(int size, Rng& rng) const;
  bool is_observed(const NodeSet& nodes) const { return observed_.contains(nodes); }

 private:
  std::size_t num_nodes_;
  int max_order_;
  OrderHistogram hist_;
  std::unordered_set<NodeSet, NodeSetHash> observed_;
};

NodeSet sample_negative(int size, const Hypergraph& h, Rng& rng);

struct AucPair {
  NodeSet positive;
  NodeSet negative;
};

/// num_pairs (positive, size-matched negative) pairs; positives drawn
/// uniformly with replacement from test_edges.
std::vector<AucPair> sample_auc_pairs(std::span<const Hyperedge> test_edges,
                                      const NegativeSampler& sampler, std::size_t num_pairs,
                                      Rng& rng);

using ScoreFn = std::function<double(std::span<const NodeId>)>;

/// Mean of 1[f(pos) > f(neg)] + 0.5 * 1[f(pos) == f(neg)] over the pairs.
double auc_from_pairs(std::span<const AucPair> pairs, const ScoreFn& score);

struct AucEstimate {
  double value = 0.0;
  std::size_t num_pairs = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo AUC with `num_pairs` pairs drawn from a stream seeded by `seed`.
AucEstimate estimate_auc(std::span<const Hyperedge> test_edges, const Hypergraph& h,
                         const ScoreFn& score, std::size_t num_pairs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Community recovery

/// Maximum-weight perfect matching on a square matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<std::size_t> max_weight_assignment(const Matrix& weights);

struct CosineSimilarity {
  double value = 0.0;
  /// Rows averaged over (rows that are all-zero in either matrix are skipped).
  std::size_t rows_used = 0;
  std::vector<std::size_t> excluded_rows;
  /// permutation[k] = column of u_hat matched with column k of u_true.
  std::vector<std::size_t> permutation;
};

/// Permutation-maximized mean per-node cosine similarity. Throws
/// std::invalid_argument on a dimension mismatch.
CosineSimilarity cosine_similarity(const Matrix& u_true, const Matrix& u_hat);

struct MembershipSummary {
  Matrix normalized;
  std::vector<bool> zero_row;
  std::vector<double> entropy;
  std::vector<std::string> classes;  // sorted distinct labels
  Matrix class_average;              // classes.size() x K
  std::vector<std::size_t> class_size;
  std::size_t unlabeled = 0;
};

/// Row-normalizes memberships, computes natural-log row entropy and averages
/// normalized rows per label. Zero rows are flagged and left out of averages;
/// nodes with an empty label are counted as unlabeled. `labels` may be empty.
MembershipSummary membership_summary(const Matrix& memberships,
                                     std::span<const std::string> labels);

// ---------------------------------------------------------------------------
// Statistics

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
  double mean_difference = 0.0;
  /// Differences have zero variance and a positive mean: p is reported as 0.
  bool p_below_representable = false;
};

/// One-sided paired t-test of mean(x - y) > 0 with n - 1 degrees of freedom.
TTestResult paired_t_test_one_sided(std::span<const double> x, std::span<const double> y);

/// min(1, p * num_tests).
double bonferroni(double p, std::size_t num_tests);

/// Percentile bootstrap interval of the mean.
std::pair<double, double> bootstrap_mean_ci(std::span<const double> samples, double level,
                                            std::size_t resamples, std::uint64_t seed);

}  // namespace hypermosbm
