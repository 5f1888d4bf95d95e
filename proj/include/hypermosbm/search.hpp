#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypermosbm/evaluation.hpp"
#include "hypermosbm/hypergraph.hpp"
#include "hypermosbm/model.hpp"
#include "hypermosbm/partition.hpp"

namespace hypermosbm {

struct SearchConfig {
  std::size_t num_folds = 10;
  std::size_t auc_pairs = 10000;
  double min_edges_factor = 5.0;
  double greedy_gain_threshold = 1e-3;
  std::size_t exhaustive_limit = 4;
  FitConfig fit;
  /// Seeds the fold split and the negative samples of every fold.
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

/// Folds, training views and AUC pairs shared by every candidate partition of
/// one search, so fold-level AUCs of different candidates are paired.
struct CrossValidationPlan {
  FoldAssignment folds;
  std::vector<Hypergraph> train;
  std::vector<std::vector<AucPair>> pairs;
};

CrossValidationPlan make_cv_plan(const Hypergraph& h, const SearchConfig& cfg);

struct PartitionScore {
  OrderPartition partition;
  std::vector<double> fold_aucs;
  double mean_auc = 0.0;
};

/// Fits on every training fold and scores the fold's pairs. Fold f is fitted
/// with seed derive_seed(cfg.fit.seed, {kFit, f}).
PartitionScore evaluate_partition(const CrossValidationPlan& plan, const OrderPartition& p,
                                  const SearchConfig& cfg);
PartitionScore evaluate_partition(const Hypergraph& h, const OrderPartition& p,
                                  const SearchConfig& cfg);

enum class SearchMode { kExhaustive, kGreedy };
std::string to_string(SearchMode mode);

struct SearchStep {
  std::size_t step = 0;
  OrderPartition current;
  double current_auc = 0.0;
  /// Best admissible candidate of this step; absent when none existed.
  std::optional<OrderPartition> best_candidate;
  double best_candidate_auc = 0.0;
  bool accepted = false;
};

struct SearchResult {
  SearchMode mode = SearchMode::kExhaustive;
  OrderPartition final_partition;
  double final_auc = 0.0;
  /// In evaluation order; exhaustive mode ranks them separately via ranked().
  std::vector<PartitionScore> evaluated;
  double baseline_auc = 0.0;
  double delta_auc = 0.0;
  std::vector<double> final_fold_aucs;
  std::vector<double> baseline_fold_aucs;
  std::vector<SearchStep> trace;
  std::size_t inadmissible_skipped = 0;

  /// Evaluated partitions sorted by mean AUC (desc), then L, then canonical order.
  std::vector<PartitionScore> ranked() const;
};

/// Exhaustive search over all admissible partitions of {2..D} when
/// D - 1 <= exhaustive_limit, greedy contiguous splitting otherwise.
/// Throws std::runtime_error if no partition is admissible.
SearchResult search(const Hypergraph& h, const SearchConfig& cfg);

/// The adoption heuristic for a multi-order model.
inline constexpr double kDeltaAucHeuristic = 0.01;

}  // namespace hypermosbm
