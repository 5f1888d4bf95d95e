#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypermosbm/hypergraph.hpp"

namespace hypermosbm {

using OrderSet = std::vector<int>;

/// Partition of the order set {2, ..., D} into L disjoint, non-empty subsets.
/// Stored canonically: each subset sorted ascending and subsets ordered by
/// their smallest element. Subset index l selects the affinity matrix W^(l).
class OrderPartition {
 public:
  OrderPartition() = default;
  /// Throws std::invalid_argument naming the offending order on a gap,
  /// overlap, or order outside [2, max_order].
  OrderPartition(std::vector<OrderSet> subsets, int max_order);

  static OrderPartition trivial(int max_order);
  /// Parses "2,4,5|3"; ranges "2-9" are accepted inside a subset.
  static OrderPartition parse(std::string_view text, int max_order);

  std::size_t size() const { return subsets_.size(); }
  int max_order() const { return max_order_; }
  const std::vector<OrderSet>& subsets() const { return subsets_; }
  const OrderSet& subset(std::size_t l) const { return subsets_[l]; }
  /// Index l of the subset containing order s.
  std::size_t subset_of(int s) const { return lookup_.at(static_cast<std::size_t>(s)); }
  bool is_trivial() const { return subsets_.size() == 1; }

  /// "2,4,5|3"
  std::string to_string() const;

  friend bool operator==(const OrderPartition& a, const OrderPartition& b) {
    return a.max_order_ == b.max_order_ && a.subsets_ == b.subsets_;
  }

 private:
  std::vector<OrderSet> subsets_;
  std::vector<std::size_t> lookup_;
  int max_order_ = 0;
};

/// The consecutive order set {2, ..., max_order}.
OrderSet order_range(int max_order);

/// All set partitions of `orders` in canonical form. The count is
/// Bell(|orders|). Throws std::invalid_argument when |orders| exceeds `limit`
/// (callers should switch to greedy search) or is zero.
std::vector<OrderPartition> enumerate_set_partitions(const OrderSet& orders, int max_order,
                                                     std::size_t limit = 4);

/// Splits of a sorted subset at every gap between adjacent elements; empty for
/// a singleton.
std::vector<std::pair<OrderSet, OrderSet>> contiguous_binary_splits(const OrderSet& subset);

/// Number of observed hyperedges whose order lies in `subset`.
std::size_t subset_edge_count(const OrderSet& subset, const OrderHistogram& hist);

/// True iff every subset has at least c * K (K + 1) / 2 observed hyperedges.
bool is_admissible(const OrderPartition& p, const OrderHistogram& hist, std::size_t k,
                   double c);

}  // namespace hypermosbm
