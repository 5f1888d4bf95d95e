#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hypermosbm {

using NodeId = std::uint32_t;
using NodeSet = std::vector<NodeId>;

struct Hyperedge {
  NodeSet nodes;  // sorted ascending, distinct
  std::uint64_t weight = 1;

  std::size_t size() const { return nodes.size(); }
  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Error raised while reading a hyperedge-list or label file. line() is
/// 1-based; 0 means the error is not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Weighted hypergraph on dense node indices [0, N).
///
/// Invariants: node sets are sorted, distinct and of size in [2, D]; no two
/// edges share a node set (duplicates passed to the constructor have their
/// weights summed, keeping the position of the first occurrence); weights >= 1.
class Hypergraph {
 public:
  Hypergraph() = default;
  /// Validates and normalizes `edges`. Node sets need not be pre-sorted.
  /// Throws std::invalid_argument on any violated invariant.
  Hypergraph(std::size_t num_nodes, int max_order, std::vector<Hyperedge> edges,
             std::vector<std::string> node_names = {});

  std::size_t num_nodes() const { return num_nodes_; }
  int max_order() const { return max_order_; }
  std::size_t num_edges() const { return edges_.size(); }
  /// Sum of edge sizes.
  std::size_t total_size() const;
  std::span<const Hyperedge> edges() const { return edges_; }
  const Hyperedge& edge(std::size_t e) const { return edges_[e]; }

  /// External identifier of each node (sidecar mapping); empty names mean
  /// the node is identified by its index.
  const std::vector<std::string>& node_names() const { return node_names_; }
  std::string node_name(NodeId v) const;

  /// Node category labels; empty vector when no labels were attached,
  /// otherwise one entry per node ("" for unlabeled nodes).
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  /// Number of distinct non-empty labels.
  std::size_t num_label_categories() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t num_nodes_ = 0;
  int max_order_ = 2;
  std::vector<Hyperedge> edges_;
  std::vector<std::string> node_names_;
  std::vector<std::string> labels_;
};

/// Parses the hyperedge-list format: one hyperedge per line as
/// comma-separated node identifiers, optionally followed by whitespace and a
/// positive integer weight. '#' starts a comment line; "#D=<int>" fixes the
/// maximum order. Identifiers are indexed in first-appearance order unless a
/// `known_names` mapping (index -> identifier) is supplied, in which case it
/// seeds the indexing and N is at least its size.
Hypergraph parse_hyperedge_list(std::istream& in,
                                std::span<const std::string> known_names = {});
Hypergraph read_hyperedge_list(const std::string& path,
                               std::span<const std::string> known_names = {});

/// Writes `h` in the format accepted by parse_hyperedge_list. Extra comment
/// lines are emitted after the "#D=" header, each prefixed with "# ".
void write_hyperedge_list(std::ostream& out, const Hypergraph& h,
                          std::span<const std::string> comments = {});

/// Two-column "index,name" mapping file.
void write_node_mapping(std::ostream& out, const Hypergraph& h);
std::vector<std::string> parse_node_mapping(std::istream& in);

/// Reads "node_id,label" lines and returns one label per node of `h`
/// (unknown identifiers are an error, unlisted nodes get "").
std::vector<std::string> parse_node_labels(std::istream& in, const Hypergraph& h);

/// counts[s] = number of distinct hyperedges of size s, for s in [0, D]
/// (entries 0 and 1 are always zero).
struct OrderHistogram {
  std::vector<std::size_t> counts;

  std::size_t operator[](int s) const {
    return s >= 0 && static_cast<std::size_t>(s) < counts.size() ? counts[s] : 0;
  }
  std::size_t total() const;
};

OrderHistogram order_histogram(const Hypergraph& h);

struct FoldAssignment {
  std::size_t num_folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> fold_of_edge;

  std::vector<std::size_t> fold_sizes() const;
  friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;
};

/// Shuffles edge indices with a seeded uniform permutation and deals them
/// round-robin into `num_folds` folds. Throws std::invalid_argument when
/// num_folds < 2 or E < num_folds.
FoldAssignment split_folds(const Hypergraph& h, std::size_t num_folds, std::uint64_t seed);

struct TrainTestSplit {
  Hypergraph train;
  std::vector<Hyperedge> test_edges;
};

/// Training hypergraph without the edges of `test_fold` (same N, D, names,
/// labels and weights) plus the held-out edges.
TrainTestSplit train_view(const Hypergraph& h, const FoldAssignment& folds,
                          std::size_t test_fold);

/// Hash of a sorted node set, for O(1) membership tests.
struct NodeSetHash {
  std::size_t operator()(const NodeSet& nodes) const noexcept;
};

}  // namespace hypermosbm
