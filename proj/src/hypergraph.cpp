#include "hypermosbm/hypergraph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "hypermosbm/random.hpp"

namespace hypermosbm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

// ---------------------------------------------------------------------------

Hypergraph::Hypergraph(std::size_t num_nodes, int max_order, std::vector<Hyperedge> edges,
                       std::vector<std::string> node_names)
    : num_nodes_(num_nodes), max_order_(max_order), node_names_(std::move(node_names)) {
  if (max_order < 2) throw std::invalid_argument("maximum order must be at least 2");
  if (!node_names_.empty() && node_names_.size() != num_nodes_)
    throw std::invalid_argument("node name count does not match the number of nodes");

  std::unordered_map<NodeSet, std::size_t, NodeSetHash> index;
  edges_.reserve(edges.size());
  for (auto& e : edges) {
    std::sort(e.nodes.begin(), e.nodes.end());
    if (std::adjacent_find(e.nodes.begin(), e.nodes.end()) != e.nodes.end())
      throw std::invalid_argument("hyperedge contains a repeated node");
    if (e.nodes.size() < 2 || e.nodes.size() > static_cast<std::size_t>(max_order))
      throw std::invalid_argument("hyperedge size " + std::to_string(e.nodes.size()) +
                                  " outside [2, " + std::to_string(max_order) + "]");
    if (e.nodes.back() >= num_nodes_)
      throw std::invalid_argument("node index " + std::to_string(e.nodes.back()) +
                                  " out of range");
    if (e.weight == 0) throw std::invalid_argument("hyperedge weight must be positive");
    auto [it, inserted] = index.try_emplace(e.nodes, edges_.size());
    if (inserted)
      edges_.push_back(std::move(e));
    else
      edges_[it->second].weight += e.weight;
  }
}

std::size_t Hypergraph::total_size() const {
  std::size_t m = 0;
  for (const auto& e : edges_) m += e.size();
  return m;
}

std::string Hypergraph::node_name(NodeId v) const {
  return node_names_.empty() ? std::to_string(v) : node_names_.at(v);
}

void Hypergraph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != num_nodes_)
    throw std::invalid_argument("label count does not match the number of nodes");
  labels_ = std::move(labels);
}

std::size_t Hypergraph::num_label_categories() const {
  std::set<std::string_view> distinct;
  for (const auto& l : labels_)
    if (!l.empty()) distinct.insert(l);
  return distinct.size();
}

std::size_t NodeSetHash::operator()(const NodeSet& nodes) const noexcept {
  std::uint64_t h = nodes.size();
  for (NodeId v : nodes) h = mix64(h ^ v);
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Text I/O

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Splits a data line into its node list and optional weight token. A trailing
// whitespace-separated token is a weight only if it contains no comma and the
// text before it does not end with a comma ("a, b" is a node list).
std::pair<std::string_view, std::string_view> split_weight(std::string_view line) {
  const auto ws = line.find_last_of(" \t");
  if (ws == std::string_view::npos) return {line, {}};
  std::string_view head = trim(line.substr(0, ws));
  std::string_view tail = trim(line.substr(ws + 1));
  if (tail.find(',') != std::string_view::npos || head.empty() || head.back() == ',')
    return {line, {}};
  return {head, tail};
}

}  // namespace

Hypergraph parse_hyperedge_list(std::istream& in, std::span<const std::string> known_names) {
  std::vector<std::string> names(known_names.begin(), known_names.end());
  std::unordered_map<std::string, NodeId> ids;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!ids.try_emplace(names[i], static_cast<NodeId>(i)).second)
      throw ParseError(0, "duplicate node identifier '" + names[i] + "' in mapping");
  }

  std::optional<int> declared_order;
  std::vector<Hyperedge> edges;
  int observed_order = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      if (body.starts_with("D=")) {
        int d = 0;
        if (!parse_int(trim(body.substr(2)), d) || d < 2)
          throw ParseError(line_no, "invalid maximum-order directive");
        declared_order = d;
      }
      continue;
    }

    auto [node_part, weight_part] = split_weight(line);
    Hyperedge edge;
    if (!weight_part.empty()) {
      long long w = 0;
      if (!parse_int(weight_part, w))
        throw ParseError(line_no, "weight '" + std::string(weight_part) + "' is not an integer");
      if (w <= 0) throw ParseError(line_no, "weight must be positive");
      edge.weight = static_cast<std::uint64_t>(w);
    }

    std::size_t start = 0;
    while (start <= node_part.size()) {
      auto comma = node_part.find(',', start);
      if (comma == std::string_view::npos) comma = node_part.size();
      std::string_view token = trim(node_part.substr(start, comma - start));
      if (token.empty()) throw ParseError(line_no, "empty node identifier");
      auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(names.size()));
      if (inserted) names.emplace_back(token);
      edge.nodes.push_back(it->second);
      start = comma + 1;
    }
    std::sort(edge.nodes.begin(), edge.nodes.end());
    edge.nodes.erase(std::unique(edge.nodes.begin(), edge.nodes.end()), edge.nodes.end());
    if (edge.nodes.size() < 2)
      throw ParseError(line_no, "hyperedge needs at least 2 distinct nodes");
    observed_order = std::max(observed_order, static_cast<int>(edge.nodes.size()));
    if (declared_order && static_cast<int>(edge.nodes.size()) > *declared_order)
      throw ParseError(line_no, "hyperedge larger than declared maximum order");
    edges.push_back(std::move(edge));
  }

  const int max_order = declared_order.value_or(std::max(observed_order, 2));
  if (observed_order > max_order)
    throw ParseError(0, "hyperedge larger than declared maximum order");
  const std::size_t n = names.size();
  return Hypergraph(n, max_order, std::move(edges), std::move(names));
}

Hypergraph read_hyperedge_list(const std::string& path, std::span<const std::string> known_names) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return parse_hyperedge_list(in, known_names);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

void write_hyperedge_list(std::ostream& out, const Hypergraph& h,
                          std::span<const std::string> comments) {
  out << "#D=" << h.max_order() << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.nodes.size(); ++i) {
      if (i) out << ',';
      out << h.node_name(e.nodes[i]);
    }
    if (e.weight != 1) out << ' ' << e.weight;
    out << '\n';
  }
}

void write_node_mapping(std::ostream& out, const Hypergraph& h) {
  for (std::size_t v = 0; v < h.num_nodes(); ++v)
    out << v << ',' << h.node_name(static_cast<NodeId>(v)) << '\n';
}

std::vector<std::string> parse_node_mapping(std::istream& in) {
  std::vector<std::string> names;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    std::size_t index = 0;
    if (comma == std::string_view::npos || !parse_int(trim(line.substr(0, comma)), index))
      throw ParseError(line_no, "expected 'index,name'");
    if (index != names.size()) throw ParseError(line_no, "mapping indices must be 0,1,2,...");
    names.emplace_back(trim(line.substr(comma + 1)));
  }
  return names;
}

std::vector<std::string> parse_node_labels(std::istream& in, const Hypergraph& h) {
  std::unordered_map<std::string, NodeId> ids;
  for (std::size_t v = 0; v < h.num_nodes(); ++v)
    ids.emplace(h.node_name(static_cast<NodeId>(v)), static_cast<NodeId>(v));
  std::vector<std::string> labels(h.num_nodes());
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError(line_no, "expected 'node_id,label'");
    std::string id(trim(line.substr(0, comma)));
    auto it = ids.find(id);
    if (it == ids.end()) throw ParseError(line_no, "unknown node '" + id + "'");
    labels[it->second] = std::string(trim(line.substr(comma + 1)));
  }
  return labels;
}

// ---------------------------------------------------------------------------

std::size_t OrderHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

OrderHistogram order_histogram(const Hypergraph& h) {
  OrderHistogram hist;
  hist.counts.assign(static_cast<std::size_t>(h.max_order()) + 1, 0);
  for (const auto& e : h.edges()) ++hist.counts[e.size()];
  return hist;
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(num_folds, 0);
  for (auto f : fold_of_edge) ++sizes[f];
  return sizes;
}

FoldAssignment split_folds(const Hypergraph& h, std::size_t num_folds, std::uint64_t seed) {
  if (num_folds < 2) throw std::invalid_argument("need at least 2 folds");
  const std::size_t e = h.num_edges();
  if (e < num_folds)
    throw std::invalid_argument("cannot split " + std::to_string(e) + " hyperedges into " +
                                std::to_string(num_folds) + " folds");
  std::vector<std::size_t> order(e);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  FoldAssignment fa;
  fa.num_folds = num_folds;
  fa.seed = seed;
  fa.fold_of_edge.resize(e);
  for (std::size_t pos = 0; pos < e; ++pos)
    fa.fold_of_edge[order[pos]] = static_cast<std::uint32_t>(pos % num_folds);
  return fa;
}

TrainTestSplit train_view(const Hypergraph& h, const FoldAssignment& folds,
                          std::size_t test_fold) {
  if (test_fold >= folds.num_folds) throw std::invalid_argument("test fold out of range");
  if (folds.fold_of_edge.size() != h.num_edges())
    throw std::invalid_argument("fold assignment does not match the hypergraph");
  std::vector<Hyperedge> train;
  TrainTestSplit split;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (folds.fold_of_edge[e] == test_fold)
      split.test_edges.push_back(h.edge(e));
    else
      train.push_back(h.edge(e));
  }
  split.train = Hypergraph(h.num_nodes(), h.max_order(), std::move(train), h.node_names());
  split.train.set_labels(h.labels());
  return split;
}

}  // namespace hypermosbm
