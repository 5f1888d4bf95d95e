#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "../support/generators.hpp"
#include "hypermosbm/hypergraph.hpp"

using namespace hypermosbm;

namespace {

Hypergraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_hyperedge_list(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Parse, FirstAppearanceIndexing) {
  const Hypergraph h = parse("a,b\na,b,c");
  EXPECT_EQ(h.num_nodes(), 3u);
  EXPECT_EQ(h.max_order(), 3);
  ASSERT_EQ(h.num_edges(), 2u);
  EXPECT_EQ(h.edge(0), (Hyperedge{{0, 1}, 1}));
  EXPECT_EQ(h.edge(1), (Hyperedge{{0, 1, 2}, 1}));
  EXPECT_EQ(h.node_name(2), "c");
}

TEST(Parse, DuplicatesAggregateWeights) {
  const Hypergraph h = parse("a,b\nb,a");
  ASSERT_EQ(h.num_edges(), 1u);
  EXPECT_EQ(h.edge(0), (Hyperedge{{0, 1}, 2}));
}

TEST(Parse, TrailingWeightAndComments) {
  const Hypergraph h = parse("# header\nx,y,z 4\n\ny,z\t2\nx,y\n");
  ASSERT_EQ(h.num_edges(), 3u);
  EXPECT_EQ(h.edge(0).weight, 4u);
  EXPECT_EQ(h.edge(1).weight, 2u);
  EXPECT_EQ(h.edge(2).weight, 1u);
}

TEST(Parse, HeaderOverridesMaxOrder) {
  const Hypergraph h = parse("#D=5\n1,2\n2,3,4\n4,5,6\n7,8");
  EXPECT_EQ(h.max_order(), 5);
  EXPECT_EQ(h.num_nodes(), 8u);
}

TEST(Parse, Errors) {
  EXPECT_EQ(parse_error_line("a"), 1u);
  EXPECT_EQ(parse_error_line("a,b\nc,c"), 2u);
  EXPECT_EQ(parse_error_line("a,b\nb,c\nc,d 1.5"), 3u);
  EXPECT_EQ(parse_error_line("a,b 0"), 1u);
  EXPECT_EQ(parse_error_line("a,b -2"), 1u);
}

TEST(Parse, HeaderBelowObservedSizeFails) {
  EXPECT_THROW(parse("#D=2\na,b,c"), ParseError);
}

TEST(Parse, KnownNamesFixIndices) {
  const std::vector<std::string> names{"z", "y", "x"};
  std::istringstream in("x,y\n");
  const Hypergraph h = parse_hyperedge_list(in, names);
  EXPECT_EQ(h.num_nodes(), 3u);
  EXPECT_EQ(h.edge(0).nodes, (NodeSet{1, 2}));
}

TEST(Hypergraph, InvariantsAreChecked) {
  EXPECT_THROW(Hypergraph(3, 3, {{{0, 3}, 1}}), std::invalid_argument);
  EXPECT_THROW(Hypergraph(4, 2, {{{0, 1, 2}, 1}}), std::invalid_argument);
  EXPECT_THROW(Hypergraph(4, 3, {{{1, 1}, 1}}), std::invalid_argument);
  EXPECT_THROW(Hypergraph(4, 3, {{{0, 1}, 0}}), std::invalid_argument);
  const Hypergraph h(4, 3, {{{2, 0}, 1}, {{0, 2}, 2}});
  ASSERT_EQ(h.num_edges(), 1u);
  EXPECT_EQ(h.edge(0), (Hyperedge{{0, 2}, 3}));
}

TEST(Hypergraph, RoundTripThroughTextAndMapping) {
  gen::Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen::uniform_int(rng, 5, 20);
    const int d = static_cast<int>(gen::uniform_int(rng, 2, 5));
    const Hypergraph h = gen::hypergraph(rng, n, d, 40);
    std::ostringstream text, mapping;
    const std::vector<std::string> comments{"comment line"};
    write_hyperedge_list(text, h, comments);
    write_node_mapping(mapping, h);
    std::istringstream map_in(mapping.str());
    const auto names = parse_node_mapping(map_in);
    std::istringstream in(text.str());
    const Hypergraph back = parse_hyperedge_list(in, names);
    EXPECT_EQ(back.num_nodes(), h.num_nodes());
    EXPECT_EQ(back.max_order(), h.max_order());
    ASSERT_EQ(back.num_edges(), h.num_edges());
    for (std::size_t e = 0; e < h.num_edges(); ++e) EXPECT_EQ(back.edge(e), h.edge(e));
  }
}

TEST(Labels, ParsedByNodeName) {
  Hypergraph h = parse("a,b\nb,c");
  std::istringstream in("# node,label\nc,2\na,1\n");
  h.set_labels(parse_node_labels(in, h));
  EXPECT_EQ(h.labels(), (std::vector<std::string>{"1", "", "2"}));
  EXPECT_EQ(h.num_label_categories(), 2u);
  std::istringstream bad("q,1\n");
  EXPECT_THROW(parse_node_labels(bad, h), ParseError);
}

TEST(Histogram, Examples) {
  const Hypergraph a(5, 3, {{{0, 1}, 1}, {{1, 2}, 5}, {{0, 1, 2}, 1}});
  const auto ha = order_histogram(a);
  EXPECT_EQ(ha[2], 2u);
  EXPECT_EQ(ha[3], 1u);

  const Hypergraph empty(4, 3, {});
  const auto he = order_histogram(empty);
  EXPECT_EQ(he.total(), 0u);
  EXPECT_EQ(he[2], 0u);
  EXPECT_EQ(he[3], 0u);

  const Hypergraph b(6, 5, {{{0, 1}, 1}, {{0, 1, 2}, 1}, {{0, 1, 2, 3}, 1}});
  const auto hb = order_histogram(b);
  EXPECT_EQ(hb[2], 1u);
  EXPECT_EQ(hb[3], 1u);
  EXPECT_EQ(hb[4], 1u);
  EXPECT_EQ(hb[5], 0u);
}

TEST(Histogram, SumsToEdgeCount) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph h = gen::hypergraph(rng, gen::uniform_int(rng, 6, 30),
                                         static_cast<int>(gen::uniform_int(rng, 2, 6)),
                                         gen::uniform_int(rng, 0, 80));
    EXPECT_EQ(order_histogram(h).total(), h.num_edges());
  }
}

TEST(Folds, Examples) {
  gen::Rng rng(3);
  const Hypergraph ten = gen::hypergraph(rng, 30, 2, 10, 1);
  ASSERT_EQ(ten.num_edges(), 10u);
  for (std::size_t s : split_folds(ten, 10, 1).fold_sizes()) EXPECT_EQ(s, 1u);

  std::vector<Hyperedge> edges;
  for (NodeId i = 0; i < 23; ++i) edges.push_back({{i, i + 1}, 1});
  const Hypergraph h23(24, 2, edges);
  auto sizes = split_folds(h23, 10, 5).fold_sizes();
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 3u), 3);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 2u), 7);

  EXPECT_EQ(split_folds(h23, 10, 42), split_folds(h23, 10, 42));
  EXPECT_NE(split_folds(h23, 10, 42).fold_of_edge, split_folds(h23, 10, 43).fold_of_edge);
}

TEST(Folds, Errors) {
  const Hypergraph h(4, 2, {{{0, 1}, 1}, {{1, 2}, 1}});
  EXPECT_THROW(split_folds(h, 3, 0), std::invalid_argument);
  EXPECT_THROW(split_folds(h, 1, 0), std::invalid_argument);
}

TEST(Folds, DisjointCoveringAndBalanced) {
  gen::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t folds = gen::uniform_int(rng, 2, 12);
    const Hypergraph h = gen::hypergraph(rng, 40, 4, gen::uniform_int(rng, folds, 150));
    if (h.num_edges() < folds) continue;
    const FoldAssignment fa = split_folds(h, folds, rng());
    ASSERT_EQ(fa.fold_of_edge.size(), h.num_edges());
    for (auto f : fa.fold_of_edge) EXPECT_LT(f, folds);
    const auto sizes = fa.fold_sizes();
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()),
              1u);
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    EXPECT_EQ(total, h.num_edges());
  }
}

TEST(TrainView, PartitionsTheEdges) {
  gen::Rng rng(5);
  const Hypergraph h = gen::hypergraph(rng, 20, 4, 60, 4);
  const FoldAssignment fa = split_folds(h, 10, 8);
  for (std::size_t f = 0; f < 10; ++f) {
    const TrainTestSplit split = train_view(h, fa, f);
    EXPECT_EQ(split.train.num_nodes(), h.num_nodes());
    EXPECT_EQ(split.train.max_order(), h.max_order());
    EXPECT_EQ(split.train.num_edges() + split.test_edges.size(), h.num_edges());
    std::set<NodeSet> seen;
    for (const auto& e : split.train.edges()) seen.insert(e.nodes);
    for (const auto& e : split.test_edges) EXPECT_TRUE(seen.insert(e.nodes).second);
    for (const auto& e : h.edges()) {
      EXPECT_TRUE(seen.contains(e.nodes));
      auto it = std::find_if(split.train.edges().begin(), split.train.edges().end(),
                             [&](const Hyperedge& x) { return x.nodes == e.nodes; });
      if (it != split.train.edges().end()) EXPECT_EQ(it->weight, e.weight);
    }
  }
}

TEST(TrainView, TenOfTen) {
  std::vector<Hyperedge> edges;
  for (NodeId i = 0; i < 10; ++i) edges.push_back({{i, i + 1}, i == 0 ? 3u : 1u});
  const Hypergraph h(11, 2, edges);
  const FoldAssignment fa = split_folds(h, 10, 0);
  const auto split = train_view(h, fa, fa.fold_of_edge[5]);
  EXPECT_EQ(split.train.num_edges(), 9u);
  EXPECT_EQ(split.test_edges.size(), 1u);
  EXPECT_EQ(split.test_edges[0].nodes, (NodeSet{5, 6}));
  const auto keep = train_view(h, fa, fa.fold_of_edge[9]);
  EXPECT_EQ(keep.train.edge(0).weight, 3u);
}
