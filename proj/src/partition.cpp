#include "hypermosbm/partition.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace hypermosbm {

OrderPartition::OrderPartition(std::vector<OrderSet> subsets, int max_order)
    : subsets_(std::move(subsets)), max_order_(max_order) {
  if (max_order < 2) throw std::invalid_argument("maximum order must be at least 2");
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> seen(static_cast<std::size_t>(max_order) + 1, kUnset);
  for (auto& subset : subsets_) {
    if (subset.empty()) throw std::invalid_argument("partition contains an empty subset");
    std::sort(subset.begin(), subset.end());
  }
  std::sort(subsets_.begin(), subsets_.end(),
            [](const OrderSet& a, const OrderSet& b) { return a.front() < b.front(); });
  for (std::size_t l = 0; l < subsets_.size(); ++l) {
    for (int s : subsets_[l]) {
      if (s < 2 || s > max_order)
        throw std::invalid_argument("order " + std::to_string(s) + " outside [2, " +
                                    std::to_string(max_order) + "]");
      if (seen[s] != kUnset)
        throw std::invalid_argument("order " + std::to_string(s) +
                                    " appears in more than one subset");
      seen[s] = l;
    }
  }
  for (int s = 2; s <= max_order; ++s)
    if (seen[s] == kUnset)
      throw std::invalid_argument("order " + std::to_string(s) + " is not covered by the partition");
  lookup_ = std::move(seen);
}

OrderPartition OrderPartition::trivial(int max_order) {
  return OrderPartition({order_range(max_order)}, max_order);
}

namespace {

int parse_order(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw std::invalid_argument("invalid order '" + std::string(token) + "' in partition");
  return v;
}

template <typename Fn>
void split_on(std::string_view text, char sep, Fn&& fn) {
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    fn(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return;
    start = pos + 1;
  }
}

}  // namespace

OrderPartition OrderPartition::parse(std::string_view text, int max_order) {
  std::vector<OrderSet> subsets;
  split_on(text, '|', [&](std::string_view part) {
    OrderSet subset;
    split_on(part, ',', [&](std::string_view token) {
      if (auto dash = token.find('-'); dash != std::string_view::npos) {
        int lo = parse_order(token.substr(0, dash));
        int hi = parse_order(token.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("empty order range in partition");
        for (int s = lo; s <= hi; ++s) subset.push_back(s);
      } else {
        subset.push_back(parse_order(token));
      }
    });
    subsets.push_back(std::move(subset));
  });
  for (const auto& subset : subsets) {
    auto sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
      throw std::invalid_argument("order " + std::to_string(*dup) + " repeated within a subset");
  }
  return OrderPartition(std::move(subsets), max_order);
}

std::string OrderPartition::to_string() const {
  std::string out;
  for (std::size_t l = 0; l < subsets_.size(); ++l) {
    if (l) out += '|';
    for (std::size_t i = 0; i < subsets_[l].size(); ++i) {
      if (i) out += ',';
      out += std::to_string(subsets_[l][i]);
    }
  }
  return out;
}

OrderSet order_range(int max_order) {
  OrderSet o;
  for (int s = 2; s <= max_order; ++s) o.push_back(s);
  return o;
}

std::vector<OrderPartition> enumerate_set_partitions(const OrderSet& orders, int max_order,
                                                     std::size_t limit) {
  if (orders.empty()) throw std::invalid_argument("cannot partition an empty order set");
  if (orders.size() > limit)
    throw std::invalid_argument("order set of size " + std::to_string(orders.size()) +
                                " exceeds the exhaustive limit " + std::to_string(limit) +
                                "; use greedy search");
  OrderSet sorted = orders;
  std::sort(sorted.begin(), sorted.end());

  // Restricted growth strings: block[i] <= 1 + max(block[0..i-1]). Visiting
  // them lexicographically yields partitions in canonical order.
  std::vector<OrderPartition> out;
  std::vector<std::size_t> block(sorted.size(), 0);
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t i, std::size_t used) {
    if (i == sorted.size()) {
      std::vector<OrderSet> subsets(used);
      for (std::size_t j = 0; j < sorted.size(); ++j) subsets[block[j]].push_back(sorted[j]);
      out.emplace_back(std::move(subsets), max_order);
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      block[i] = b;
      visit(i + 1, std::max(used, b + 1));
    }
  };
  visit(0, 0);
  return out;
}

std::vector<std::pair<OrderSet, OrderSet>> contiguous_binary_splits(const OrderSet& subset) {
  std::vector<std::pair<OrderSet, OrderSet>> splits;
  for (std::size_t cut = 1; cut < subset.size(); ++cut)
    splits.emplace_back(OrderSet(subset.begin(), subset.begin() + cut),
                        OrderSet(subset.begin() + cut, subset.end()));
  return splits;
}

std::size_t subset_edge_count(const OrderSet& subset, const OrderHistogram& hist) {
  std::size_t total = 0;
  for (int s : subset) total += hist[s];
  return total;
}

bool is_admissible(const OrderPartition& p, const OrderHistogram& hist, std::size_t k,
                   double c) {
  const double required = c * static_cast<double>(k * (k + 1)) / 2.0;
  return std::all_of(p.subsets().begin(), p.subsets().end(), [&](const OrderSet& subset) {
    return static_cast<double>(subset_edge_count(subset, hist)) >= required;
  });
}

}  // namespace hypermosbm
