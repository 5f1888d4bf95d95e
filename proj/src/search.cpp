#include "hypermosbm/search.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hypermosbm/parallel.hpp"

namespace hypermosbm {

void SearchConfig::validate() const {
  if (num_folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (auc_pairs < 1) throw std::invalid_argument("need at least one AUC pair");
  if (!(min_edges_factor >= 1.0)) throw std::invalid_argument("min_edges_factor must be >= 1");
  if (!(greedy_gain_threshold > 0.0))
    throw std::invalid_argument("greedy gain threshold must be positive");
  if (exhaustive_limit < 1) throw std::invalid_argument("exhaustive limit must be >= 1");
  fit.validate();
}

std::string to_string(SearchMode mode) {
  return mode == SearchMode::kExhaustive ? "exhaustive" : "greedy";
}

CrossValidationPlan make_cv_plan(const Hypergraph& h, const SearchConfig& cfg) {
  cfg.validate();
  CrossValidationPlan plan;
  plan.folds = split_folds(h, cfg.num_folds, derive_seed(cfg.seed, {stream::kFolds}));
  const NegativeSampler sampler(h);
  for (std::size_t f = 0; f < cfg.num_folds; ++f) {
    auto split = train_view(h, plan.folds, f);
    Rng rng(derive_seed(cfg.seed, {stream::kAucPairs, f}));
    plan.pairs.push_back(sample_auc_pairs(split.test_edges, sampler, cfg.auc_pairs, rng));
    plan.train.push_back(std::move(split.train));
  }
  return plan;
}

namespace {

double fold_auc(const CrossValidationPlan& plan, const OrderPartition& p,
                const SearchConfig& cfg, std::size_t fold) {
  FitConfig fit_cfg = cfg.fit;
  fit_cfg.seed = derive_seed(cfg.fit.seed, {stream::kFit, fold});
  fit_cfg.record_elbo = false;
  const Hypergraph& train = plan.train[fold];
  const FitResult fitted = fit(train, p, fit_cfg);
  const HyperedgeScorer scorer(fitted.params, p, train.num_nodes(), cfg.fit.rate_floor);
  return auc_from_pairs(plan.pairs[fold], [&](std::span<const NodeId> e) { return scorer(e); });
}

PartitionScore assemble(const OrderPartition& p, std::vector<double> aucs) {
  PartitionScore score{p, std::move(aucs), 0.0};
  score.mean_auc = std::accumulate(score.fold_aucs.begin(), score.fold_aucs.end(), 0.0) /
                   static_cast<double>(score.fold_aucs.size());
  return score;
}

// Evaluates several partitions, parallel over (partition, fold) tasks.
std::vector<PartitionScore> evaluate_all(const CrossValidationPlan& plan,
                                         const std::vector<OrderPartition>& partitions,
                                         const SearchConfig& cfg) {
  const std::size_t folds = plan.train.size();
  std::vector<std::vector<double>> aucs(partitions.size(), std::vector<double>(folds));
  parallel_for(partitions.size() * folds, cfg.threads, [&](std::size_t task) {
    const std::size_t p = task / folds, f = task % folds;
    aucs[p][f] = fold_auc(plan, partitions[p], cfg, f);
  });
  std::vector<PartitionScore> out;
  out.reserve(partitions.size());
  for (std::size_t p = 0; p < partitions.size(); ++p)
    out.push_back(assemble(partitions[p], std::move(aucs[p])));
  return out;
}

// Higher AUC first, then fewer subsets, then canonical (string) order.
bool ranks_before(const PartitionScore& a, const PartitionScore& b,
                  const std::map<std::string, std::size_t>& canonical_rank) {
  if (a.mean_auc != b.mean_auc) return a.mean_auc > b.mean_auc;
  if (a.partition.size() != b.partition.size()) return a.partition.size() < b.partition.size();
  return canonical_rank.at(a.partition.to_string()) < canonical_rank.at(b.partition.to_string());
}

}  // namespace

PartitionScore evaluate_partition(const CrossValidationPlan& plan, const OrderPartition& p,
                                  const SearchConfig& cfg) {
  return evaluate_all(plan, {p}, cfg).front();
}

PartitionScore evaluate_partition(const Hypergraph& h, const OrderPartition& p,
                                  const SearchConfig& cfg) {
  return evaluate_partition(make_cv_plan(h, cfg), p, cfg);
}

std::vector<PartitionScore> SearchResult::ranked() const {
  std::map<std::string, std::size_t> canonical_rank;
  for (std::size_t i = 0; i < evaluated.size(); ++i)
    canonical_rank.emplace(evaluated[i].partition.to_string(), i);
  auto out = evaluated;
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return ranks_before(a, b, canonical_rank);
  });
  return out;
}

SearchResult search(const Hypergraph& h, const SearchConfig& cfg) {
  cfg.validate();
  const int max_order = h.max_order();
  const OrderSet orders = order_range(max_order);
  const OrderHistogram hist = order_histogram(h);
  const std::size_t k = cfg.fit.num_communities;
  const OrderPartition baseline = OrderPartition::trivial(max_order);
  if (!is_admissible(baseline, hist, k, cfg.min_edges_factor))
    throw std::runtime_error(
        "no admissible partition: " + std::to_string(h.num_edges()) + " hyperedges < " +
        std::to_string(cfg.min_edges_factor) + " * K(K+1)/2 with K = " + std::to_string(k));

  const CrossValidationPlan plan = make_cv_plan(h, cfg);
  SearchResult result;

  if (orders.size() <= cfg.exhaustive_limit) {
    result.mode = SearchMode::kExhaustive;
    std::vector<OrderPartition> candidates;
    for (auto& p : enumerate_set_partitions(orders, max_order, cfg.exhaustive_limit)) {
      if (is_admissible(p, hist, k, cfg.min_edges_factor))
        candidates.push_back(std::move(p));
      else
        ++result.inadmissible_skipped;
    }
    // The trivial partition is first in canonical order and always admissible
    // here, so the baseline is among the candidates.
    result.evaluated = evaluate_all(plan, candidates, cfg);
    const auto ranked = result.ranked();
    const PartitionScore& best = ranked.front();
    result.final_partition = best.partition;
    result.final_auc = best.mean_auc;
    result.final_fold_aucs = best.fold_aucs;
    result.baseline_auc = result.evaluated.front().mean_auc;
    result.baseline_fold_aucs = result.evaluated.front().fold_aucs;
    SearchStep step;
    step.current = baseline;
    step.current_auc = result.baseline_auc;
    step.best_candidate = best.partition;
    step.best_candidate_auc = best.mean_auc;
    step.accepted = !(best.partition == baseline);
    result.trace.push_back(std::move(step));
  } else {
    result.mode = SearchMode::kGreedy;
    PartitionScore current = evaluate_all(plan, {baseline}, cfg).front();
    result.evaluated.push_back(current);
    result.baseline_auc = current.mean_auc;
    result.baseline_fold_aucs = current.fold_aucs;
    for (std::size_t step_no = 1;; ++step_no) {
      SearchStep step;
      step.step = step_no;
      step.current = current.partition;
      step.current_auc = current.mean_auc;

      std::vector<OrderPartition> candidates;
      const auto& subsets = current.partition.subsets();
      for (std::size_t l = 0; l < subsets.size(); ++l) {
        for (auto& [left, right] : contiguous_binary_splits(subsets[l])) {
          std::vector<OrderSet> next;
          for (std::size_t m = 0; m < subsets.size(); ++m)
            if (m != l) next.push_back(subsets[m]);
          next.push_back(left);
          next.push_back(right);
          OrderPartition p(std::move(next), max_order);
          if (is_admissible(p, hist, k, cfg.min_edges_factor))
            candidates.push_back(std::move(p));
          else
            ++result.inadmissible_skipped;
        }
      }
      if (candidates.empty()) {
        result.trace.push_back(std::move(step));
        break;
      }
      auto scores = evaluate_all(plan, candidates, cfg);
      std::size_t best = 0;
      for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c].mean_auc > scores[best].mean_auc) best = c;
      step.best_candidate = scores[best].partition;
      step.best_candidate_auc = scores[best].mean_auc;
      step.accepted = scores[best].mean_auc - current.mean_auc > cfg.greedy_gain_threshold;
      const PartitionScore chosen = scores[best];
      for (auto& s : scores) result.evaluated.push_back(std::move(s));
      const bool accepted = step.accepted;
      result.trace.push_back(std::move(step));
      if (!accepted) break;
      current = chosen;
    }
    result.final_partition = current.partition;
    result.final_auc = current.mean_auc;
    result.final_fold_aucs = current.fold_aucs;
  }
  result.delta_auc = result.final_auc - result.baseline_auc;
  return result;
}

}  // namespace hypermosbm
