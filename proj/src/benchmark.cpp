#include "hypermosbm/benchmark.hpp"

#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "hypermosbm/evaluation.hpp"
#include "hypermosbm/parallel.hpp"

namespace hypermosbm {

BenchmarkConfig::BenchmarkConfig() {
  search.fit.num_communities = 2;
  search.fit.num_restarts = 5;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t zeta_index, std::size_t instance) {
  return derive_seed(seed, {stream::kInstance, zeta_index, instance});
}

BenchmarkRecord run_instance(const BenchmarkConfig& cfg, double zeta, std::size_t instance,
                             std::uint64_t seed) {
  SyntheticConfig synth = cfg.synthetic;
  synth.zeta = zeta;
  synth.seed = seed;
  const SyntheticInstance inst = generate(synth);

  SearchConfig search_cfg = cfg.search;
  search_cfg.seed = derive_seed(seed, {1});
  search_cfg.fit.seed = derive_seed(seed, {2});
  search_cfg.threads = 1;
  search_cfg.fit.threads = 1;
  const SearchResult found = search(inst.hypergraph, search_cfg);

  FitConfig full = search_cfg.fit;
  full.seed = derive_seed(seed, {3});
  const OrderPartition single = OrderPartition::trivial(inst.hypergraph.max_order());
  const FitResult single_fit = fit(inst.hypergraph, single, full);

  BenchmarkRecord rec;
  rec.zeta = zeta;
  rec.instance = instance;
  rec.seed = seed;
  rec.selected = found.final_partition;
  rec.delta_auc = found.delta_auc;
  rec.cs_single = cosine_similarity(inst.ground_truth, single_fit.params.memberships).value;
  if (found.final_partition == single) {
    rec.cs_multi = rec.cs_single;
  } else {
    const FitResult multi_fit = fit(inst.hypergraph, found.final_partition, full);
    rec.cs_multi = cosine_similarity(inst.ground_truth, multi_fit.params.memberships).value;
  }
  return rec;
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg) {
  const std::size_t tasks = cfg.zetas.size() * cfg.instances;
  std::vector<BenchmarkRecord> records(tasks);
  parallel_for(tasks, cfg.threads, [&](std::size_t t) {
    const std::size_t z = t / cfg.instances, i = t % cfg.instances;
    records[t] = run_instance(cfg, cfg.zetas[z], i, instance_seed(cfg.seed, z, i));
  });
  return records;
}

std::vector<BenchmarkSummary> summarize(const BenchmarkConfig& cfg,
                                        const std::vector<BenchmarkRecord>& records) {
  std::vector<BenchmarkSummary> out;
  for (std::size_t z = 0; z < cfg.zetas.size(); ++z) {
    std::vector<double> delta, multi, single;
    std::size_t multi_order = 0;
    for (const auto& r : records) {
      if (r.zeta != cfg.zetas[z]) continue;
      delta.push_back(r.delta_auc);
      multi.push_back(r.cs_multi);
      single.push_back(r.cs_single);
      if (!r.selected.is_trivial()) ++multi_order;
    }
    if (delta.empty()) continue;
    BenchmarkSummary s;
    s.zeta = cfg.zetas[z];
    s.instances = delta.size();
    s.multi_order_fraction = static_cast<double>(multi_order) / static_cast<double>(delta.size());
    auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    s.mean_delta_auc = mean(delta);
    s.mean_cs_multi = mean(multi);
    s.mean_cs_single = mean(single);
    if (delta.size() >= 2) {
      const std::uint64_t base = derive_seed(cfg.seed, {stream::kBootstrap, z});
      std::tie(s.delta_auc_low, s.delta_auc_high) =
          bootstrap_mean_ci(delta, cfg.ci_level, cfg.ci_resamples, derive_seed(base, {0}));
      std::tie(s.cs_multi_low, s.cs_multi_high) =
          bootstrap_mean_ci(multi, cfg.ci_level, cfg.ci_resamples, derive_seed(base, {1}));
      std::tie(s.cs_single_low, s.cs_single_high) =
          bootstrap_mean_ci(single, cfg.ci_level, cfg.ci_resamples, derive_seed(base, {2}));
    } else {
      s.delta_auc_low = s.delta_auc_high = s.mean_delta_auc;
      s.cs_multi_low = s.cs_multi_high = s.mean_cs_multi;
      s.cs_single_low = s.cs_single_high = s.mean_cs_single;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << "zeta,instance,seed,selected_partition,delta_auc,cs_multi,cs_single\n";
  for (const auto& r : records) {
    out << fmt_double(r.zeta) << ',' << r.instance << ',' << r.seed << ",\""
        << r.selected.to_string() << "\"," << fmt_double(r.delta_auc) << ','
        << fmt_double(r.cs_multi) << ',' << fmt_double(r.cs_single) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<BenchmarkSummary>& summary) {
  out << "zeta,instances,multi_order_fraction,mean_delta_auc,delta_auc_low,delta_auc_high,"
         "mean_cs_multi,cs_multi_low,cs_multi_high,mean_cs_single,cs_single_low,"
         "cs_single_high\n";
  for (const auto& s : summary) {
    out << fmt_double(s.zeta) << ',' << s.instances << ',' << fmt_double(s.multi_order_fraction)
        << ',' << fmt_double(s.mean_delta_auc) << ',' << fmt_double(s.delta_auc_low) << ','
        << fmt_double(s.delta_auc_high) << ',' << fmt_double(s.mean_cs_multi) << ','
        << fmt_double(s.cs_multi_low) << ',' << fmt_double(s.cs_multi_high) << ','
        << fmt_double(s.mean_cs_single) << ',' << fmt_double(s.cs_single_low) << ','
        << fmt_double(s.cs_single_high) << '\n';
  }
}

}  // namespace hypermosbm
