#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypermosbm/search.hpp"
#include "hypermosbm/synthgen.hpp"

namespace hypermosbm {

struct BenchmarkConfig {
  std::vector<double> zetas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t instances = 20;
  SyntheticConfig synthetic;
  SearchConfig search;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  std::size_t ci_resamples = 10000;
  unsigned threads = 1;

  BenchmarkConfig();
};

struct BenchmarkRecord {
  double zeta = 0.0;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  OrderPartition selected;
  double delta_auc = 0.0;
  double cs_multi = 0.0;
  double cs_single = 0.0;
};

struct BenchmarkSummary {
  double zeta = 0.0;
  std::size_t instances = 0;
  double multi_order_fraction = 0.0;
  double mean_delta_auc = 0.0, delta_auc_low = 0.0, delta_auc_high = 0.0;
  double mean_cs_multi = 0.0, cs_multi_low = 0.0, cs_multi_high = 0.0;
  double mean_cs_single = 0.0, cs_single_low = 0.0, cs_single_high = 0.0;
};

/// Seed of instance i at zeta index z.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t zeta_index, std::size_t instance);

/// Generates one instance, searches its partition, fits single- and
/// multi-order models on the full hypergraph and scores recovery.
BenchmarkRecord run_instance(const BenchmarkConfig& cfg, double zeta, std::size_t instance,
                             std::uint64_t seed);

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg);
std::vector<BenchmarkSummary> summarize(const BenchmarkConfig& cfg,
                                        const std::vector<BenchmarkRecord>& records);

void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<BenchmarkSummary>& summary);

}  // namespace hypermosbm
