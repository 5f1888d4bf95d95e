#pragma once

#include <json.hpp>

#include "hypermosbm/model.hpp"
#include "hypermosbm/partition.hpp"
#include "hypermosbm/search.hpp"

namespace hypermosbm {

using Json = nlohmann::ordered_json;

Json partition_to_json(const OrderPartition& p);
OrderPartition partition_from_json(const Json& j, int max_order);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json fit_config_to_json(const FitConfig& cfg);

/// FitResult document: dimensions, partition, U (row-major rows), W list,
/// log-likelihoods, seed and the resolved config echo.
Json fit_result_to_json(const FitResult& result, const OrderPartition& partition,
                        std::size_t num_nodes, int max_order, const FitConfig& cfg,
                        const Json& config_echo);

struct StoredFit {
  ModelParams params;
  OrderPartition partition;
  std::size_t num_nodes = 0;
  int max_order = 0;
  double rate_floor = 1e-12;
};

/// Throws std::runtime_error on a malformed document.
StoredFit fit_result_from_json(const Json& j);

Json partition_score_to_json(const PartitionScore& s);
Json search_result_to_json(const SearchResult& result, const Json& config_echo);

}  // namespace hypermosbm
