#include "hypermosbm/serialize.hpp"

#include <stdexcept>

namespace hypermosbm {

Json partition_to_json(const OrderPartition& p) {
  Json out = Json::array();
  for (const auto& subset : p.subsets()) out.push_back(subset);
  return out;
}

OrderPartition partition_from_json(const Json& j, int max_order) {
  return OrderPartition(j.get<std::vector<OrderSet>>(), max_order);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::runtime_error("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto values = j.at(r).get<std::vector<double>>();
    if (values.size() != cols) throw std::runtime_error("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = values[c];
  }
  return m;
}

Json fit_config_to_json(const FitConfig& cfg) {
  Json j;
  j["num_communities"] = cfg.num_communities;
  j["num_iterations"] = cfg.num_iterations;
  j["num_restarts"] = cfg.num_restarts;
  j["seed"] = cfg.seed;
  j["rate_floor"] = cfg.rate_floor;
  j["init_scale"] = cfg.init_scale;
  j["convergence_tolerance"] =
      cfg.convergence_tolerance ? Json(*cfg.convergence_tolerance) : Json(nullptr);
  return j;
}

Json fit_result_to_json(const FitResult& result, const OrderPartition& partition,
                        std::size_t num_nodes, int max_order, const FitConfig& cfg,
                        const Json& config_echo) {
  Json j;
  j["N"] = num_nodes;
  j["K"] = result.params.num_communities();
  j["D"] = max_order;
  j["partition"] = partition_to_json(partition);
  j["memberships"] = matrix_to_json(result.params.memberships);
  Json affinities = Json::array();
  for (const auto& w : result.params.affinities) affinities.push_back(matrix_to_json(w));
  j["affinities"] = std::move(affinities);
  j["log_likelihood"] = result.log_likelihood;
  j["per_restart_loglik"] = result.per_restart_loglik;
  j["best_restart"] = result.best_restart;
  j["seed"] = cfg.seed;
  j["fit"] = fit_config_to_json(cfg);
  if (!result.elbo_trace.empty()) j["elbo_trace"] = result.elbo_trace;
  j["config"] = config_echo;
  return j;
}

StoredFit fit_result_from_json(const Json& j) {
  try {
    StoredFit out;
    out.num_nodes = j.at("N").get<std::size_t>();
    out.max_order = j.at("D").get<int>();
    out.partition = partition_from_json(j.at("partition"), out.max_order);
    out.params.memberships = matrix_from_json(j.at("memberships"));
    for (const auto& w : j.at("affinities")) out.params.affinities.push_back(matrix_from_json(w));
    if (j.contains("fit")) out.rate_floor = j.at("fit").value("rate_floor", 1e-12);
    const std::size_t k = j.at("K").get<std::size_t>();
    if (out.params.memberships.rows() != out.num_nodes || out.params.memberships.cols() != k)
      throw std::runtime_error("membership matrix does not match N x K");
    if (out.params.affinities.size() != out.partition.size())
      throw std::runtime_error("affinity count does not match the partition");
    for (const auto& w : out.params.affinities)
      if (w.rows() != k || w.cols() != k) throw std::runtime_error("affinity matrix is not K x K");
    return out;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed fit result: ") + e.what());
  }
}

Json partition_score_to_json(const PartitionScore& s) {
  Json j;
  j["partition"] = s.partition.to_string();
  j["subsets"] = partition_to_json(s.partition);
  j["mean_auc"] = s.mean_auc;
  j["fold_aucs"] = s.fold_aucs;
  return j;
}

Json search_result_to_json(const SearchResult& result, const Json& config_echo) {
  Json j;
  j["mode"] = to_string(result.mode);
  j["final_partition"] = result.final_partition.to_string();
  j["final_subsets"] = partition_to_json(result.final_partition);
  j["final_auc"] = result.final_auc;
  j["baseline_auc"] = result.baseline_auc;
  j["delta_auc"] = result.delta_auc;
  j["delta_auc_heuristic"] = kDeltaAucHeuristic;
  j["multi_order_warranted"] = result.delta_auc >= kDeltaAucHeuristic;
  j["final_fold_aucs"] = result.final_fold_aucs;
  j["baseline_fold_aucs"] = result.baseline_fold_aucs;
  if (result.final_fold_aucs.size() >= 2 && !result.final_partition.is_trivial()) {
    const auto t = paired_t_test_one_sided(result.final_fold_aucs, result.baseline_fold_aucs);
    j["paired_t_test"] = {{"t", t.t_statistic},
                          {"p_value", t.p_value},
                          {"p_below_representable", t.p_below_representable}};
  }
  j["inadmissible_skipped"] = result.inadmissible_skipped;
  Json ranked = Json::array();
  for (const auto& s : result.ranked()) ranked.push_back(partition_score_to_json(s));
  j["ranked"] = std::move(ranked);
  Json trace = Json::array();
  for (const auto& step : result.trace) {
    Json t;
    t["step"] = step.step;
    t["current"] = step.current.to_string();
    t["current_auc"] = step.current_auc;
    t["best_candidate"] = step.best_candidate ? Json(step.best_candidate->to_string()) : Json(nullptr);
    t["best_candidate_auc"] = step.best_candidate_auc;
    t["accepted"] = step.accepted;
    trace.push_back(std::move(t));
  }
  j["trace"] = std::move(trace);
  j["config"] = config_echo;
  return j;
}

}  // namespace hypermosbm
