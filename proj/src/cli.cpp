#include "hypermosbm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "hypermosbm/benchmark.hpp"
#include "hypermosbm/evaluation.hpp"
#include "hypermosbm/model.hpp"
#include "hypermosbm/partition.hpp"
#include "hypermosbm/search.hpp"
#include "hypermosbm/serialize.hpp"
#include "hypermosbm/synthgen.hpp"

namespace hypermosbm::cli {
namespace {

enum class Kind { kUInt, kDouble, kOptDouble, kBool, kString, kDoubleList };

struct OptionDef {
  std::string key;
  Kind kind;
  Json fallback;
  std::string help;
  // Output locations are left out of the echo so a rerun may write elsewhere.
  bool echo = true;
};

std::string flag_name(const std::string& key) {
  std::string out = "--" + key;
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + text + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  return v;
}

Json value_from_text(const OptionDef& s, const std::string& text) {
  switch (s.kind) {
    case Kind::kUInt:
      return parse_uint(s.key, text);
    case Kind::kDouble:
      return parse_double(s.key, text);
    case Kind::kOptDouble:
      if (text == "none" || text.empty()) return nullptr;
      return parse_double(s.key, text);
    case Kind::kBool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw ConfigError("'" + s.key + "' expects true or false");
    case Kind::kString:
      return text;
    case Kind::kDoubleList: {
      Json list = Json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) list.push_back(parse_double(s.key, item));
      if (list.empty()) throw ConfigError("'" + s.key + "' expects a comma-separated list");
      return list;
    }
  }
  return nullptr;
}

Json value_from_json(const OptionDef& s, const Json& v) {
  auto bad = [&](const char* want) {
    return ConfigError("config key '" + s.key + "' expects " + want + ", got " + v.dump());
  };
  switch (s.kind) {
    case Kind::kUInt:
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
      throw bad("a non-negative integer");
    case Kind::kOptDouble:
      if (v.is_null()) return nullptr;
      [[fallthrough]];
    case Kind::kDouble:
      if (v.is_number()) return v.get<double>();
      throw bad("a number");
    case Kind::kBool:
      if (v.is_boolean()) return v;
      throw bad("a boolean");
    case Kind::kString:
      if (v.is_string()) return v;
      throw bad("a string");
    case Kind::kDoubleList: {
      if (!v.is_array() || v.empty()) throw bad("a non-empty array of numbers");
      Json list = Json::array();
      for (const auto& x : v) {
        if (!x.is_number()) throw bad("a non-empty array of numbers");
        list.push_back(x.get<double>());
      }
      return list;
    }
  }
  return nullptr;
}

// Resolved configuration: defaults, then the --config document, then flags.
struct Resolved {
  Json values = Json::object();
  Json echo = Json::object();

  std::uint64_t u64(const std::string& k) const { return values.at(k).get<std::uint64_t>(); }
  std::size_t size(const std::string& k) const { return static_cast<std::size_t>(u64(k)); }
  unsigned uint(const std::string& k) const { return static_cast<unsigned>(u64(k)); }
  double dbl(const std::string& k) const { return values.at(k).get<double>(); }
  bool flag(const std::string& k) const { return values.at(k).get<bool>(); }
  std::string str(const std::string& k) const { return values.at(k).get<std::string>(); }
  std::optional<double> opt(const std::string& k) const {
    const auto& v = values.at(k);
    return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
  }
  std::string required(const std::string& k) const {
    std::string v = str(k);
    if (v.empty()) throw ConfigError("missing required option " + flag_name(k));
    return v;
  }
};

using Body = std::function<void(const Resolved&, std::ostream&, std::ostream&)>;

struct Command {
  std::string name;
  std::string description;
  std::vector<OptionDef> defs;
  Body body;

  Command(std::string n, std::string d, std::vector<OptionDef> s, Body b)
      : name(std::move(n)), description(std::move(d)), defs(std::move(s)), body(std::move(b)) {}

  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& parent) {
    app = parent.add_subcommand(name, description);
    app->add_option("--config", config_path, "JSON key-value document with option values");
    for (const auto& s : defs) {
      const std::string f = flag_name(s.key);
      if (s.kind == Kind::kBool) {
        options[s.key] = app->add_flag(f, flags[s.key], s.help);
      } else {
        std::string help = s.help;
        const bool shown =
            !s.fallback.is_null() && !(s.fallback.is_string() && s.fallback.empty());
        if (shown)
          help += " [" +
                  (s.fallback.is_string() ? s.fallback.get<std::string>() : s.fallback.dump()) +
                  "]";
        options[s.key] = app->add_option(f, text[s.key], help);
      }
    }
  }

  Resolved resolve() const {
    Resolved r;
    for (const auto& s : defs) r.values[s.key] = s.fallback;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::exception& e) {
        throw ConfigError("config file '" + config_path + "' is not valid JSON: " + e.what());
      }
      if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
      for (const auto& [key, value] : doc.items()) {
        auto it = std::find_if(defs.begin(), defs.end(),
                               [&](const OptionDef& s) { return s.key == key; });
        if (it == defs.end())
          throw ConfigError("unknown config key '" + key + "' for command '" + name + "'");
        r.values[key] = value_from_json(*it, value);
      }
    }
    for (const auto& s : defs) {
      if (options.at(s.key)->count() == 0) continue;
      r.values[s.key] =
          s.kind == Kind::kBool ? Json(flags.at(s.key)) : value_from_text(s, text.at(s.key));
    }
    for (const auto& s : defs)
      if (s.echo) r.echo[s.key] = r.values[s.key];
    return r;
  }
};

// Turns std::invalid_argument raised while checking user input into a
// config error.
template <class F>
auto checked(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void write_json(const std::string& path, const Json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<std::string> read_mapping(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return parse_node_mapping(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::vector<std::string> read_labels(const std::string& path, const Hypergraph& h) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return parse_node_labels(in, h);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

Hypergraph load_graph(const Resolved& r, const std::string& edges_key) {
  const auto names = read_mapping(r.str("mapping"));
  Hypergraph h = read_hyperedge_list(r.required(edges_key), names);
  if (!r.str("labels").empty()) h.set_labels(read_labels(r.str("labels"), h));
  return h;
}

// ---------------------------------------------------------------------------
// Option groups

std::vector<OptionDef> fit_options(std::size_t restarts) {
  return {
      {"communities", Kind::kUInt, 2, "number of communities K; 0 takes K from the label file"},
      {"iterations", Kind::kUInt, 500, "EM iterations per restart"},
      {"restarts", Kind::kUInt, restarts, "random restarts"},
      {"rate_floor", Kind::kDouble, 1e-12, "lower bound on edge rates inside the logarithm"},
      {"init_scale", Kind::kDouble, 1.0, "upper end of the uniform initialization"},
      {"tolerance", Kind::kOptDouble, nullptr, "stop a restart once the gain drops below this"},
  };
}

std::vector<OptionDef> search_options() {
  return {
      {"folds", Kind::kUInt, 10, "cross-validation folds"},
      {"auc_pairs", Kind::kUInt, 10000, "positive/negative pairs per fold"},
      {"min_edges_factor", Kind::kDouble, 5.0, "admissibility factor c in c*K(K+1)/2"},
      {"gain_threshold", Kind::kDouble, 1e-3, "minimum AUC gain to accept a greedy split"},
      {"exhaustive_limit", Kind::kUInt, 4, "largest |O| searched exhaustively"},
  };
}

std::vector<OptionDef> synthetic_options() {
  return {
      {"nodes", Kind::kUInt, 100, "number of nodes (even)"},
      {"degree", Kind::kDouble, 20.0, "target mean node degree"},
      {"assortative", Kind::kDouble, 5.0, "within-community affinity a"},
      {"baseline", Kind::kDouble, 1.0, "across-community affinity b"},
  };
}

std::vector<OptionDef> graph_options(const std::string& edges_key) {
  return {
      {edges_key, Kind::kString, "", "hyperedge list"},
      {"mapping", Kind::kString, "", "node mapping file (index,name) fixing node indices"},
      {"labels", Kind::kString, "", "node label file (node,label)"},
  };
}

template <class... Groups>
std::vector<OptionDef> concat(Groups... groups) {
  std::vector<OptionDef> out;
  (out.insert(out.end(), groups.begin(), groups.end()), ...);
  return out;
}

FitConfig make_fit_config(const Resolved& r, const Hypergraph& h, const std::string& seed_key) {
  FitConfig f;
  f.num_communities = r.size("communities");
  if (f.num_communities == 0) {
    if (h.labels().empty())
      throw ConfigError("--communities 0 requires a label file to take K from");
    f.num_communities = h.num_label_categories();
  }
  f.num_iterations = r.size("iterations");
  f.num_restarts = r.size("restarts");
  f.seed = r.u64(seed_key);
  f.rate_floor = r.dbl("rate_floor");
  f.init_scale = r.dbl("init_scale");
  f.convergence_tolerance = r.opt("tolerance");
  f.threads = r.uint("threads");
  checked([&] { f.validate(); });
  return f;
}

SearchConfig make_search_config(const Resolved& r, const Hypergraph& h) {
  SearchConfig s;
  s.num_folds = r.size("folds");
  s.auc_pairs = r.size("auc_pairs");
  s.min_edges_factor = r.dbl("min_edges_factor");
  s.greedy_gain_threshold = r.dbl("gain_threshold");
  s.exhaustive_limit = r.size("exhaustive_limit");
  s.seed = r.u64("seed");
  s.threads = r.uint("threads");
  s.fit = make_fit_config(r, h, "fit_seed");
  s.fit.threads = 1;
  checked([&] { s.validate(); });
  return s;
}

OrderPartition make_partition(const Resolved& r, int max_order) {
  const std::string text = r.str("partition");
  if (text.empty()) return OrderPartition::trivial(max_order);
  return checked([&] { return OrderPartition::parse(text, max_order); });
}

// ---------------------------------------------------------------------------
// generate

void cmd_generate(const Resolved& r, std::ostream& out, std::ostream& err) {
  SyntheticConfig base;
  base.num_nodes = r.size("nodes");
  base.target_degree = r.dbl("degree");
  base.assortative = r.dbl("assortative");
  base.baseline = r.dbl("baseline");
  base.zeta = r.dbl("zeta");
  checked([&] { base.validate(); });
  const std::size_t instances = r.size("instances");
  if (instances == 0) throw ConfigError("--instances must be at least 1");

  const std::filesystem::path dir(r.str("output_dir"));
  const std::string config_line = "config " + r.echo.dump();
  const int width = std::max<int>(3, static_cast<int>(std::to_string(instances - 1).size()));
  for (std::size_t i = 0; i < instances; ++i) {
    SyntheticConfig cfg = base;
    cfg.seed = derive_seed(r.u64("seed"), {stream::kInstance, i});
    const SyntheticInstance inst = generate(cfg);

    std::ostringstream stem;
    stem << r.str("prefix") << '_' << std::setw(width) << std::setfill('0') << i;
    const auto path = [&](const char* ext) { return (dir / (stem.str() + ext)).string(); };

    std::ostringstream tau;
    tau << std::setprecision(17) << inst.tau;
    const std::vector<std::string> comments{
        config_line, "instance " + std::to_string(i) + " seed " + std::to_string(cfg.seed),
        "tau " + tau.str()};
    {
      auto f = open_output(path(".edges"));
      write_hyperedge_list(f, inst.hypergraph, comments);
    }
    {
      auto f = open_output(path(".truth"));
      f << "# node,community\n";
      for (std::size_t v = 0; v < inst.ground_truth.rows(); ++v)
        f << v << ',' << (inst.ground_truth(v, 0) > 0.0 ? 0 : 1) << '\n';
    }
    {
      auto f = open_output(path(".map"));
      write_node_mapping(f, inst.hypergraph);
    }

    const auto hist = order_histogram(inst.hypergraph);
    out << stem.str() << ": tau=" << inst.tau << " edges=" << inst.hypergraph.num_edges();
    for (int s : kSyntheticOrders) out << " m" << s << '=' << hist[s];
    out << '\n';
    if (inst.probabilities.clipped)
      err << "warning: " << stem.str()
          << ": an edge probability exceeded 1 and was clipped; the realized degree will fall "
             "below the target\n";
  }
}

// ---------------------------------------------------------------------------
// fit

void cmd_fit(const Resolved& r, std::ostream& out, std::ostream&) {
  const Hypergraph h = load_graph(r, "edges");
  const OrderPartition partition = make_partition(r, h.max_order());
  FitConfig cfg = make_fit_config(r, h, "seed");
  cfg.record_elbo = r.flag("record_elbo");

  const FitResult result = fit(h, partition, cfg);
  Json doc;
  doc["command"] = "fit";
  doc.update(fit_result_to_json(result, partition, h.num_nodes(), h.max_order(), cfg, r.echo));
  if (!h.node_names().empty()) doc["node_names"] = h.node_names();
  write_json(r.str("output"), doc);

  out << "partition " << partition.to_string() << " (L=" << partition.size() << ")\n";
  out << "K=" << cfg.num_communities << " N=" << h.num_nodes() << " edges=" << h.num_edges()
      << '\n';
  out << "log-likelihood " << std::setprecision(12) << result.log_likelihood << " (restart "
      << result.best_restart << " of " << cfg.num_restarts << ")\n";
}

// ---------------------------------------------------------------------------
// search

void cmd_search(const Resolved& r, std::ostream& out, std::ostream&) {
  const Hypergraph h = load_graph(r, "edges");
  const SearchConfig cfg = make_search_config(r, h);
  const SearchResult result = search(h, cfg);

  Json doc;
  doc["command"] = "search";
  doc.update(search_result_to_json(result, r.echo));
  write_json(r.str("output"), doc);

  if (!r.str("auc_csv").empty()) {
    std::string dataset = r.str("dataset");
    if (dataset.empty()) dataset = std::filesystem::path(r.str("edges")).stem().string();
    auto f = open_output(r.str("auc_csv"));
    f << "dataset,partition,fold,auc,seed\n" << std::setprecision(17);
    for (const auto& score : result.evaluated)
      for (std::size_t fold = 0; fold < score.fold_aucs.size(); ++fold)
        f << dataset << ",\"" << score.partition.to_string() << "\"," << fold << ','
          << score.fold_aucs[fold] << ',' << derive_seed(cfg.fit.seed, {stream::kFit, fold})
          << '\n';
  }

  out << "mode " << to_string(result.mode) << " (" << result.evaluated.size()
      << " partitions evaluated, " << result.inadmissible_skipped << " inadmissible skipped)\n";
  for (const auto& s : result.ranked())
    out << "  " << fixed(s.mean_auc) << "  " << s.partition.to_string() << '\n';
  out << "final partition " << result.final_partition.to_string()
      << " (L=" << result.final_partition.size() << ") auc " << fixed(result.final_auc) << '\n';
  out << "delta_auc " << fixed(result.delta_auc) << ' '
      << (result.delta_auc >= kDeltaAucHeuristic ? ">=" : "<") << ' ' << kDeltaAucHeuristic
      << ": "
      << (result.delta_auc >= kDeltaAucHeuristic ? "multi-order model warranted"
                                                 : "single-order model suffices")
      << '\n';
}

// ---------------------------------------------------------------------------
// evaluate

Matrix one_hot(const std::vector<std::string>& truth, std::vector<std::string>& classes) {
  classes.clear();
  for (const auto& t : truth)
    if (!t.empty()) classes.push_back(t);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  Matrix m(truth.size(), classes.size());
  for (std::size_t v = 0; v < truth.size(); ++v) {
    if (truth[v].empty()) continue;
    const auto c = std::lower_bound(classes.begin(), classes.end(), truth[v]) - classes.begin();
    m(v, static_cast<std::size_t>(c)) = 1.0;
  }
  return m;
}

void cmd_evaluate(const Resolved& r, std::ostream& out, std::ostream&) {
  const Hypergraph train = load_graph(r, "train");

  ModelParams params;
  OrderPartition partition;
  double floor = r.dbl("rate_floor");
  if (!r.str("model").empty()) {
    const StoredFit stored = fit_result_from_json(read_json(r.str("model")));
    if (stored.num_nodes != train.num_nodes())
      throw std::runtime_error("model has " + std::to_string(stored.num_nodes) +
                               " nodes but the training data has " +
                               std::to_string(train.num_nodes()));
    params = stored.params;
    partition = stored.partition;
    floor = stored.rate_floor;
  } else {
    partition = make_partition(r, train.max_order());
    const FitConfig cfg = make_fit_config(r, train, "fit_seed");
    params = fit(train, partition, cfg).params;
  }

  Json report;
  report["command"] = "evaluate";
  report["partition"] = partition.to_string();

  if (!r.str("test").empty()) {
    const Hypergraph test = read_hyperedge_list(r.str("test"), train.node_names().empty()
                                                                   ? std::vector<std::string>{}
                                                                   : train.node_names());
    if (test.num_nodes() != train.num_nodes())
      throw std::runtime_error("test edges reference nodes absent from the training data");
    if (test.max_order() > partition.max_order())
      throw std::runtime_error("test edges exceed the model's maximum order");
    std::vector<Hyperedge> all(train.edges().begin(), train.edges().end());
    all.insert(all.end(), test.edges().begin(), test.edges().end());
    const Hypergraph full(train.num_nodes(), partition.max_order(), std::move(all),
                          train.node_names());
    const HyperedgeScorer scorer(params, partition, train.num_nodes(), floor);
    const AucEstimate auc =
        estimate_auc(test.edges(), full, std::cref(scorer), r.size("auc_pairs"), r.u64("seed"));
    report["auc"] = {{"value", auc.value},
                     {"num_pairs", auc.num_pairs},
                     {"seed", auc.seed},
                     {"test_edges", test.num_edges()}};
    out << "auc " << fixed(auc.value) << " (" << auc.num_pairs << " pairs, "
        << test.num_edges() << " test edges)\n";
  }

  if (!r.str("truth").empty()) {
    std::vector<std::string> classes;
    const Matrix truth = one_hot(read_labels(r.str("truth"), train), classes);
    if (truth.cols() != params.num_communities())
      throw std::runtime_error("ground truth has " + std::to_string(truth.cols()) +
                               " communities but the model has " +
                               std::to_string(params.num_communities()));
    const CosineSimilarity cs = cosine_similarity(truth, params.memberships);
    report["cosine_similarity"] = {{"value", cs.value},
                                   {"rows_used", cs.rows_used},
                                   {"excluded_rows", cs.excluded_rows.size()},
                                   {"permutation", cs.permutation}};
    out << "cosine similarity " << fixed(cs.value) << " over " << cs.rows_used << " nodes\n";
  }

  const MembershipSummary ms = membership_summary(params.memberships, train.labels());
  double entropy = 0.0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < ms.entropy.size(); ++i)
    if (!ms.zero_row[i]) entropy += ms.entropy[i], ++nonzero;
  Json summary;
  summary["mean_entropy"] = nonzero ? entropy / static_cast<double>(nonzero) : 0.0;
  summary["zero_rows"] = ms.entropy.size() - nonzero;
  Json classes = Json::array();
  for (std::size_t c = 0; c < ms.classes.size(); ++c) {
    auto row = ms.class_average.row(c);
    classes.push_back({{"label", ms.classes[c]},
                       {"size", ms.class_size[c]},
                       {"average", std::vector<double>(row.begin(), row.end())}});
  }
  summary["classes"] = std::move(classes);
  summary["unlabeled"] = ms.unlabeled;
  report["membership_summary"] = std::move(summary);
  report["config"] = r.echo;
  write_json(r.str("output"), report);

  out << "mean membership entropy " << fixed(report["membership_summary"]["mean_entropy"].get<double>())
      << " nats\n";
  for (std::size_t c = 0; c < ms.classes.size(); ++c) {
    out << "  class " << ms.classes[c] << " (" << ms.class_size[c] << "):";
    for (double x : ms.class_average.row(c)) out << ' ' << fixed(x, 3);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// benchmark

void cmd_benchmark(const Resolved& r, std::ostream& out, std::ostream&) {
  BenchmarkConfig cfg;
  cfg.zetas = r.values.at("zetas").get<std::vector<double>>();
  cfg.instances = r.size("instances");
  if (cfg.instances == 0) throw ConfigError("--instances must be at least 1");
  cfg.synthetic.num_nodes = r.size("nodes");
  cfg.synthetic.target_degree = r.dbl("degree");
  cfg.synthetic.assortative = r.dbl("assortative");
  cfg.synthetic.baseline = r.dbl("baseline");
  for (double z : cfg.zetas) {
    SyntheticConfig probe = cfg.synthetic;
    probe.zeta = z;
    checked([&] { probe.validate(); });
  }
  cfg.seed = r.u64("seed");
  cfg.threads = r.uint("threads");
  cfg.ci_level = r.dbl("ci_level");
  cfg.ci_resamples = r.size("ci_resamples");
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0))
    throw ConfigError("--ci-level must lie in (0, 1)");
  if (cfg.ci_resamples == 0) throw ConfigError("--ci-resamples must be at least 1");

  Resolved search_view = r;
  search_view.values["fit_seed"] = 0;
  const Hypergraph empty;
  cfg.search = make_search_config(search_view, empty);

  const auto records = run_benchmark(cfg);
  const auto summary = summarize(cfg, records);

  {
    auto f = open_output(r.str("output"));
    write_records_csv(f, records);
  }
  std::string summary_path = r.str("summary");
  if (summary_path.empty())
    summary_path = std::filesystem::path(r.str("output")).replace_extension(".summary.csv").string();
  {
    auto f = open_output(summary_path);
    write_summary_csv(f, summary);
  }
  std::string sidecar = r.str("config_out");
  if (sidecar.empty())
    sidecar = std::filesystem::path(r.str("output")).replace_extension(".config.json").string();
  write_json(sidecar, r.echo);

  out << "zeta  multi  delta_auc  cs_multi  cs_single\n";
  for (const auto& s : summary)
    out << fixed(s.zeta, 1) << "  " << fixed(s.multi_order_fraction, 2) << "  "
        << fixed(s.mean_delta_auc, 4) << "  " << fixed(s.mean_cs_multi, 4) << "  "
        << fixed(s.mean_cs_single, 4) << '\n';
}

std::vector<Command> make_commands() {
  std::vector<Command> cmds;
  cmds.emplace_back("generate", "sample planted two-community hypergraphs with orders 2..4",
                  concat(synthetic_options(),
                         std::vector<OptionDef>{
                             {"zeta", Kind::kDouble, 0.0, "higher-order heterogeneity in [0, 1]"},
                             {"instances", Kind::kUInt, 1, "number of instances"},
                             {"seed", Kind::kUInt, 0, "base seed; instance i derives its own"},
                             {"output_dir", Kind::kString, ".", "output directory", false},
                             {"prefix", Kind::kString, "instance", "file name prefix", false},
                         }),
                  cmd_generate);
  cmds.emplace_back("fit", "fit the model under a fixed order partition",
                  concat(graph_options("edges"),
                         std::vector<OptionDef>{{"partition", Kind::kString, "",
                                            "order partition, e.g. \"2,4,5|3\"; empty is trivial"}},
                         fit_options(10),
                         std::vector<OptionDef>{
                             {"seed", Kind::kUInt, 0, "restart seed"},
                             {"record_elbo", Kind::kBool, false, "store the objective trace"},
                             {"threads", Kind::kUInt, 1, "worker threads"},
                             {"output", Kind::kString, "fit.json", "result file", false},
                         }),
                  cmd_fit);
  cmds.emplace_back("search", "select an order partition by cross-validated AUC",
                  concat(graph_options("edges"), fit_options(10), search_options(),
                         std::vector<OptionDef>{
                             {"seed", Kind::kUInt, 0, "seed of folds and negative samples"},
                             {"fit_seed", Kind::kUInt, 1, "seed of the per-fold fits"},
                             {"threads", Kind::kUInt, 1, "worker threads"},
                             {"dataset", Kind::kString, "", "dataset name in the AUC table"},
                             {"output", Kind::kString, "search.json", "result file", false},
                             {"auc_csv", Kind::kString, "", "per-fold AUC table", false},
                         }),
                  cmd_search);
  cmds.emplace_back("evaluate", "score a fitted model on held-out edges and ground truth",
                  concat(graph_options("train"),
                         std::vector<OptionDef>{
                             {"test", Kind::kString, "", "held-out hyperedges"},
                             {"truth", Kind::kString, "", "ground-truth communities (node,community)"},
                             {"model", Kind::kString, "", "fit result; fitted on --train if empty"},
                             {"partition", Kind::kString, "", "order partition when fitting"},
                         },
                         fit_options(10),
                         std::vector<OptionDef>{
                             {"fit_seed", Kind::kUInt, 1, "seed of the fit when no model is given"},
                             {"auc_pairs", Kind::kUInt, 10000, "positive/negative pairs"},
                             {"seed", Kind::kUInt, 0, "seed of the AUC pairs"},
                             {"threads", Kind::kUInt, 1, "worker threads"},
                             {"output", Kind::kString, "evaluation.json", "report file", false},
                         }),
                  cmd_evaluate);
  cmds.emplace_back(
      "benchmark", "sweep zeta over synthetic instances and compare single- and multi-order fits",
       concat(std::vector<OptionDef>{
                  {"zetas", Kind::kDoubleList,
                   Json{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                   "zeta values, comma-separated"},
                  {"instances", Kind::kUInt, 20, "instances per zeta"},
              },
              synthetic_options(), fit_options(5), search_options(),
              std::vector<OptionDef>{
                  {"seed", Kind::kUInt, 0, "base seed; every instance derives its own"},
                  {"ci_level", Kind::kDouble, 0.95, "bootstrap confidence level"},
                  {"ci_resamples", Kind::kUInt, 10000, "bootstrap resamples"},
                  {"threads", Kind::kUInt, 1, "worker threads (over instances)"},
                  {"output", Kind::kString, "benchmark.csv", "per-instance table", false},
                  {"summary", Kind::kString, "", "per-zeta summary table", false},
                  {"config_out", Kind::kString, "", "resolved config sidecar", false},
              }),
       cmd_benchmark);
  return cmds;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<Command> commands = make_commands();
  CLI::App app{"Multi-order hypergraph stochastic block model", "hypermosbm"};
  app.require_subcommand(1);
  for (auto& c : commands) c.attach(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      const Resolved r = c.resolve();
      c.body(r, out, err);
      return kExitOk;
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  return kExitConfig;
}

}  // namespace hypermosbm::cli
