#pragma once

// Experiment orchestration: ingest or generate descriptors, optionally fit
// and apply a reducer, run nearest-neighbor recognition, and emit a JSON
// report plus (when a map was fitted) a projection map file. Reports are
// reproducible: with a fixed config and seed the canonical body (everything
// outside "timing") is byte-identical across runs.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/evaluate.hpp"
#include "lielpp/io.hpp"
#include "lielpp/reducers.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/synthetic.hpp"
#include "lielpp/version.hpp"

namespace lielpp {

struct SyntheticSpec {
  std::size_t classes = 2;
  std::size_t per_class = 10;
  std::size_t dim = 5;
  double separation = 4.0;
};

struct ExperimentConfig {
  // Input: exactly one of these.
  std::optional<std::string> manifest;
  std::optional<std::string> descriptors_file;
  std::optional<SyntheticSpec> synthetic;

  // Descriptor extraction (manifest input only). window == 0 means one
  // descriptor per sequence.
  std::size_t window = 0;
  std::size_t overlap = 0;
  bool center = true;

  std::string reducer = "lie-lpp";  // lie-lpp | lpp | none
  Metric metric = Metric::LEM;
  std::size_t k = 5;
  std::optional<double> t;  // nullopt = auto bandwidth
  std::size_t target_dim = 3;
  std::size_t knn_classify_k = 1;
  std::optional<std::size_t> train_per_class;  // split evaluation when set

  std::uint64_t seed = 0;
  std::string out;  // report path; empty = "report.json"
  std::string format = "json";
};

namespace detail {

inline Metric parse_metric(const std::string& s) {
  if (s == "lem") return Metric::LEM;
  if (s == "em") return Metric::EM;
  throw InvalidInput("metric must be \"lem\" or \"em\", got \"" + s + "\"");
}

inline std::optional<double> parse_bandwidth(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return std::nullopt;
    throw InvalidInput("t must be a positive number or \"auto\"");
  }
  if (!j.is_number()) throw InvalidInput("t must be a positive number or \"auto\"");
  const double v = j.get<double>();
  if (!(v > 0.0)) throw InvalidInput("t must be > 0");
  return v;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  static const std::set<std::string> known = {"input",          "descriptor", "reducer", "metric",
                                              "k",              "t",          "dim",     "knn_classify_k",
                                              "split",          "seed",       "out",     "format"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw InvalidInput("config: unknown key \"" + key + "\"");

  ExperimentConfig cfg;
  if (!j.contains("input") || !j["input"].is_object())
    throw InvalidInput("config: an \"input\" object is required");
  const auto& in = j["input"];
  int sources = 0;
  if (in.contains("manifest")) {
    cfg.manifest = in["manifest"].get<std::string>();
    ++sources;
  }
  if (in.contains("descriptors")) {
    cfg.descriptors_file = in["descriptors"].get<std::string>();
    ++sources;
  }
  if (in.contains("synthetic")) {
    const auto& s = in["synthetic"];
    SyntheticSpec spec;
    spec.classes = s.value("classes", spec.classes);
    spec.per_class = s.value("per_class", spec.per_class);
    spec.dim = s.value("dim", spec.dim);
    spec.separation = s.value("separation", spec.separation);
    if (spec.classes < 1 || spec.per_class < 1 || spec.dim < 1)
      throw InvalidInput("config: synthetic counts must be >= 1");
    cfg.synthetic = spec;
    ++sources;
  }
  if (sources != 1)
    throw InvalidInput("config: input must name exactly one of manifest/descriptors/synthetic");

  if (j.contains("descriptor")) {
    const auto& d = j["descriptor"];
    cfg.window = d.value("window", cfg.window);
    cfg.overlap = d.value("overlap", cfg.overlap);
    cfg.center = d.value("center", cfg.center);
  }
  cfg.reducer = j.value("reducer", cfg.reducer);
  if (cfg.reducer != "lie-lpp" && cfg.reducer != "lpp" && cfg.reducer != "none")
    throw InvalidInput("config: reducer must be lie-lpp, lpp or none");
  if (j.contains("metric")) cfg.metric = detail::parse_metric(j["metric"].get<std::string>());
  cfg.k = j.value("k", cfg.k);
  if (cfg.k < 1) throw InvalidInput("config: k must be >= 1");
  if (j.contains("t")) cfg.t = detail::parse_bandwidth(j["t"]);
  cfg.target_dim = j.value("dim", cfg.target_dim);
  if (cfg.target_dim < 1) throw InvalidInput("config: dim must be >= 1");
  cfg.knn_classify_k = j.value("knn_classify_k", cfg.knn_classify_k);
  if (cfg.knn_classify_k < 1) throw InvalidInput("config: knn_classify_k must be >= 1");
  if (j.contains("split")) {
    if (!j["split"].is_object() || !j["split"].contains("train_per_class"))
      throw InvalidInput("config: split must be {\"train_per_class\": p}");
    const auto p = j["split"]["train_per_class"].get<std::size_t>();
    if (p < 1) throw InvalidInput("config: train_per_class must be >= 1");
    cfg.train_per_class = p;
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out = j.value("out", cfg.out);
  cfg.format = j.value("format", cfg.format);
  if (cfg.format != "json" && cfg.format != "table")
    throw InvalidInput("config: format must be json or table");
  return cfg;
}

inline nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json in;
  if (cfg.manifest) in["manifest"] = *cfg.manifest;
  if (cfg.descriptors_file) in["descriptors"] = *cfg.descriptors_file;
  if (cfg.synthetic)
    in["synthetic"] = {{"classes", cfg.synthetic->classes},
                       {"per_class", cfg.synthetic->per_class},
                       {"dim", cfg.synthetic->dim},
                       {"separation", cfg.synthetic->separation}};
  nlohmann::json j{{"input", in},
                   {"descriptor", {{"window", cfg.window}, {"overlap", cfg.overlap}, {"center", cfg.center}}},
                   {"reducer", cfg.reducer},
                   {"metric", metric_name(cfg.metric)},
                   {"k", cfg.k},
                   {"t", cfg.t ? nlohmann::json(*cfg.t) : nlohmann::json("auto")},
                   {"dim", cfg.target_dim},
                   {"knn_classify_k", cfg.knn_classify_k},
                   {"seed", cfg.seed},
                   {"format", cfg.format}};
  if (cfg.train_per_class) j["split"] = {{"train_per_class", *cfg.train_per_class}};
  return j;
}

namespace detail {

inline DescriptorSet build_descriptors(const ExperimentConfig& cfg) {
  if (cfg.synthetic)
    return synth_spd_clusters(cfg.synthetic->classes, cfg.synthetic->per_class,
                              cfg.synthetic->dim, cfg.synthetic->separation, cfg.seed);
  if (cfg.descriptors_file) return read_descriptors(*cfg.descriptors_file);

  const auto sequences = load_sequences(*cfg.manifest);
  if (sequences.empty()) throw InvalidInput("experiment: manifest lists no sequences");
  DescriptorSet out;
  for (const auto& seq : sequences) {
    if (cfg.window == 0) {
      out.add(covariance_descriptor(seq, cfg.center, /*clamp=*/true), seq.label, seq.id);
    } else {
      const DescriptorSet windows = window_descriptors(seq, cfg.window, cfg.overlap, cfg.center);
      for (std::size_t i = 0; i < windows.size(); ++i)
        out.add(windows[i], windows.labels()[i], windows.source_ids()[i]);
    }
  }
  return out;
}

// Per-class shuffled split, seeded from (seed, "split"). Classes are visited
// in sorted label order.
inline void split_indices(const DescriptorSet& data, std::size_t train_per_class,
                          std::uint64_t seed, std::vector<std::size_t>& train,
                          std::vector<std::size_t>& test) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels()[i]].push_back(i);
  Rng rng(mix_seed(seed, "split"));
  for (auto& [label, idx] : by_class) {
    if (train_per_class >= idx.size())
      throw InvalidInput("split: train_per_class = " + std::to_string(train_per_class) +
                         " leaves no test items for class \"" + label + "\"");
    for (std::size_t i = idx.size(); i-- > 1;)
      std::swap(idx[i], idx[rng.integer(i + 1)]);
    for (std::size_t i = 0; i < idx.size(); ++i)
      (i < train_per_class ? train : test).push_back(idx[i]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
}

inline std::vector<double> flatten(const SpdMatrix& s) {
  std::vector<double> v;
  v.reserve(s.dim() * s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c) v.push_back(s(r, c));
  return v;
}

inline DescriptorSet subset(const DescriptorSet& data, const std::vector<std::size_t>& idx) {
  DescriptorSet out;
  for (std::size_t i : idx) out.add(data[i], data.labels()[i], data.source_ids()[i]);
  return out;
}

}  // namespace detail

struct ExperimentOutcome {
  EvalReport report;
  nlohmann::json report_json;
  std::optional<ProjectionMap> map;
  std::filesystem::path report_path;
  std::filesystem::path map_path;  // empty when no map was fitted
};

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool write_files = true) {
  // d < D is checked before any expensive work once D is known.
  if (cfg.synthetic && cfg.reducer != "none") {
    const std::size_t full = cfg.reducer == "lpp" ? cfg.synthetic->dim * cfg.synthetic->dim
                                                  : cfg.synthetic->dim;
    if (cfg.target_dim >= full)
      throw InvalidInput("experiment: target dim " + std::to_string(cfg.target_dim) +
                         " must be smaller than the descriptor dimension " + std::to_string(full));
  }

  const auto fit_start = std::chrono::steady_clock::now();
  const DescriptorSet data = detail::build_descriptors(cfg);
  if (data.size() < 2) throw InvalidInput("experiment: need at least 2 descriptors");
  const std::size_t dim = data.dim();
  if (cfg.reducer == "lie-lpp" && cfg.target_dim >= dim)
    throw InvalidInput("experiment: target dim " + std::to_string(cfg.target_dim) +
                       " must be smaller than the descriptor dimension " + std::to_string(dim));
  if (cfg.reducer == "lpp" && cfg.target_dim >= dim * dim)
    throw InvalidInput("experiment: target dim must be smaller than the flattened dimension");

  std::vector<std::size_t> train, test;
  if (cfg.train_per_class) {
    detail::split_indices(data, *cfg.train_per_class, cfg.seed, train, test);
  } else {
    train = detail::all_indices(data.size());
    test = train;
  }

  ExperimentOutcome outcome;
  nlohmann::json results;
  double fit_seconds = 0.0;

  if (cfg.reducer == "lie-lpp") {
    const DescriptorSet fit_data = cfg.train_per_class ? detail::subset(data, train) : data;
    ProjectionMap map = lie_lpp_fit(fit_data, cfg.k, cfg.t, cfg.target_dim, cfg.metric);
    DescriptorSet reduced;
    for (std::size_t i = 0; i < data.size(); ++i)
      reduced.add(lie_lpp_transform(map, data[i]), data.labels()[i], data.source_ids()[i]);
    fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - fit_start).count();

    outcome.report = cfg.train_per_class
                         ? split_knn_eval(reduced, cfg.metric, train, test, cfg.knn_classify_k)
                         : loo_knn_eval(reduced, cfg.metric, cfg.knn_classify_k);
    results["reduced_dim"] = map.output_dim;
    results["eigenvalues"] = map.eigenvalues;
    results["t_used"] = map.t;
    results["regularization"] = map.regularization_applied;
    outcome.map = std::move(map);
  } else if (cfg.reducer == "lpp") {
    // Baseline: flatten descriptors row-major and reduce as plain vectors.
    std::vector<std::vector<double>> flat;
    flat.reserve(data.size());
    for (const SpdMatrix& s : data.descriptors()) flat.push_back(detail::flatten(s));
    std::vector<std::vector<double>> fit_points;
    if (cfg.train_per_class)
      for (std::size_t i : train) fit_points.push_back(flat[i]);
    const LppMap map = lpp_fit(cfg.train_per_class ? fit_points : flat, cfg.k, cfg.t,
                               cfg.target_dim);
    std::vector<std::vector<double>> reduced;
    reduced.reserve(flat.size());
    for (const auto& x : flat) reduced.push_back(lpp_transform(map, x));
    fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - fit_start).count();

    outcome.report =
        cfg.train_per_class
            ? split_knn_eval(reduced, data.labels(), train, test, cfg.knn_classify_k)
            : loo_knn_eval(reduced, data.labels(), cfg.knn_classify_k);
    results["reduced_dim"] = cfg.target_dim;
    results["eigenvalues"] = map.eigenvalues;
  } else {
    fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - fit_start).count();
    outcome.report = cfg.train_per_class
                         ? split_knn_eval(data, cfg.metric, train, test, cfg.knn_classify_k)
                         : loo_knn_eval(data, cfg.metric, cfg.knn_classify_k);
    results["reduced_dim"] = nullptr;
  }
  outcome.report.wall_time_fit = fit_seconds;

  results["accuracy"] = outcome.report.accuracy;
  results["class_labels"] = outcome.report.class_labels;
  results["per_class_accuracy"] = outcome.report.per_class_accuracy;
  results["confusion"] = outcome.report.confusion;
  results["n_items"] = data.size();
  results["n_train"] = train.size();
  results["n_test"] = test.size();
  results["descriptor_dim"] = dim;

  outcome.report_json = {{"config", config_echo(cfg)},
                         {"results", results},
                         {"timing",
                          {{"fit_seconds", outcome.report.wall_time_fit},
                           {"eval_seconds", outcome.report.wall_time_eval}}},
                         {"version", std::string(kVersion)}};

  if (write_files) {
    outcome.report_path = cfg.out.empty() ? std::filesystem::path("report.json")
                                          : std::filesystem::path(cfg.out);
    detail::write_text_file(outcome.report_path, outcome.report_json.dump(2) + "\n");
    if (outcome.map) {
      outcome.map_path = outcome.report_path;
      outcome.map_path.replace_extension(".map.json");
      write_projection_map(outcome.map_path, *outcome.map);
    }
  }
  return outcome;
}

// Table view of a report, mirroring the method/dimension/time/accuracy
// columns of a benchmark summary.
inline void print_report_table(const nlohmann::json& report, std::ostream& os) {
  const auto& res = report["results"];
  const std::string reducer = report["config"]["reducer"].get<std::string>();
  const std::string metric = report["config"]["metric"].get<std::string>();
  std::string dims = std::to_string(res["descriptor_dim"].get<std::size_t>());
  if (!res["reduced_dim"].is_null())
    dims += " -> " + std::to_string(res["reduced_dim"].get<std::size_t>());
  os << "method    " << reducer << " (" << metric << ")\n"
     << "dimension " << dims << "\n"
     << "fit_time  " << report["timing"]["fit_seconds"].get<double>() << " s\n"
     << "eval_time " << report["timing"]["eval_seconds"].get<double>() << " s\n"
     << "accuracy  " << res["accuracy"].get<double>() << "\n\nper-class accuracy\n";
  const auto labels = res["class_labels"].get<std::vector<std::string>>();
  const auto acc = res["per_class_accuracy"].get<std::vector<double>>();
  for (std::size_t i = 0; i < labels.size(); ++i)
    os << "  " << labels[i] << "  " << acc[i] << "\n";
}

}  // namespace lielpp
