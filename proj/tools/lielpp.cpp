// lielpp command-line front end.
//
// Subcommands:
//   synth      generate a synthetic SPD cluster dataset (descriptor JSON)
//   fit        fit a reduction map and write it as JSON
//   transform  apply a stored map to descriptors
//   eval       nearest-neighbor recognition without fitting
//   analyze    randomized suites for the Laplacian dominance, error-sum and
//              rank-one equivalence results
//   run        full experiment from a config file (fit + transform + eval)
//
// Exit codes: 0 success, 2 invalid config/input, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "lielpp/lielpp.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string metric;
  std::optional<std::size_t> k;
  std::string t;
  std::optional<std::size_t> dim;
  std::string out;
  std::string format;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "experiment config (JSON)");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--metric", f.metric, "lem|em")->check(CLI::IsMember({"lem", "em"}));
  cmd->add_option("--k", f.k, "neighbors for the graph");
  cmd->add_option("--t", f.t, "heat-kernel bandwidth (number or 'auto')");
  cmd->add_option("--dim", f.dim, "target dimension d");
  cmd->add_option("--out", f.out, "output path");
  cmd->add_option("--format", f.format, "json|table")->check(CLI::IsMember({"json", "table"}));
}

lielpp::ExperimentConfig load_config(const CommonFlags& f, bool require_config) {
  lielpp::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = lielpp::parse_config(lielpp::detail::read_json_file(f.config_path));
  } else if (require_config) {
    throw lielpp::InvalidInput("--config is required");
  }
  if (f.seed) cfg.seed = *f.seed;
  if (!f.metric.empty()) cfg.metric = f.metric == "lem" ? lielpp::Metric::LEM : lielpp::Metric::EM;
  if (f.k) cfg.k = *f.k;
  if (!f.t.empty()) {
    if (f.t == "auto") {
      cfg.t = std::nullopt;
    } else {
      const double v = std::stod(f.t);
      if (!(v > 0.0)) throw lielpp::InvalidInput("--t must be > 0 or 'auto'");
      cfg.t = v;
    }
  }
  if (f.dim) cfg.target_dim = *f.dim;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.format.empty()) cfg.format = f.format;
  return cfg;
}

int run_command(const CommonFlags& flags) {
  const auto cfg = load_config(flags, true);
  const auto outcome = lielpp::run_experiment(cfg);
  if (cfg.format == "table")
    lielpp::print_report_table(outcome.report_json, std::cout);
  else
    std::cout << outcome.report_json.dump(2) << "\n";
  std::cerr << "report written to " << outcome.report_path.string() << "\n";
  if (!outcome.map_path.empty())
    std::cerr << "projection map written to " << outcome.map_path.string() << "\n";
  return 0;
}

int fit_command(const CommonFlags& flags) {
  auto cfg = load_config(flags, true);
  const auto data = lielpp::detail::build_descriptors(cfg);
  if (cfg.reducer != "lie-lpp")
    throw lielpp::InvalidInput("fit: reducer must be lie-lpp (got \"" + cfg.reducer + "\")");
  const auto map = lielpp::lie_lpp_fit(data, cfg.k, cfg.t, cfg.target_dim, cfg.metric);
  const std::filesystem::path out = cfg.out.empty() ? "map.json" : cfg.out;
  lielpp::write_projection_map(out, map);
  std::cerr << "projection map written to " << out.string() << "\n";
  return 0;
}

int transform_command(const CommonFlags& flags, const std::string& map_path,
                      const std::string& in_path) {
  const auto map = lielpp::read_projection_map(map_path);
  lielpp::DescriptorSet data;
  if (!in_path.empty()) {
    data = lielpp::read_descriptors(in_path);
  } else {
    const auto cfg = load_config(flags, true);
    data = lielpp::detail::build_descriptors(cfg);
  }
  lielpp::DescriptorSet reduced;
  for (std::size_t i = 0; i < data.size(); ++i)
    reduced.add(lielpp::lie_lpp_transform(map, data[i]), data.labels()[i],
                data.source_ids()[i]);
  const std::filesystem::path out = flags.out.empty() ? "transformed.json" : flags.out;
  lielpp::write_descriptors(out, reduced);
  std::cerr << "transformed descriptors written to " << out.string() << "\n";
  return 0;
}

int eval_command(const CommonFlags& flags, const std::string& map_path) {
  auto cfg = load_config(flags, true);
  cfg.reducer = "none";
  if (!map_path.empty()) {
    const auto map = lielpp::read_projection_map(map_path);
    auto data = lielpp::detail::build_descriptors(cfg);
    lielpp::DescriptorSet reduced;
    for (std::size_t i = 0; i < data.size(); ++i)
      reduced.add(lielpp::lie_lpp_transform(map, data[i]), data.labels()[i],
                  data.source_ids()[i]);
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() /
        ("lielpp_eval_reduced_" + std::to_string(::getpid()) + ".json");
    lielpp::write_descriptors(tmp, reduced);
    cfg.manifest.reset();
    cfg.synthetic.reset();
    cfg.descriptors_file = tmp.string();
  }
  const auto outcome = lielpp::run_experiment(cfg);
  if (cfg.format == "table")
    lielpp::print_report_table(outcome.report_json, std::cout);
  else
    std::cout << outcome.report_json.dump(2) << "\n";
  std::cerr << "report written to " << outcome.report_path.string() << "\n";
  return 0;
}

int synth_command(std::size_t classes, std::size_t per_class, std::size_t size,
                  double separation, std::uint64_t seed, const std::string& out) {
  const auto data = lielpp::synth_spd_clusters(classes, per_class, size, separation, seed);
  const std::filesystem::path path = out.empty() ? "descriptors.json" : out;
  lielpp::write_descriptors(path, data);
  std::cerr << "descriptors written to " << path.string() << "\n";
  return 0;
}

lielpp::Matrix random_weight_matrix(lielpp::Rng& rng, std::size_t n, double density) {
  lielpp::Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < density) w(i, j) = w(j, i) = rng.uniform();
  return w;
}

int analyze_command(std::uint64_t seed, std::size_t trials, const std::string& out) {
  using namespace lielpp;
  Rng rng(mix_seed(seed, "analyze"));

  std::size_t dominance_fail = 0, error_fail = 0;
  double worst_margin = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 3 + rng.integer(10);
    const Matrix w_tilde = random_weight_matrix(rng, n, 0.6);
    Matrix w = w_tilde;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double bump = rng.uniform() < 0.5 ? rng.uniform() : 0.0;
        w(i, j) += bump;
        w(j, i) = w(i, j);
      }
    const DominanceReport rep = laplacian_dominance_check(w, w_tilde);
    if (!rep.holds) ++dominance_fail;
    worst_margin = std::min(worst_margin, rep.psd_margin);
    for (std::size_t d : {std::size_t{1}, (n + 1) / 2, n})
      if (!reduction_error_compare(w, w_tilde, d).holds) ++error_fail;
  }

  std::size_t rank_one_fail = 0;
  double worst_residual = 0.0;
  const std::size_t rank_one_trials = std::max<std::size_t>(trials / 2, 50);
  for (std::size_t trial = 0; trial < rank_one_trials; ++trial) {
    const std::size_t n = 2 + rng.integer(11);
    const std::size_t dim = 1 + rng.integer(8);
    std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
    for (auto& x : xs) {
      double nrm = 0.0;
      for (double& v : x) {
        v = rng.gaussian();
        nrm += v * v;
      }
      if (!(nrm > 0.0)) x[0] = 1.0;
    }
    const RankOneReport rep = rank_one_equivalence_check(xs, random_weight_matrix(rng, n, 0.7));
    if (!rep.holds) ++rank_one_fail;
    worst_residual = std::max(worst_residual, rep.max_residual);
  }

  auto line = [](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << what << "\n";
  };
  line(dominance_fail == 0, "laplacian dominance: " + std::to_string(trials) +
                                " trials, worst psd margin " + std::to_string(worst_margin));
  line(error_fail == 0,
       "reduction error ordering: " + std::to_string(trials) + " trials x 3 dims");
  line(rank_one_fail == 0, "rank-one equivalence: " + std::to_string(rank_one_trials) +
                               " trials, worst residual " + std::to_string(worst_residual));

  if (!out.empty()) {
    nlohmann::json j{{"seed", seed},
                     {"trials", trials},
                     {"dominance_failures", dominance_fail},
                     {"error_ordering_failures", error_fail},
                     {"rank_one_failures", rank_one_fail},
                     {"worst_psd_margin", worst_margin},
                     {"worst_rank_one_residual", worst_residual},
                     {"version", std::string(lielpp::kVersion)}};
    lielpp::detail::write_text_file(out, j.dump(2) + "\n");
  }
  return (dominance_fail + error_fail + rank_one_fail) == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locality-preserving projection on the SPD matrix Lie group"};
  app.require_subcommand(1);

  CommonFlags run_flags, fit_flags, transform_flags, eval_flags;
  std::string map_path, in_path, eval_map_path;
  std::size_t synth_classes = 2, synth_per_class = 10, synth_size = 5;
  double synth_separation = 4.0;
  std::uint64_t synth_seed = 0, analyze_seed = 0;
  std::size_t analyze_trials = 200;
  std::string synth_out, analyze_out;

  CLI::App* run = app.add_subcommand("run", "full experiment from a config file");
  add_common_flags(run, run_flags);

  CLI::App* fit = app.add_subcommand("fit", "fit a reduction map");
  add_common_flags(fit, fit_flags);

  CLI::App* transform = app.add_subcommand("transform", "apply a stored map");
  add_common_flags(transform, transform_flags);
  transform->add_option("--map", map_path, "projection map JSON")->required();
  transform->add_option("--in", in_path, "descriptor JSON to transform");

  CLI::App* eval = app.add_subcommand("eval", "recognition without fitting");
  add_common_flags(eval, eval_flags);
  eval->add_option("--map", eval_map_path, "apply this map before evaluating");

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic SPD clusters");
  synth->add_option("--classes", synth_classes, "number of classes");
  synth->add_option("--per-class", synth_per_class, "samples per class");
  synth->add_option("--size", synth_size, "matrix size D");
  synth->add_option("--separation", synth_separation, "cluster separation");
  synth->add_option("--seed", synth_seed, "master seed");
  synth->add_option("--out", synth_out, "output path");

  CLI::App* analyze = app.add_subcommand("analyze", "randomized theory suites");
  analyze->add_option("--seed", analyze_seed, "master seed");
  analyze->add_option("--trials", analyze_trials, "trials per suite");
  analyze->add_option("--out", analyze_out, "summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return run_command(run_flags);
    if (fit->parsed()) return fit_command(fit_flags);
    if (transform->parsed()) return transform_command(transform_flags, map_path, in_path);
    if (eval->parsed()) return eval_command(eval_flags, eval_map_path);
    if (synth->parsed())
      return synth_command(synth_classes, synth_per_class, synth_size, synth_separation,
                           synth_seed, synth_out);
    if (analyze->parsed()) return analyze_command(analyze_seed, analyze_trials, analyze_out);
  } catch (const lielpp::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lielpp::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lielpp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
