#pragma once

// gluewalk command line: build-graph, run, scan, optimize-coin, line-walk,
// classical. Exit codes: 0 success, 1 I/O failure, 2 invalid arguments.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gluewalk/gluewalk.hpp"

namespace gluewalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

namespace fs = std::filesystem;
using nlohmann::json;

inline void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << contents;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

inline fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  return fs::path(dir);
}

class Manifest {
 public:
  Manifest(std::string command, json config)
      : command_(std::move(command)), config_(std::move(config)), start_(std::chrono::steady_clock::now()) {}

  void add_output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& dir) const {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m{{"tool", "gluewalk"},
           {"version", kVersion},
           {"command", command_},
           {"config", config_},
           {"duration_seconds", seconds},
           {"outputs", outputs_}};
    write_file(dir / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  json config_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
};

inline void check_etas(const std::vector<double>& etas) {
  if (etas.empty()) throw UsageError("--eta needs at least one value");
  for (double e : etas) {
    if (!(e >= 0.0 && e <= 1.0)) throw UsageError("eta " + csv::format_real(e) + " is out of range [0, 1]");
  }
}

inline InitialCondition parse_coin(const std::vector<double>& amplitudes) {
  if (amplitudes.empty()) return symmetric_initial_condition(kDefaultBeta);
  if (amplitudes.size() != 3) throw UsageError("--coin needs three comma-separated amplitudes");
  double norm2 = 0.0;
  for (double a : amplitudes) norm2 += a * a;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw UsageError("--coin amplitudes must not all be zero");
  const double s = 1.0 / std::sqrt(norm2);
  return InitialCondition{0, {amplitudes[0] * s, amplitudes[1] * s, amplitudes[2] * s}};
}

inline Gluing parse_gluing(const std::string& name) { return name == "random" ? Gluing::random_cycle : Gluing::alternating; }

inline json coin_json(const InitialCondition& init) {
  json c = json::array();
  for (const auto& a : init.coin) c.push_back(a.real());
  return c;
}

}  // namespace detail

/// Runs the CLI. `out` receives normal output and --help text, `err` errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::json;
  namespace fs = std::filesystem;

  CLI::App app{"Coined quantum walks on glued-trees graphs under coin dephasing", "gluewalk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  const unsigned threads = default_thread_count();
  const CLI::Range layers_range(std::size_t{1}, std::size_t{24}, "LAYERS");

  // build-graph
  std::size_t bg_layers = 0;
  std::string bg_gluing = "alt";
  std::uint64_t bg_seed = 0;
  std::string bg_out;
  auto* build = app.add_subcommand("build-graph", "Write the edge list of a glued-trees graph G'n");
  build->add_option("--layers", bg_layers, "Tree depth n (>= 1)")->required()->check(layers_range);
  build->add_option("--gluing", bg_gluing, "Leaf gluing: alt or random")->check(CLI::IsMember({"alt", "random"}));
  build->add_option("--seed", bg_seed, "Seed for random gluing");
  build->add_option("--out", bg_out, "Edge list path (omit to only print the summary)");

  // run
  std::size_t run_layers = 6, run_steps = 25;
  std::vector<double> run_etas = kDefaultEtaGrid;
  std::vector<double> run_coin;
  std::string run_gluing = "alt", run_out = ".";
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Probability trace over time for each eta");
  run_cmd->add_option("--layers", run_layers, "Tree depth n")->check(layers_range);
  run_cmd->add_option("--steps", run_steps, "Number of walk steps T (>= 1)");
  run_cmd->add_option("--eta", run_etas, "Comma-separated dephasing strengths in [0, 1]")->delimiter(',');
  run_cmd->add_option("--coin", run_coin, "Initial coin amplitudes a,b,c (normalized on input)")->delimiter(',');
  run_cmd->add_option("--gluing", run_gluing, "Leaf gluing: alt or random")->check(CLI::IsMember({"alt", "random"}));
  run_cmd->add_option("--seed", run_seed, "Seed for random gluing");
  run_cmd->add_option("--out", run_out, "Output directory");

  // scan
  std::string scan_mode;
  std::size_t scan_layers = 6, scan_min = 4, scan_max = 8, scan_budget_mib = kDefaultMemoryBudget >> 20;
  std::vector<std::size_t> scan_steps{13, 14, 15, 16, 17, 22};
  std::vector<double> scan_etas = kDefaultEtaGrid;
  std::vector<double> scan_coin;
  std::string scan_out = ".";
  auto* scan = app.add_subcommand("scan", "Target probability versus eta (per step) or versus n (peak over time)");
  scan->add_option("--mode", scan_mode, "eta or layers")->required();
  scan->add_option("--layers", scan_layers, "Tree depth n for eta mode")->check(layers_range);
  scan->add_option("--steps", scan_steps, "Comma-separated steps for eta mode")->delimiter(',');
  scan->add_option("--eta", scan_etas, "Comma-separated dephasing strengths")->delimiter(',');
  scan->add_option("--min-layers", scan_min, "Smallest n for layers mode")->check(layers_range);
  scan->add_option("--max-layers", scan_max, "Largest n for layers mode")->check(layers_range);
  scan->add_option("--memory-budget-mib", scan_budget_mib, "Largest density matrix allowed, in MiB");
  scan->add_option("--coin", scan_coin, "Initial coin amplitudes a,b,c")->delimiter(',');
  scan->add_option("--out", scan_out, "Output directory");

  // optimize-coin
  std::size_t opt_layers = 6, opt_steps = 25;
  double opt_beta_step = 1e-3;
  std::string opt_out = ".";
  auto* opt = app.add_subcommand("optimize-coin", "Grid search for the best symmetric initial coin (alpha, beta, beta)");
  opt->add_option("--layers", opt_layers, "Tree depth n")->check(layers_range);
  opt->add_option("--steps", opt_steps, "Steps searched for the peak")->check(CLI::PositiveNumber);
  opt->add_option("--beta-step", opt_beta_step, "Grid spacing for beta")->check(CLI::PositiveNumber);
  opt->add_option("--out", opt_out, "Output directory");

  // line-walk
  std::size_t line_steps = 100;
  std::string line_coin = "symmetric", line_out = ".";
  auto* line = app.add_subcommand("line-walk", "Hadamard walk on the integer line");
  line->add_option("--steps", line_steps, "Number of steps");
  line->add_option("--coin", line_coin, "Initial coin: symmetric ((|0>+i|1>)/sqrt2) or zero (|0>)")
      ->check(CLI::IsMember({"symmetric", "zero"}));
  line->add_option("--out", line_out, "Output directory");

  // classical
  std::size_t cl_layers = 6, cl_steps = 25;
  std::string cl_out = ".";
  auto* classical = app.add_subcommand("classical", "Exact distribution of the classical random walk on G'n");
  classical->add_option("--layers", cl_layers, "Tree depth n")->check(layers_range);
  classical->add_option("--steps", cl_steps, "Number of steps");
  classical->add_option("--out", cl_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) {
      const GluedTreesSpec spec{bg_layers, detail::parse_gluing(bg_gluing), bg_seed};
      const auto graph = build_glued_trees(spec);
      if (!bg_out.empty()) detail::write_file(bg_out, export_edge_list(graph));
      out << graph.num_vertices() << " vertices, target " << spec.target() << "\n";
    } else if (*run_cmd) {
      if (run_steps < 1) throw UsageError("--steps must be at least 1");
      detail::check_etas(run_etas);
      ExperimentConfig cfg;
      cfg.graph = GluedTreesSpec{run_layers, detail::parse_gluing(run_gluing), run_seed};
      cfg.steps = run_steps;
      cfg.etas = run_etas;
      cfg.initial = detail::parse_coin(run_coin);
      detail::Manifest manifest("run", json{{"layers", run_layers},
                                            {"steps", run_steps},
                                            {"eta", run_etas},
                                            {"coin", detail::coin_json(cfg.initial)},
                                            {"gluing", run_gluing},
                                            {"seed", run_seed}});
      if (std::any_of(run_etas.begin(), run_etas.end(), [](double e) { return e != 1.0; })) {
        gluewalk::detail::check_memory(cfg.graph, kDefaultMemoryBudget);
      }
      const auto trace = run_walk(cfg, RunOptions{threads});
      const auto dir = detail::prepare_dir(run_out);
      detail::write_file(dir / "trace.csv", csv::trace_csv(trace));
      manifest.add_output(dir / "trace.csv");
      detail::write_file(dir / "target.csv", csv::target_csv(trace));
      manifest.add_output(dir / "target.csv");
      manifest.write(dir);
      const auto curve = target_curve(trace);
      for (std::size_t i = 0; i < curve.etas.size(); ++i) {
        const auto peak = curve_peak(curve.probability[i]);
        const auto first = first_reached_step(curve.probability[i], cfg.reached_threshold);
        out << "eta " << csv::format_real(curve.etas[i]) << ": target peak " << peak.probability << " at step "
            << peak.step << ", first reached at step " << (first ? std::to_string(*first) : std::string("never"))
            << "\n";
      }
    } else if (*scan) {
      detail::check_etas(scan_etas);
      const auto initial = detail::parse_coin(scan_coin);
      const auto dir = detail::prepare_dir(scan_out);
      if (scan_mode == "eta") {
        if (scan_steps.empty()) throw UsageError("--steps needs at least one value");
        detail::Manifest manifest("scan", json{{"mode", "eta"},
                                               {"layers", scan_layers},
                                               {"steps", scan_steps},
                                               {"eta", scan_etas},
                                               {"coin", detail::coin_json(initial)}});
        gluewalk::detail::check_memory(GluedTreesSpec{scan_layers}, scan_budget_mib << 20);
        const auto result = eta_scan(GluedTreesSpec{scan_layers}, scan_steps, scan_etas, initial, RunOptions{threads});
        detail::write_file(dir / "eta_scan.csv", csv::eta_scan_csv(result));
        manifest.add_output(dir / "eta_scan.csv");
        manifest.write(dir);
        out << "wrote " << (dir / "eta_scan.csv").string() << "\n";
      } else if (scan_mode == "layers") {
        if (scan_min > scan_max) throw UsageError("--min-layers must not exceed --max-layers");
        detail::Manifest manifest("scan", json{{"mode", "layers"},
                                               {"min_layers", scan_min},
                                               {"max_layers", scan_max},
                                               {"eta", scan_etas},
                                               {"coin", detail::coin_json(initial)}});
        const auto rows =
            layer_scan(scan_min, scan_max, scan_etas, initial, RunOptions{threads}, scan_budget_mib << 20);
        detail::write_file(dir / "layer_scan.csv", csv::layer_scan_csv(rows));
        manifest.add_output(dir / "layer_scan.csv");
        manifest.write(dir);
        out << "wrote " << (dir / "layer_scan.csv").string() << "\n";
      } else {
        throw UsageError("unknown scan mode '" + scan_mode + "' (expected eta or layers)");
      }
    } else if (*opt) {
      detail::Manifest manifest("optimize-coin",
                                json{{"layers", opt_layers}, {"steps", opt_steps}, {"beta_step", opt_beta_step}});
      const auto best = optimize_initial_coin(GluedTreesSpec{opt_layers}, opt_steps, beta_grid(opt_beta_step), threads);
      const auto dir = detail::prepare_dir(opt_out);
      detail::write_file(dir / "optimize_coin.csv", csv::coin_optimum_csv(opt_layers, opt_steps, best));
      manifest.add_output(dir / "optimize_coin.csv");
      manifest.write(dir);
      out << "beta " << csv::format_real(best.beta) << ", alpha " << best.alpha << ": target peak "
          << best.peak_probability << " at step " << best.peak_step << "\n";
    } else if (*line) {
      detail::Manifest manifest("line-walk", json{{"steps", line_steps}, {"coin", line_coin}});
      const double s = 1.0 / std::sqrt(2.0);
      const InitialCondition init = line_coin == "zero" ? InitialCondition{0, {1.0, 0.0}}
                                                        : InitialCondition{0, {Complex{s, 0.0}, Complex{0.0, s}}};
      const auto dist = hadamard_line_walk(line_steps, init);
      const auto dir = detail::prepare_dir(line_out);
      detail::write_file(dir / "line_walk.csv", csv::line_walk_csv(dist, line_steps));
      manifest.add_output(dir / "line_walk.csv");
      manifest.write(dir);
      out << "standard deviation " << dist.standard_deviation() << " (classical " << std::sqrt(double(line_steps))
          << ")\n";
    } else if (*classical) {
      detail::Manifest manifest("classical", json{{"layers", cl_layers}, {"steps", cl_steps}});
      const auto trace = classical_baseline(GluedTreesSpec{cl_layers}, cl_steps);
      const auto dir = detail::prepare_dir(cl_out);
      detail::write_file(dir / "classical.csv", csv::classical_csv(trace));
      manifest.add_output(dir / "classical.csv");
      manifest.write(dir);
      const auto curve = target_curve(trace).probability.front();
      out << "classical target peak " << curve_peak(curve).probability << "\n";
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace gluewalk::cli
