#pragma once

// Experiment drivers: probability traces over time for a set of dephasing
// strengths, and the scans built on top of them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gluewalk/channel.hpp"
#include "gluewalk/coin.hpp"
#include "gluewalk/graph.hpp"
#include "gluewalk/parallel.hpp"
#include "gluewalk/walk.hpp"

namespace gluewalk {

inline const std::vector<double> kDefaultEtaGrid{1.0, 0.95, 0.9, 0.85, 0.8};
inline constexpr double kDefaultReachedThreshold = 0.05;
inline constexpr double kDefaultPeakFraction = 0.25;
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{4} << 30;  // bytes

struct ExperimentConfig {
  GluedTreesSpec graph;
  std::size_t steps = 25;
  std::vector<double> etas = kDefaultEtaGrid;
  InitialCondition initial = symmetric_initial_condition(kDefaultBeta);
  double reached_threshold = kDefaultReachedThreshold;
  double peak_fraction = kDefaultPeakFraction;

  void validate() const {
    if (graph.layers < 1) throw std::invalid_argument("graph needs at least one layer");
    if (steps < 1) throw std::invalid_argument("experiment needs at least one step");
    if (etas.empty()) throw std::invalid_argument("eta list is empty");
    for (double e : etas) {
      if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("eta " + std::to_string(e) + " outside [0, 1]");
    }
    if (!(reached_threshold > 0.0 && reached_threshold < 1.0)) {
      throw std::invalid_argument("reached threshold must lie in (0, 1)");
    }
    if (!(peak_fraction >= 0.0 && peak_fraction <= 1.0)) throw std::invalid_argument("peak fraction must lie in [0, 1]");
    initial.validate(3);
    if (initial.start >= graph.num_vertices()) throw std::invalid_argument("start vertex outside the graph");
  }
};

struct RunOptions {
  unsigned threads = 1;
  /// Evolve eta = 1 as a pure state instead of a density matrix.
  bool pure_fast_path = true;
};

/// P(v, t) for one dephasing strength; `eta` is empty for the classical walk.
struct TraceSeries {
  std::optional<double> eta;
  std::vector<std::vector<double>> by_step;  // by_step[t][v], t = 0..T
};

struct ProbabilityTrace {
  ExperimentConfig config;
  std::size_t num_vertices = 0;
  Vertex target = 0;
  std::vector<TraceSeries> series;

  [[nodiscard]] std::size_t steps() const { return series.empty() ? 0 : series.front().by_step.size() - 1; }

  [[nodiscard]] const TraceSeries& series_for(double eta) const {
    for (const auto& s : series) {
      if (s.eta && *s.eta == eta) return s;
    }
    throw std::out_of_range("trace has no series for eta = " + std::to_string(eta));
  }

  [[nodiscard]] double probability(double eta, std::size_t step, Vertex v) const {
    const auto& s = series_for(eta);
    if (step >= s.by_step.size()) throw std::out_of_range("step beyond trace length");
    return s.by_step[step].at(v);
  }
};

namespace detail {

inline std::vector<std::vector<double>> evolve_pure(const WalkOperator& walk, const InitialCondition& init,
                                                    std::size_t num_vertices, std::size_t steps) {
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  PureState psi = PureState::from(init, num_vertices, walk.coin().dimension());
  out.push_back(measure_positions(psi));
  for (std::size_t t = 1; t <= steps; ++t) {
    walk.step(psi);
    out.push_back(measure_positions(psi));
  }
  return out;
}

/// The channel follows every unitary step; nothing is applied before step 1.
inline std::vector<std::vector<double>> evolve_density(const WalkOperator& walk, const PhaseDampingChannel& channel,
                                                       const InitialCondition& init, std::size_t num_vertices,
                                                       std::size_t steps, unsigned threads) {
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  DensityState rho = DensityState::from(init, num_vertices, walk.coin().dimension());
  out.push_back(measure_positions(rho));
  for (std::size_t t = 1; t <= steps; ++t) {
    walk.step(rho, threads);
    apply_closed_form_inplace(rho, channel, threads);
    out.push_back(measure_positions(rho));
  }
  return out;
}

inline std::size_t density_bytes(const GluedTreesSpec& spec) {
  const std::size_t dim = spec.num_vertices() * 3;
  return dim * dim * sizeof(Complex);
}

inline void check_memory(const GluedTreesSpec& spec, std::size_t budget) {
  const std::size_t need = density_bytes(spec);
  if (need > budget) {
    std::ostringstream msg;
    msg << "G'" << spec.layers << " needs a " << spec.num_vertices() * 3 << "x" << spec.num_vertices() * 3
        << " density matrix (" << need / (1 << 20) << " MiB), over the memory budget of " << budget / (1 << 20)
        << " MiB; use fewer layers";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

/// For each eta: start from the initial condition, then for t = 1..T apply
/// one walk step followed by the phase damping channel, recording P(v, t).
[[nodiscard]] inline ProbabilityTrace run_walk(const ExperimentConfig& config, RunOptions options = {}) {
  config.validate();
  const PortLabeledGraph graph = build_glued_trees(config.graph);
  const WalkOperator walk(graph, grover_coin(3));

  ProbabilityTrace trace{config, graph.num_vertices(), config.graph.target(), {}};
  for (double eta : config.etas) {
    if (eta == 1.0 && options.pure_fast_path) {
      trace.series.push_back({eta, detail::evolve_pure(walk, config.initial, graph.num_vertices(), config.steps)});
    } else {
      const PhaseDampingChannel channel(eta, 3);
      trace.series.push_back({eta, detail::evolve_density(walk, channel, config.initial, graph.num_vertices(),
                                                          config.steps, options.threads)});
    }
  }
  return trace;
}

struct TargetCurve {
  std::vector<double> etas;
  std::vector<std::vector<double>> probability;  // probability[eta index][t]

  [[nodiscard]] const std::vector<double>& for_eta(double eta) const {
    for (std::size_t i = 0; i < etas.size(); ++i) {
      if (etas[i] == eta) return probability[i];
    }
    throw std::out_of_range("target curve has no eta = " + std::to_string(eta));
  }
};

[[nodiscard]] inline TargetCurve target_curve(const ProbabilityTrace& trace) {
  TargetCurve curve;
  for (const auto& s : trace.series) {
    curve.etas.push_back(s.eta.value_or(std::nan("")));
    std::vector<double> p;
    p.reserve(s.by_step.size());
    for (const auto& row : s.by_step) p.push_back(row.at(trace.target));
    curve.probability.push_back(std::move(p));
  }
  return curve;
}

/// First step whose probability reaches `threshold`, if any.
[[nodiscard]] inline std::optional<std::size_t> first_reached_step(const std::vector<double>& curve, double threshold) {
  for (std::size_t t = 0; t < curve.size(); ++t) {
    if (curve[t] >= threshold) return t;
  }
  return std::nullopt;
}

struct CurvePeak {
  std::size_t step = 0;
  double probability = 0.0;
};

/// Global maximum; ties go to the earliest step.
[[nodiscard]] inline CurvePeak curve_peak(const std::vector<double>& curve) {
  CurvePeak best;
  for (std::size_t t = 0; t < curve.size(); ++t) {
    if (curve[t] > best.probability) best = {t, curve[t]};
  }
  return best;
}

struct EtaScan {
  std::vector<std::size_t> steps;
  std::vector<double> etas;
  std::vector<std::vector<double>> probability;  // probability[step index][eta index]
};

/// P(target, t) as a function of eta, for each requested step t.
[[nodiscard]] inline EtaScan eta_scan(const GluedTreesSpec& graph, const std::vector<std::size_t>& steps,
                                      const std::vector<double>& eta_grid,
                                      const InitialCondition& initial = symmetric_initial_condition(kDefaultBeta),
                                      RunOptions options = {}) {
  if (steps.empty()) throw std::invalid_argument("eta scan needs at least one step");
  if (eta_grid.empty()) throw std::invalid_argument("eta grid is empty");
  ExperimentConfig cfg;
  cfg.graph = graph;
  cfg.steps = std::max<std::size_t>(1, *std::max_element(steps.begin(), steps.end()));
  cfg.etas = eta_grid;
  cfg.initial = initial;
  const auto curve = target_curve(run_walk(cfg, options));

  EtaScan scan{steps, eta_grid, {}};
  for (std::size_t t : steps) {
    std::vector<double> row;
    row.reserve(eta_grid.size());
    for (const auto& p : curve.probability) row.push_back(p[t]);
    scan.probability.push_back(std::move(row));
  }
  return scan;
}

struct VertexProbability {
  Vertex vertex;
  double probability;
};

/// Vertices with P > fraction * P(target) at (eta, step), descending by P
/// (ties by vertex). The target always passes its own filter when it has
/// non-zero probability.
[[nodiscard]] inline std::vector<VertexProbability> peak_filter(const ProbabilityTrace& trace, double eta,
                                                                std::size_t step,
                                                                double fraction = kDefaultPeakFraction) {
  const auto& s = trace.series_for(eta);
  if (step >= s.by_step.size()) throw std::out_of_range("step beyond trace length");
  const auto& row = s.by_step[step];
  const double cutoff = fraction * row[trace.target];
  std::vector<VertexProbability> out;
  for (Vertex v = 0; v < row.size(); ++v) {
    if (row[v] > cutoff || (v == trace.target && row[v] > 0.0)) out.push_back({v, row[v]});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.probability != b.probability ? a.probability > b.probability : a.vertex < b.vertex;
  });
  return out;
}

struct LayerScanRow {
  double eta;
  std::size_t layers;
  std::size_t peak_step;
  double peak_probability;
};

/// Peak search window for G'n.
[[nodiscard]] constexpr std::size_t layer_scan_window(std::size_t layers) { return 3 * layers + 10; }

/// max_t P(target, t) for every (n, eta), searching t in 0..3n+10. Rows are
/// grouped by eta in grid order, n ascending within each group.
[[nodiscard]] inline std::vector<LayerScanRow> layer_scan(std::size_t min_layers, std::size_t max_layers,
                                                          const std::vector<double>& eta_grid,
                                                          const InitialCondition& initial =
                                                              symmetric_initial_condition(kDefaultBeta),
                                                          RunOptions options = {},
                                                          std::size_t memory_budget = kDefaultMemoryBudget) {
  if (eta_grid.empty()) throw std::invalid_argument("eta grid is empty");
  if (min_layers < 1 || min_layers > max_layers) throw std::invalid_argument("layer range must satisfy 1 <= min <= max");
  const bool needs_density =
      std::any_of(eta_grid.begin(), eta_grid.end(), [&](double e) { return e != 1.0 || !options.pure_fast_path; });
  if (needs_density) detail::check_memory(GluedTreesSpec{max_layers}, memory_budget);

  std::vector<std::vector<LayerScanRow>> by_eta(eta_grid.size());
  for (std::size_t n = min_layers; n <= max_layers; ++n) {
    ExperimentConfig cfg;
    cfg.graph = GluedTreesSpec{n};
    cfg.steps = layer_scan_window(n);
    cfg.etas = eta_grid;
    cfg.initial = initial;
    const auto curve = target_curve(run_walk(cfg, options));
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
      const auto peak = curve_peak(curve.probability[i]);
      by_eta[i].push_back({eta_grid[i], n, peak.step, peak.probability});
    }
  }
  std::vector<LayerScanRow> rows;
  for (auto& group : by_eta) rows.insert(rows.end(), group.begin(), group.end());
  return rows;
}

struct CoinOptimum {
  double alpha;
  double beta;
  double peak_probability;
  std::size_t peak_step;
};

/// beta = 0, step, 2 step, ... up to 1/sqrt(2).
[[nodiscard]] inline std::vector<double> beta_grid(double step = 1e-3) {
  if (!(step > 0.0)) throw std::invalid_argument("beta grid step must be positive");
  const double top = 1.0 / std::sqrt(2.0);
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double b = static_cast<double>(i) * step;
    if (b > top) break;
    grid.push_back(b);
  }
  return grid;
}

/// Grid search over real symmetric coins (alpha, beta, beta) maximizing the
/// ideal walk's max_t P(target, t) for t <= steps. Ties go to the smaller beta.
[[nodiscard]] inline CoinOptimum optimize_initial_coin(const GluedTreesSpec& spec, std::size_t steps,
                                                       const std::vector<double>& betas = beta_grid(),
                                                       unsigned threads = 1) {
  if (betas.empty()) throw std::invalid_argument("beta grid is empty");
  if (steps < 1) throw std::invalid_argument("coin optimization needs at least one step");
  const PortLabeledGraph graph = build_glued_trees(spec);
  const WalkOperator walk(graph, grover_coin(3));
  const Vertex target = spec.target();

  std::vector<CurvePeak> peaks(betas.size());
  parallel_for(betas.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto init = symmetric_initial_condition(betas[i]);
      const auto rows = detail::evolve_pure(walk, init, graph.num_vertices(), steps);
      std::vector<double> curve;
      curve.reserve(rows.size());
      for (const auto& r : rows) curve.push_back(r[target]);
      peaks[i] = curve_peak(curve);
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < betas.size(); ++i) {
    const bool better = peaks[i].probability > peaks[best].probability ||
                        (peaks[i].probability == peaks[best].probability && betas[i] < betas[best]);
    if (better) best = i;
  }
  const auto init = symmetric_initial_condition(betas[best]);
  return {init.coin[0].real(), betas[best], peaks[best].probability, peaks[best].step};
}

/// Exact distribution of the classical walk that leaves through each of the
/// three ports with probability 1/3 (a self loop keeps the walker in place).
[[nodiscard]] inline ProbabilityTrace classical_baseline(const GluedTreesSpec& spec, std::size_t steps, Vertex start = 0) {
  const PortLabeledGraph graph = build_glued_trees(spec);
  const std::size_t n = graph.num_vertices();
  const std::size_t k = graph.degree();
  if (start >= n) throw std::invalid_argument("start vertex outside the graph");

  ExperimentConfig echo;
  echo.graph = spec;
  echo.steps = steps;
  echo.etas = {};
  echo.initial.start = start;

  TraceSeries series{std::nullopt, {}};
  std::vector<double> p(n, 0.0);
  p[start] = 1.0;
  series.by_step.push_back(p);
  const double share = 1.0 / static_cast<double>(k);
  for (std::size_t t = 1; t <= steps; ++t) {
    std::vector<double> next(n, 0.0);
    for (Vertex v = 0; v < n; ++v) {
      if (p[v] == 0.0) continue;
      for (Label c = 0; c < k; ++c) next[graph.port(v, c).vertex] += share * p[v];
    }
    p.swap(next);
    series.by_step.push_back(p);
  }
  return ProbabilityTrace{echo, n, spec.target(), {std::move(series)}};
}

}  // namespace gluewalk
