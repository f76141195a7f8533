#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dense_oracle.hpp"
#include "gluewalk/experiment.hpp"

namespace gluewalk {
namespace {

ExperimentConfig six_layer_config(std::size_t steps, std::vector<double> etas) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{6};
  cfg.steps = steps;
  cfg.etas = std::move(etas);
  return cfg;
}

const ProbabilityTrace& six_layer_trace() {
  static const ProbabilityTrace trace = run_walk(six_layer_config(27, kDefaultEtaGrid));
  return trace;
}

TEST(Config, Validation) {
  auto cfg = six_layer_config(0, {1.0});
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.steps = 3;
  cfg.etas = {};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.etas = {1.2};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.etas = {0.9};
  cfg.reached_threshold = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.reached_threshold = 0.05;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(RunWalk, RowsNormalizeForEveryEtaIncludingZero) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{3};
  cfg.steps = 30;
  cfg.etas = {1.0, 0.9, 0.5, 0.0};
  const auto trace = run_walk(cfg);
  ASSERT_EQ(trace.series.size(), 4u);
  for (const auto& s : trace.series) {
    ASSERT_EQ(s.by_step.size(), 31u);
    for (const auto& row : s.by_step) {
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
      for (double p : row) EXPECT_GE(p, 0.0);
    }
  }
}

TEST(RunWalk, StepZeroIsTheStartVertex) {
  const auto& trace = six_layer_trace();
  for (const auto& s : trace.series) {
    EXPECT_EQ(s.by_step[0][0], 1.0);
    EXPECT_EQ(std::accumulate(s.by_step[0].begin() + 1, s.by_step[0].end(), 0.0), 0.0);
  }
}

TEST(RunWalk, IdealSixLayerArrivalAndPeak) {
  const auto& trace = six_layer_trace();
  EXPECT_NEAR(trace.probability(1.0, 13, 253), 0.122, 1e-3);
  EXPECT_NEAR(trace.probability(1.0, 16, 253), 0.655, 1e-3);
}

TEST(RunWalk, OneLayerMatchesDenseOracle) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{1};
  cfg.steps = 5;
  cfg.etas = {0.9};
  const auto trace = run_walk(cfg);
  const auto expected =
      oracle::dense_trace(build_glued_trees(cfg.graph), grover_coin(3), cfg.initial, 0.9, cfg.steps);
  for (std::size_t t = 0; t <= 5; ++t)
    for (std::size_t v = 0; v < 6; ++v) EXPECT_NEAR(trace.series[0].by_step[t][v], expected[t][v], 1e-10);
}

TEST(RunWalk, PureFastPathMatchesDensityPath) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{4};
  cfg.steps = 30;
  cfg.etas = {1.0};
  const auto fast = run_walk(cfg, RunOptions{1, true});
  const auto slow = run_walk(cfg, RunOptions{2, false});
  for (std::size_t t = 0; t <= cfg.steps; ++t)
    for (std::size_t v = 0; v < fast.num_vertices; ++v)
      ASSERT_NEAR(fast.series[0].by_step[t][v], slow.series[0].by_step[t][v], 1e-10);
}

TEST(RunWalk, ThreadCountDoesNotChangeTrace) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{3};
  cfg.steps = 12;
  cfg.etas = {0.85};
  const auto a = run_walk(cfg, RunOptions{1});
  const auto b = run_walk(cfg, RunOptions{4});
  EXPECT_EQ(a.series[0].by_step, b.series[0].by_step);
}

TEST(TargetCurve, IdealPeakAtSixteen) {
  const auto curve = target_curve(six_layer_trace());
  ASSERT_EQ(curve.etas.size(), 5u);
  const auto peak = curve_peak(curve.for_eta(1.0));
  EXPECT_EQ(peak.step, 16u);
  EXPECT_EQ(first_reached_step(curve.for_eta(1.0), kDefaultReachedThreshold), std::optional<std::size_t>{13});
}

TEST(TargetCurve, LingeringAdvantageAtStep22) {
  const auto curve = target_curve(six_layer_trace());
  EXPECT_NEAR(curve.for_eta(0.9)[22] - curve.for_eta(1.0)[22], 0.0294, 0.01);
  for (std::size_t t = 21; t <= 27; ++t) EXPECT_GT(curve.for_eta(0.9)[t], curve.for_eta(1.0)[t]) << "t=" << t;
}

TEST(TargetCurve, SingleStepTraceGivesSingleColumnPair) {
  ExperimentConfig cfg;
  cfg.graph = GluedTreesSpec{2};
  cfg.steps = 1;
  cfg.etas = {1.0};
  const auto curve = target_curve(run_walk(cfg));
  ASSERT_EQ(curve.probability.size(), 1u);
  EXPECT_EQ(curve.probability[0].size(), 2u);  // t = 0 and t = 1
}

TEST(EtaScan, StepSixteenDecreasesWithEta) {
  const auto scan = eta_scan(GluedTreesSpec{6}, {16, 22}, kDefaultEtaGrid);
  ASSERT_EQ(scan.probability.size(), 2u);
  const auto& p16 = scan.probability[0];
  for (std::size_t i = 1; i < p16.size(); ++i) EXPECT_LT(p16[i], p16[i - 1]);
  const auto& p22 = scan.probability[1];
  const auto best = std::max_element(p22.begin(), p22.end()) - p22.begin();
  EXPECT_DOUBLE_EQ(scan.etas[static_cast<std::size_t>(best)], 0.9);
  EXPECT_GT(p22[static_cast<std::size_t>(best)], p22[0]);
}

TEST(EtaScan, IdealOnlyGridEqualsIdealWalk) {
  const auto scan = eta_scan(GluedTreesSpec{6}, {13, 16}, {1.0});
  const auto curve = target_curve(six_layer_trace()).for_eta(1.0);
  EXPECT_EQ(scan.probability[0][0], curve[13]);
  EXPECT_EQ(scan.probability[1][0], curve[16]);
  EXPECT_THROW((void)eta_scan(GluedTreesSpec{6}, {}, {1.0}), std::invalid_argument);
}

TEST(PeakFilter, TargetDominatesAtSixteenForAllEta) {
  for (double eta : kDefaultEtaGrid) {
    const auto peaks = peak_filter(six_layer_trace(), eta, 16);
    ASSERT_FALSE(peaks.empty());
    EXPECT_EQ(peaks.front().vertex, 253u) << "eta " << eta;
    for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_GE(peaks[i - 1].probability, peaks[i].probability);
    for (const auto& vp : peaks) EXPECT_GT(vp.probability, 0.25 * peaks.front().probability);
  }
}

TEST(PeakFilter, StepZeroIsOnlyTheStart) {
  const auto peaks = peak_filter(six_layer_trace(), 0.9, 0);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_EQ(peaks[0].vertex, 0u);
}

TEST(PeakFilter, TargetLeadsFilteredPeaksOnArrivalSteps) {
  for (double eta : kDefaultEtaGrid) {
    for (std::size_t t = 13; t <= 16; ++t) {
      EXPECT_EQ(peak_filter(six_layer_trace(), eta, t).front().vertex, 253u) << "eta " << eta << " t " << t;
    }
  }
}

TEST(Properties, PeakDegradesMonotonically) {
  const auto curve = target_curve(six_layer_trace());
  for (std::size_t i = 1; i < curve.etas.size(); ++i) EXPECT_LE(curve.probability[i][16], curve.probability[i - 1][16]);
}

TEST(Properties, DecoherenceRaisesTroughs) {
  const auto& trace = six_layer_trace();
  const auto& ideal = trace.series_for(1.0).by_step[16];
  const auto& noisy = trace.series_for(0.8).by_step[16];
  double ideal_sum = 0.0, noisy_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t v = 0; v < ideal.size(); ++v) {
    if (ideal[v] < 1e-4) {
      ideal_sum += ideal[v];
      noisy_sum += noisy[v];
      ++count;
    }
  }
  ASSERT_GT(count, 0u);
  EXPECT_GT(noisy_sum / count, ideal_sum / count);
}

TEST(LayerScan, SmallGridShapeAndOrdering) {
  const auto rows = layer_scan(2, 4, {1.0, 0.9});
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].eta, 1.0);
    EXPECT_EQ(rows[i].layers, 2 + i);
    EXPECT_EQ(rows[i + 3].eta, 0.9);
    EXPECT_LE(rows[i].peak_step, layer_scan_window(rows[i].layers));
    EXPECT_GT(rows[i].peak_probability, rows[i + 3].peak_probability);
  }
}

TEST(LayerScan, SixLayersIdealPeak) {
  const auto rows = layer_scan(6, 6, {1.0});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].peak_step, 16u);
  EXPECT_NEAR(rows[0].peak_probability, 0.655, 1e-3);
}

TEST(LayerScan, Errors) {
  EXPECT_THROW((void)layer_scan(4, 8, {}), std::invalid_argument);
  EXPECT_THROW((void)layer_scan(5, 4, {1.0}), std::invalid_argument);
  try {
    (void)layer_scan(4, 12, {0.9});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("memory budget"), std::string::npos);
  }
}

TEST(OptimizeCoin, SixLayersRecoversBeta0638) {
  const auto best = optimize_initial_coin(GluedTreesSpec{6}, 25);
  EXPECT_NEAR(best.beta, 0.638, 0.01);
  EXPECT_NEAR(best.alpha, std::sqrt(1 - 2 * best.beta * best.beta), 1e-15);
  EXPECT_EQ(best.peak_step, 16u);
  const auto zero = optimize_initial_coin(GluedTreesSpec{6}, 25, {0.0});
  EXPECT_EQ(zero.beta, 0.0);
  EXPECT_LT(zero.peak_probability, best.peak_probability);
}

TEST(OptimizeCoin, TiesGoToSmallerBeta) {
  // On one step nothing reaches the target, so every beta ties at zero.
  const auto best = optimize_initial_coin(GluedTreesSpec{3}, 1, {0.3, 0.1, 0.2});
  EXPECT_EQ(best.beta, 0.1);
}

TEST(BetaGrid, SpansClosedInterval) {
  const auto grid = beta_grid(1e-3);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_LE(grid.back(), 1.0 / std::sqrt(2.0));
  EXPECT_EQ(grid.size(), 708u);
}

TEST(Classical, DistributionIsStochasticAndFarBelowQuantum) {
  const auto trace = classical_baseline(GluedTreesSpec{6}, 25);
  ASSERT_EQ(trace.series.size(), 1u);
  EXPECT_FALSE(trace.series[0].eta.has_value());
  const auto& rows = trace.series[0].by_step;
  EXPECT_EQ(rows[0][0], 1.0);
  for (const auto& row : rows) EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);

  // Independent oracle: a dense 254 x 254 transition matrix raised to the 16th power.
  const auto g = build_glued_trees(GluedTreesSpec{6});
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(254, 254);
  for (Vertex v = 0; v < 254; ++v)
    for (Label c = 0; c < 3; ++c) m(static_cast<Eigen::Index>(g.port(v, c).vertex), static_cast<Eigen::Index>(v)) += 1.0 / 3.0;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(254);
  p(0) = 1.0;
  for (int t = 0; t < 16; ++t) p = m * p;
  EXPECT_NEAR(rows[16][253], p(253), 1e-15);
  EXPECT_LT(rows[16][253], 0.655 / 100.0);
}

}  // namespace
}  // namespace gluewalk
