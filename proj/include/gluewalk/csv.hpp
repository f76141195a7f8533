#pragma once

// CSV renderings of experiment results. Probabilities use the shortest
// scientific representation that round-trips; eta uses the shortest general
// one. Output depends only on the values, so identical runs give identical
// bytes.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "gluewalk/experiment.hpp"
#include "gluewalk/walk.hpp"

namespace gluewalk::csv {

[[nodiscard]] inline std::string format_probability(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  if (res.ec != std::errc{}) throw std::runtime_error("float formatting failed");
  return {buf, res.ptr};
}

[[nodiscard]] inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("float formatting failed");
  return {buf, res.ptr};
}

namespace detail {

/// Series indices ordered by eta, largest first.
inline std::vector<std::size_t> eta_descending(const ProbabilityTrace& trace) {
  std::vector<std::size_t> order(trace.series.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trace.series[a].eta.value_or(0.0) > trace.series[b].eta.value_or(0.0);
  });
  return order;
}

}  // namespace detail

/// eta,step,vertex,probability sorted by (eta desc, step, vertex).
[[nodiscard]] inline std::string trace_csv(const ProbabilityTrace& trace) {
  std::string out = "eta,step,vertex,probability\n";
  for (std::size_t i : detail::eta_descending(trace)) {
    const auto& s = trace.series[i];
    const std::string eta = format_real(s.eta.value_or(0.0));
    for (std::size_t t = 0; t < s.by_step.size(); ++t) {
      for (std::size_t v = 0; v < s.by_step[t].size(); ++v) {
        out += eta + ',' + std::to_string(t) + ',' + std::to_string(v) + ',' + format_probability(s.by_step[t][v]) + '\n';
      }
    }
  }
  return out;
}

/// eta,step,probability for the target vertex.
[[nodiscard]] inline std::string target_csv(const ProbabilityTrace& trace) {
  std::string out = "eta,step,probability\n";
  for (std::size_t i : detail::eta_descending(trace)) {
    const auto& s = trace.series[i];
    const std::string eta = format_real(s.eta.value_or(0.0));
    for (std::size_t t = 0; t < s.by_step.size(); ++t) {
      out += eta + ',' + std::to_string(t) + ',' + format_probability(s.by_step[t][trace.target]) + '\n';
    }
  }
  return out;
}

/// step,eta,probability in the scan's step and eta order.
[[nodiscard]] inline std::string eta_scan_csv(const EtaScan& scan) {
  std::string out = "step,eta,probability\n";
  for (std::size_t i = 0; i < scan.steps.size(); ++i) {
    for (std::size_t j = 0; j < scan.etas.size(); ++j) {
      out += std::to_string(scan.steps[i]) + ',' + format_real(scan.etas[j]) + ',' +
             format_probability(scan.probability[i][j]) + '\n';
    }
  }
  return out;
}

[[nodiscard]] inline std::string layer_scan_csv(const std::vector<LayerScanRow>& rows) {
  std::string out = "eta,n,peak_step,peak_probability\n";
  for (const auto& r : rows) {
    out += format_real(r.eta) + ',' + std::to_string(r.layers) + ',' + std::to_string(r.peak_step) + ',' +
           format_probability(r.peak_probability) + '\n';
  }
  return out;
}

[[nodiscard]] inline std::string coin_optimum_csv(std::size_t layers, std::size_t steps, const CoinOptimum& best) {
  return "layers,steps,alpha,beta,peak_step,peak_probability\n" + std::to_string(layers) + ',' + std::to_string(steps) +
         ',' + format_real(best.alpha) + ',' + format_real(best.beta) + ',' + std::to_string(best.peak_step) + ',' +
         format_probability(best.peak_probability) + '\n';
}

/// position,probability over positions reachable at this step count (the
/// other parity is identically zero and omitted).
[[nodiscard]] inline std::string line_walk_csv(const LineDistribution& dist, std::size_t steps) {
  std::string out = "position,probability\n";
  for (long x = dist.first_position; x <= dist.last_position(); ++x) {
    if ((x + static_cast<long>(steps)) % 2 != 0) continue;
    out += std::to_string(x) + ',' + format_probability(dist.at(x)) + '\n';
  }
  return out;
}

/// step,vertex,probability for a single-series trace (classical baseline).
[[nodiscard]] inline std::string classical_csv(const ProbabilityTrace& trace) {
  if (trace.series.size() != 1) throw std::invalid_argument("classical trace must hold exactly one series");
  std::string out = "step,vertex,probability\n";
  const auto& s = trace.series.front();
  for (std::size_t t = 0; t < s.by_step.size(); ++t) {
    for (std::size_t v = 0; v < s.by_step[t].size(); ++v) {
      out += std::to_string(t) + ',' + std::to_string(v) + ',' + format_probability(s.by_step[t][v]) + '\n';
    }
  }
  return out;
}

}  // namespace gluewalk::csv
