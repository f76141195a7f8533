#pragma once

// Coined discrete-time walk on a port-labeled graph.
//
// Basis ordering is fixed: |v, c> has index v * k + c. One step is
// U = S (1 (x) C): the coin acts on each vertex's k-block, then the shift
// permutes basis states along the port map.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gluewalk/coin.hpp"
#include "gluewalk/graph.hpp"
#include "gluewalk/parallel.hpp"

namespace gluewalk {

inline constexpr double kNormTolerance = 1e-10;

/// Coin-symmetric starting amplitude used throughout: (alpha, beta, beta).
inline constexpr double kDefaultBeta = 0.638;

struct InitialCondition {
  Vertex start = 0;
  std::vector<Complex> coin;

  void validate(std::size_t degree) const {
    if (coin.size() != degree) {
      throw std::invalid_argument("initial coin has " + std::to_string(coin.size()) + " amplitudes, walk has degree " +
                                  std::to_string(degree));
    }
    double norm2 = 0.0;
    for (const auto& a : coin) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw std::invalid_argument("initial coin amplitudes are not normalized (|phi|^2 = " + std::to_string(norm2) + ")");
    }
  }
};

/// alpha|0> + beta|1> + beta|2> with alpha = sqrt(1 - 2 beta^2), starting at `start`.
[[nodiscard]] inline InitialCondition symmetric_initial_condition(double beta, Vertex start = 0) {
  if (beta < 0.0 || 2.0 * beta * beta > 1.0 + 1e-15) {
    throw std::invalid_argument("beta must lie in [0, 1/sqrt(2)]");
  }
  const double alpha = std::sqrt(std::max(0.0, 1.0 - 2.0 * beta * beta));
  return InitialCondition{start, {alpha, beta, beta}};
}

class PureState {
 public:
  PureState(std::size_t num_vertices, std::size_t degree)
      : num_vertices_(num_vertices), degree_(degree), amplitudes_(num_vertices * degree) {}

  [[nodiscard]] static PureState from(const InitialCondition& init, std::size_t num_vertices, std::size_t degree) {
    init.validate(degree);
    if (init.start >= num_vertices) throw std::invalid_argument("start vertex outside the graph");
    PureState s(num_vertices, degree);
    std::copy(init.coin.begin(), init.coin.end(), s.amplitudes_.begin() + static_cast<std::ptrdiff_t>(init.start * degree));
    return s;
  }

  [[nodiscard]] std::size_t num_vertices() const { return num_vertices_; }
  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }
  [[nodiscard]] std::span<Complex> amplitudes() { return amplitudes_; }
  [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  [[nodiscard]] double norm_squared() const {
    return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                           [](double acc, const Complex& a) { return acc + std::norm(a); });
  }

 private:
  std::size_t num_vertices_;
  std::size_t degree_;
  std::vector<Complex> amplitudes_;
};

/// Dense row-major density matrix over position (x) coin.
class DensityState {
 public:
  DensityState(std::size_t num_vertices, std::size_t degree)
      : num_vertices_(num_vertices), degree_(degree), dim_(num_vertices * degree), rho_(dim_ * dim_) {}

  [[nodiscard]] static DensityState from_pure(const PureState& psi) {
    DensityState rho(psi.num_vertices(), psi.degree());
    const auto a = psi.amplitudes();
    for (std::size_t r = 0; r < rho.dim_; ++r) {
      if (a[r] == Complex{}) continue;
      for (std::size_t c = 0; c < rho.dim_; ++c) rho(r, c) = a[r] * std::conj(a[c]);
    }
    return rho;
  }

  [[nodiscard]] static DensityState from(const InitialCondition& init, std::size_t num_vertices, std::size_t degree) {
    return from_pure(PureState::from(init, num_vertices, degree));
  }

  [[nodiscard]] static DensityState maximally_mixed(std::size_t num_vertices, std::size_t degree) {
    DensityState rho(num_vertices, degree);
    const double w = 1.0 / static_cast<double>(rho.dim_);
    for (std::size_t i = 0; i < rho.dim_; ++i) rho(i, i) = w;
    return rho;
  }

  [[nodiscard]] std::size_t num_vertices() const { return num_vertices_; }
  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }

  Complex& operator()(std::size_t r, std::size_t c) { return rho_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return rho_[r * dim_ + c]; }
  [[nodiscard]] std::span<Complex> row(std::size_t r) { return {rho_.data() + r * dim_, dim_}; }
  [[nodiscard]] std::span<const Complex> row(std::size_t r) const { return {rho_.data() + r * dim_, dim_}; }
  [[nodiscard]] std::span<Complex> elements() { return rho_; }
  [[nodiscard]] std::span<const Complex> elements() const { return rho_; }

  [[nodiscard]] Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest entrywise |rho - rho^dagger|.
  [[nodiscard]] double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = r; c < dim_; ++c) worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
    return worst;
  }

 private:
  std::size_t num_vertices_;
  std::size_t degree_;
  std::size_t dim_;
  std::vector<Complex> rho_;
};

/// The shift S|v,c> = |port(v,c)> as a basis-index permutation. Since the
/// port map of a valid graph is an involution, S is its own inverse.
class ShiftOperator {
 public:
  explicit ShiftOperator(const PortLabeledGraph& graph)
      : num_vertices_(graph.num_vertices()), degree_(graph.degree()), target_(graph.num_vertices() * graph.degree()) {
    if (auto problems = validate(graph); !problems.empty()) {
      throw std::invalid_argument("cannot build shift on invalid graph: " + problems.front().message);
    }
    for (Vertex v = 0; v < num_vertices_; ++v) {
      for (Label c = 0; c < degree_; ++c) {
        const Port& p = graph.port(v, c);
        target_[graph.index(v, c)] = graph.index(p.vertex, p.label);
      }
    }
  }

  [[nodiscard]] std::size_t num_vertices() const { return num_vertices_; }
  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] std::size_t dimension() const { return target_.size(); }
  [[nodiscard]] std::size_t operator()(std::size_t basis_index) const { return target_[basis_index]; }

  void apply(std::span<Complex> v) const {
    for (std::size_t i = 0; i < target_.size(); ++i) {
      if (target_[i] > i) std::swap(v[i], v[target_[i]]);
    }
  }

 private:
  std::size_t num_vertices_;
  std::size_t degree_;
  std::vector<std::size_t> target_;
};

[[nodiscard]] inline ShiftOperator shift_operator(const PortLabeledGraph& graph) { return ShiftOperator(graph); }

/// U = S (1 (x) C) on a fixed graph, applied to either representation without
/// ever forming U.
class WalkOperator {
 public:
  WalkOperator(const PortLabeledGraph& graph, CoinOperator coin) : shift_(graph), coin_(std::move(coin)) {
    if (coin_.dimension() != shift_.degree()) {
      throw std::invalid_argument("coin dimension " + std::to_string(coin_.dimension()) + " does not match graph degree " +
                                  std::to_string(shift_.degree()));
    }
  }

  [[nodiscard]] const ShiftOperator& shift() const { return shift_; }
  [[nodiscard]] const CoinOperator& coin() const { return coin_; }

  void step(PureState& psi) const {
    check(psi.num_vertices(), psi.degree());
    const std::size_t k = coin_.dimension();
    std::vector<Complex> block(k);
    auto amps = psi.amplitudes();
    for (std::size_t base = 0; base < amps.size(); base += k) {
      std::copy_n(amps.begin() + static_cast<std::ptrdiff_t>(base), k, block.begin());
      for (std::size_t i = 0; i < k; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += coin_(i, j) * block[j];
        amps[base + i] = acc;
      }
    }
    shift_.apply(amps);
  }

  /// rho <- U rho U^dagger in place: coin on row blocks, row swaps, then per
  /// row the conjugate coin on column blocks and column swaps.
  void step(DensityState& rho, unsigned threads = 1) const {
    check(rho.num_vertices(), rho.degree());
    const std::size_t k = coin_.dimension();
    const std::size_t dim = rho.dimension();

    parallel_for(rho.num_vertices(), threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<Complex> block(k);
      for (std::size_t v = lo; v < hi; ++v) {
        const std::size_t base = v * k;
        for (std::size_t col = 0; col < dim; ++col) {
          for (std::size_t j = 0; j < k; ++j) block[j] = rho(base + j, col);
          for (std::size_t i = 0; i < k; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += coin_(i, j) * block[j];
            rho(base + i, col) = acc;
          }
        }
      }
    });

    parallel_for(dim, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        const std::size_t partner = shift_(r);
        if (partner > r) std::swap_ranges(rho.row(r).begin(), rho.row(r).end(), rho.row(partner).begin());
      }
    });

    parallel_for(dim, threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<Complex> block(k);
      for (std::size_t r = lo; r < hi; ++r) {
        auto row = rho.row(r);
        for (std::size_t base = 0; base < dim; base += k) {
          std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(base), k, block.begin());
          for (std::size_t i = 0; i < k; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += block[j] * std::conj(coin_(i, j));
            row[base + i] = acc;
          }
        }
        shift_.apply(row);
      }
    });
  }

 private:
  void check(std::size_t num_vertices, std::size_t degree) const {
    if (num_vertices != shift_.num_vertices() || degree != shift_.degree()) {
      throw std::invalid_argument("state of " + std::to_string(num_vertices) + " vertices x degree " +
                                  std::to_string(degree) + " does not match walk on " +
                                  std::to_string(shift_.num_vertices()) + " x " + std::to_string(shift_.degree()));
    }
  }

  ShiftOperator shift_;
  CoinOperator coin_;
};

[[nodiscard]] inline PureState step_pure(PureState psi, const CoinOperator& coin, const PortLabeledGraph& graph) {
  WalkOperator(graph, coin).step(psi);
  return psi;
}

[[nodiscard]] inline DensityState step_density(DensityState rho, const CoinOperator& coin, const PortLabeledGraph& graph,
                                               unsigned threads = 1) {
  WalkOperator(graph, coin).step(rho, threads);
  return rho;
}

/// P(v) = sum_c |psi(v,c)|^2.
[[nodiscard]] inline std::vector<double> measure_positions(const PureState& psi) {
  std::vector<double> p(psi.num_vertices(), 0.0);
  const std::size_t k = psi.degree();
  for (std::size_t i = 0; i < psi.dimension(); ++i) p[i / k] += std::norm(psi[i]);
  return p;
}

/// P(v) = sum_c <v,c|rho|v,c>, negatives from roundoff clamped to 0.
[[nodiscard]] inline std::vector<double> measure_positions(const DensityState& rho) {
  std::vector<double> p(rho.num_vertices(), 0.0);
  const std::size_t k = rho.degree();
  for (std::size_t i = 0; i < rho.dimension(); ++i) p[i / k] += rho(i, i).real();
  for (auto& x : p) x = std::max(x, 0.0);
  return p;
}

/// Position distribution of a walk on the integer line.
struct LineDistribution {
  long first_position = 0;
  std::vector<double> probability;  // probability[i] is P(first_position + i)

  [[nodiscard]] long last_position() const { return first_position + static_cast<long>(probability.size()) - 1; }

  [[nodiscard]] double at(long position) const {
    if (position < first_position || position > last_position()) return 0.0;
    return probability[static_cast<std::size_t>(position - first_position)];
  }

  [[nodiscard]] double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < probability.size(); ++i) m += probability[i] * static_cast<double>(first_position + static_cast<long>(i));
    return m;
  }

  [[nodiscard]] double standard_deviation() const {
    const double mu = mean();
    double var = 0.0;
    for (std::size_t i = 0; i < probability.size(); ++i) {
      const double x = static_cast<double>(first_position + static_cast<long>(i)) - mu;
      var += probability[i] * x * x;
    }
    return std::sqrt(var);
  }
};

/// Hadamard walk on Z started at the origin: coin 0 steps left, coin 1 steps
/// right. Returns P over positions -steps..steps.
[[nodiscard]] inline LineDistribution hadamard_line_walk(std::size_t steps, const InitialCondition& initial) {
  initial.validate(2);
  if (initial.start != 0) throw std::invalid_argument("line walk starts at the origin (start must be 0)");
  const CoinOperator h = hadamard_coin();
  const std::size_t width = 2 * steps + 1;
  const std::size_t origin = steps;
  std::vector<Complex> left(width), right(width), next_left(width), next_right(width);
  left[origin] = initial.coin[0];
  right[origin] = initial.coin[1];
  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(next_left.begin(), next_left.end(), Complex{});
    std::fill(next_right.begin(), next_right.end(), Complex{});
    for (std::size_t p = 0; p < width; ++p) {
      if (left[p] == Complex{} && right[p] == Complex{}) continue;
      const Complex c0 = h(0, 0) * left[p] + h(0, 1) * right[p];
      const Complex c1 = h(1, 0) * left[p] + h(1, 1) * right[p];
      next_left[p - 1] += c0;
      next_right[p + 1] += c1;
    }
    left.swap(next_left);
    right.swap(next_right);
  }
  LineDistribution out{-static_cast<long>(steps), std::vector<double>(width)};
  for (std::size_t p = 0; p < width; ++p) out.probability[p] = std::norm(left[p]) + std::norm(right[p]);
  return out;
}

}  // namespace gluewalk
