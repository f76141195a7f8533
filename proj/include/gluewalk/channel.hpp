#pragma once

// Phase damping on the coin subsystem.
//
// With eta = exp(-gamma tau) in [0, 1], the channel multiplies every density
// matrix element <x,l|rho|y,l'> by eta^((l - l')^2) and leaves position
// indices alone. apply_closed_form is the production path; the truncated
// Kraus sum exists to cross-check it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gluewalk/parallel.hpp"
#include "gluewalk/walk.hpp"

namespace gluewalk {

inline constexpr std::size_t kDefaultKrausTerms = 40;

class PhaseDampingChannel {
 public:
  PhaseDampingChannel(double eta, std::size_t coin_dimension) : eta_(eta), dim_(coin_dimension) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("phase damping strength eta must lie in [0, 1], got " + std::to_string(eta));
    }
    if (coin_dimension == 0) throw std::invalid_argument("coin dimension must be positive");
  }

  /// eta = exp(-rate * duration).
  [[nodiscard]] static PhaseDampingChannel from_rate(double rate, double duration, std::size_t coin_dimension) {
    if (rate < 0.0 || duration < 0.0) throw std::invalid_argument("dephasing rate and duration must be non-negative");
    return PhaseDampingChannel(std::exp(-rate * duration), coin_dimension);
  }

  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] std::size_t coin_dimension() const { return dim_; }
  /// gamma * tau = -ln eta; infinite at eta = 0.
  [[nodiscard]] double rate_times_duration() const {
    return eta_ == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(eta_);
  }

  /// eta^((l - l')^2) with 0^0 = 1, row-major over (l, l').
  [[nodiscard]] std::vector<double> coherence_factors() const {
    std::vector<double> f(dim_ * dim_);
    for (std::size_t l = 0; l < dim_; ++l) {
      for (std::size_t lp = 0; lp < dim_; ++lp) {
        const double d = static_cast<double>(l) - static_cast<double>(lp);
        f[l * dim_ + lp] = (l == lp) ? 1.0 : std::pow(eta_, d * d);
      }
    }
    return f;
  }

  /// Diagonal (in the coin basis) of the Kraus operator
  /// E_m = sum_l (l sqrt(-2 ln eta))^m eta^(l^2) / sqrt(m!)  I_p (x) |l><l|.
  /// Undefined at eta = 0.
  [[nodiscard]] std::vector<double> kraus_diagonal(std::size_t m) const {
    require_kraus_domain();
    const double s = std::sqrt(-2.0 * std::log(eta_));
    std::vector<double> d(dim_);
    for (std::size_t l = 0; l < dim_; ++l) {
      const double x = static_cast<double>(l) * s;
      // x^m / sqrt(m!) accumulated factor by factor to stay finite for large m.
      double term = 1.0;
      for (std::size_t j = 1; j <= m; ++j) term *= x / std::sqrt(static_cast<double>(j));
      d[l] = term * std::pow(eta_, static_cast<double>(l * l));
    }
    return d;
  }

  void require_kraus_domain() const {
    if (eta_ <= 0.0) throw std::domain_error("Kraus form of phase damping is undefined at eta = 0");
  }

 private:
  double eta_;
  std::size_t dim_;
};

namespace detail {

inline void check_channel_fits(const DensityState& rho, const PhaseDampingChannel& ch) {
  if (rho.degree() != ch.coin_dimension()) {
    throw std::invalid_argument("channel acts on coin dimension " + std::to_string(ch.coin_dimension()) +
                                " but state has coin dimension " + std::to_string(rho.degree()));
  }
}

}  // namespace detail

/// rho_{x l, y l'} <- eta^((l - l')^2) rho_{x l, y l'}, in place.
inline void apply_closed_form_inplace(DensityState& rho, const PhaseDampingChannel& ch, unsigned threads = 1) {
  detail::check_channel_fits(rho, ch);
  if (ch.eta() == 1.0) return;
  const std::size_t k = rho.degree();
  const std::size_t dim = rho.dimension();
  const auto factors = ch.coherence_factors();
  parallel_for(dim, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      const double* f = factors.data() + (r % k) * k;
      auto row = rho.row(r);
      for (std::size_t c = 0; c < dim; ++c) row[c] *= f[c % k];
    }
  });
}

[[nodiscard]] inline DensityState apply_closed_form(DensityState rho, const PhaseDampingChannel& ch, unsigned threads = 1) {
  apply_closed_form_inplace(rho, ch, threads);
  return rho;
}

/// sum_{m < terms} E_m rho E_m^dagger.
[[nodiscard]] inline DensityState apply_kraus_truncated(const DensityState& rho, const PhaseDampingChannel& ch,
                                                        std::size_t terms = kDefaultKrausTerms) {
  detail::check_channel_fits(rho, ch);
  ch.require_kraus_domain();
  if (terms < 1) throw std::invalid_argument("Kraus sum needs at least one term");
  const std::size_t k = rho.degree();
  const std::size_t dim = rho.dimension();
  DensityState out(rho.num_vertices(), k);
  for (std::size_t m = 0; m < terms; ++m) {
    const auto e = ch.kraus_diagonal(m);
    for (std::size_t r = 0; r < dim; ++r) {
      const double er = e[r % k];
      if (er == 0.0) continue;
      for (std::size_t c = 0; c < dim; ++c) out(r, c) += er * rho(r, c) * e[c % k];
    }
  }
  return out;
}

/// max |(sum_{m < terms} E_m^dagger E_m) - 1| over entries. The operators are
/// diagonal, so only the diagonal can deviate.
[[nodiscard]] inline double kraus_completeness_defect(const PhaseDampingChannel& ch, std::size_t terms = kDefaultKrausTerms) {
  ch.require_kraus_domain();
  std::vector<double> sum(ch.coin_dimension(), 0.0);
  for (std::size_t m = 0; m < terms; ++m) {
    const auto e = ch.kraus_diagonal(m);
    for (std::size_t l = 0; l < e.size(); ++l) sum[l] += e[l] * e[l];
  }
  double worst = 0.0;
  for (double s : sum) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

}  // namespace gluewalk
