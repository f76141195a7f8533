#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gluewalk {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTolerance = 1e-12;

/// Square unitary acting on the k-dimensional coin space, row-major.
class CoinOperator {
 public:
  [[nodiscard]] std::size_t dimension() const { return k_; }
  [[nodiscard]] const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * k_ + col]; }
  [[nodiscard]] const std::vector<Complex>& entries() const { return entries_; }

  /// Largest entrywise |C^dagger C - 1|.
  [[nodiscard]] double unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        Complex acc = 0.0;
        for (std::size_t r = 0; r < k_; ++r) acc += std::conj((*this)(r, i)) * (*this)(r, j);
        worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
      }
    }
    return worst;
  }

  friend CoinOperator custom_coin(std::size_t k, std::vector<Complex> entries);

 private:
  CoinOperator(std::size_t k, std::vector<Complex> entries) : k_(k), entries_(std::move(entries)) {}

  std::size_t k_ = 0;
  std::vector<Complex> entries_;
};

class NonUnitaryCoin : public std::invalid_argument {
 public:
  explicit NonUnitaryCoin(double defect)
      : std::invalid_argument(message(defect)), defect_(defect) {}
  [[nodiscard]] double defect() const { return defect_; }

 private:
  static std::string message(double defect) {
    std::ostringstream msg;
    msg << "coin is not unitary: max |C^dagger C - 1| entry is " << defect;
    return msg.str();
  }
  double defect_;
};

/// Wraps a row-major k x k matrix after checking unitarity to 1e-12.
[[nodiscard]] inline CoinOperator custom_coin(std::size_t k, std::vector<Complex> entries) {
  if (k == 0) throw std::invalid_argument("coin dimension must be positive");
  if (entries.size() != k * k) {
    throw std::invalid_argument("coin needs " + std::to_string(k * k) + " entries, got " +
                                std::to_string(entries.size()));
  }
  CoinOperator coin(k, std::move(entries));
  if (const double defect = coin.unitarity_defect(); defect > kUnitarityTolerance) throw NonUnitaryCoin(defect);
  return coin;
}

/// Diagonal a, off-diagonal b. Unitary iff |a|^2 + (k-1)|b|^2 = 1 and
/// 2 Re(a b*) + (k-2)|b|^2 = 0.
[[nodiscard]] inline CoinOperator grover_family_coin(std::size_t k, Complex a, Complex b) {
  std::vector<Complex> e(k * k, b);
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = a;
  return custom_coin(k, std::move(e));
}

/// (2/k) J - 1: a = 2/k - 1, b = 2/k.
[[nodiscard]] inline CoinOperator grover_coin(std::size_t k) {
  if (k < 2) throw std::invalid_argument("Grover coin needs dimension k >= 2");
  const double kd = static_cast<double>(k);
  return grover_family_coin(k, 2.0 / kd - 1.0, 2.0 / kd);
}

[[nodiscard]] inline CoinOperator hadamard_coin() {
  const double s = 1.0 / std::sqrt(2.0);
  return custom_coin(2, {s, s, s, -s});
}

[[nodiscard]] inline CoinOperator identity_coin(std::size_t k) {
  std::vector<Complex> e(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = 1.0;
  return custom_coin(k, std::move(e));
}

}  // namespace gluewalk
