#pragma once

// First and second moments of i.i.d. per-cycle vectors, with standard errors
// for sample means and, via the delta method, for smooth functions of them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace daa {

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t n = 0;

  /// (value - mean) / std_err; 0 when both agree exactly.
  double z_score(double value) const {
    const double diff = value - mean;
    if (std_err == 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    return diff / std_err;
  }
};

template <std::size_t N>
class MomentAccumulator {
 public:
  using Vector = std::array<double, N>;

  void add(const Vector& x) noexcept {
    ++count_;
    for (std::size_t i = 0; i < N; ++i) {
      sum_[i] += x[i];
      for (std::size_t j = i; j < N; ++j) cross_[i][j] += x[i] * x[j];
    }
  }

  void merge(const MomentAccumulator& other) noexcept {
    count_ += other.count_;
    for (std::size_t i = 0; i < N; ++i) {
      sum_[i] += other.sum_[i];
      for (std::size_t j = i; j < N; ++j) cross_[i][j] += other.cross_[i][j];
    }
  }

  std::uint64_t count() const noexcept { return count_; }

  Vector means() const noexcept {
    Vector m{};
    for (std::size_t i = 0; i < N; ++i) m[i] = sum_[i] / static_cast<double>(count_);
    return m;
  }

  /// Unbiased sample covariance of components i and j.
  double covariance(std::size_t i, std::size_t j) const noexcept {
    if (count_ < 2) return 0.0;
    if (i > j) std::swap(i, j);
    const double n = static_cast<double>(count_);
    const double c = (cross_[i][j] - sum_[i] * sum_[j] / n) / (n - 1.0);
    return (i == j && c < 0.0) ? 0.0 : c;
  }

  Estimate mean_estimate(std::size_t i) const noexcept {
    const double n = static_cast<double>(count_);
    return {sum_[i] / n, std::sqrt(covariance(i, i) / n), count_};
  }

  /// Estimate of g(means) with gradient `grad` evaluated at the means.
  Estimate function_estimate(double value, const Vector& grad) const noexcept {
    double var = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (grad[i] == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) {
        if (grad[j] == 0.0) continue;
        var += grad[i] * grad[j] * covariance(i, j);
      }
    }
    const double n = static_cast<double>(count_);
    return {value, std::sqrt(std::max(var, 0.0) / n), count_};
  }

  /// Estimate of mean_i / mean_j.
  Estimate ratio_estimate(std::size_t i, std::size_t j) const noexcept {
    const Vector m = means();
    const double r = m[i] / m[j];
    Vector grad{};
    grad[i] += 1.0 / m[j];
    grad[j] -= r / m[j];
    return function_estimate(r, grad);
  }

 private:
  std::uint64_t count_ = 0;
  Vector sum_{};
  std::array<Vector, N> cross_{};
};

}  // namespace daa
