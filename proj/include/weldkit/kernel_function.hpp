#pragma once

#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace weldkit {

/// Positive samples of the kernel function v0 on a grid. When `normalized`
/// is set, the trapezoidal value of int_0^{2pi} dt / v0 equals 2 pi.
class KernelFunction {
 public:
  KernelFunction(CircleGrid grid, std::vector<double> samples, bool normalized = false)
      : grid_(grid), samples_(std::move(samples)), normalized_(normalized) {
    if (static_cast<int>(samples_.size()) != grid_.size()) throw DomainError("KernelFunction: sample count mismatch");
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      if (!(samples_[j] > 0.0)) {
        throw ValidationError("KernelFunction: sample " + std::to_string(j) + " is not positive");
      }
    }
    if (normalized_ && std::abs(normalization_integral() - kTwoPi) > 1e-9) {
      throw ValidationError("KernelFunction: flagged normalized but int dt/v0 != 2 pi");
    }
  }

  /// Rescales v0 so that int dt / v0 = 2 pi.
  static KernelFunction normalize(CircleGrid grid, std::vector<double> samples) {
    double mean_inv = 0.0;
    for (double v : samples) mean_inv += 1.0 / v;
    mean_inv /= static_cast<double>(samples.size());
    for (double& v : samples) v *= mean_inv;
    return {grid, std::move(samples), true};
  }

  const CircleGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double operator[](int j) const { return samples_[j]; }
  int size() const noexcept { return grid_.size(); }
  bool normalized() const noexcept { return normalized_; }

  double normalization_integral() const {
    double s = 0.0;
    for (double v : samples_) s += 1.0 / v;
    return s * grid_.step();
  }

  PeriodicSamples as_samples() const { return PeriodicSamples::from_real(grid_, samples_); }

  /// Second-smallest over largest singular value of the operator the kernel
  /// was extracted from (NaN when v0 came from a closed form).
  double sigma_ratio = std::numeric_limits<double>::quiet_NaN();
  /// Smallest over largest singular value.
  double sigma_min_ratio = std::numeric_limits<double>::quiet_NaN();

 private:
  CircleGrid grid_;
  std::vector<double> samples_;
  bool normalized_;
};

}  // namespace weldkit
