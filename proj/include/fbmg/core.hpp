#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fbmg/errors.hpp"

namespace fbmg {

/// Constants of the fBm kernel transforms. All three equal 1 at H = 1/2.
struct NorrosConstants {
  double cH;
  double c1;
  double c2;
};

/// c_H, c_1, c_2 for a Hurst exponent in (0,1). Throws DomainError otherwise.
NorrosConstants norros_constants(double hurst);

/// Validated Hurst exponent together with its derived constants.
class HurstParam {
 public:
  explicit HurstParam(double hurst);

  double value() const noexcept { return h_; }
  double cH() const noexcept { return constants_.cH; }
  double c1() const noexcept { return constants_.c1; }
  double c2() const noexcept { return constants_.c2; }
  const NorrosConstants& constants() const noexcept { return constants_; }

  /// True when H == 1/2 exactly; every kernel transform is then the identity.
  bool is_brownian() const noexcept { return h_ == 0.5; }

  friend bool operator==(const HurstParam& a, const HurstParam& b) noexcept { return a.h_ == b.h_; }

 private:
  double h_;
  NorrosConstants constants_;
};

/// Uniform partition t_i = i*T/n of [0,T].
class TimeGrid {
 public:
  TimeGrid(std::size_t steps, double horizon);

  std::size_t steps() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ + 1; }
  double horizon() const noexcept { return horizon_; }
  double delta() const noexcept { return horizon_ / static_cast<double>(n_); }

  /// Node time. t(0) == 0 and t(steps()) == horizon() exactly.
  double t(std::size_t i) const noexcept {
    return horizon_ * static_cast<double>(i) / static_cast<double>(n_);
  }
  std::vector<double> nodes() const;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
    return a.n_ == b.n_ && a.horizon_ == b.horizon_;
  }

 private:
  std::size_t n_;
  double horizon_;
};

/// Real-valued function sampled at every node of a TimeGrid.
class SampledPath {
 public:
  /// Zero path.
  explicit SampledPath(const TimeGrid& grid);
  /// Throws PreconditionError on a length mismatch or a non-finite value.
  SampledPath(const TimeGrid& grid, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }
  std::span<const double> values() const noexcept { return values_; }

  /// Increments x_{i+1} - x_i, length grid().steps().
  std::vector<double> increments() const;

  /// Copy with a constant added to every value.
  SampledPath shifted(double offset) const;
  SampledPath scaled(double factor) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// Throws GridMismatchError naming `module` when the grids differ.
void require_same_grid(const SampledPath& a, const SampledPath& b, const char* module);

/// a*x + b*y on a common grid.
SampledPath linear_combination(double a, const SampledPath& x, double b, const SampledPath& y);

/// E[W^H_s W^H_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 for s,t >= 0.
double fbm_covariance(double s, double t, double hurst);

}  // namespace fbmg
