#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fbmg/core.hpp"

namespace fbmg {

/// int_lo^hi s^a (t-s)^b ds for a, b > -1 and 0 <= lo < hi <= t, in closed
/// form through the incomplete Beta function.
double singular_moment(double a, double b, double lo, double hi, double t);

/// Unit-grid moments int_i^{i+1} u^a (j-u)^b du for 0 <= i < j <= n, packed
/// row by row. Independent of the horizon, so one table serves every grid
/// with the same step count.
class UnitMomentTable {
 public:
  UnitMomentTable(std::size_t steps, double a, double b);

  /// Shared, cached instance.
  static std::shared_ptr<const UnitMomentTable> shared(std::size_t steps, double a, double b);

  std::size_t steps() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// Moments of output node j (1 <= j <= steps) over cells 0..j-1.
  std::span<const double> row(std::size_t j) const noexcept {
    return {data_.data() + (j - 1) * j / 2, j};
  }

 private:
  std::size_t n_;
  double a_;
  double b_;
  std::vector<double> data_;
};

/// Per-cell integrals int_{t_i}^{t_{i+1}} s^a (t_j - s)^b ds on a TimeGrid.
class SingularMomentTable {
 public:
  SingularMomentTable(const TimeGrid& grid, double a, double b);

  const TimeGrid& grid() const noexcept { return grid_; }
  double a() const noexcept { return unit_->a(); }
  double b() const noexcept { return unit_->b(); }

  /// Moment over cell i for output node j, i < j.
  double value(std::size_t j, std::size_t i) const noexcept { return scale_ * unit_->row(j)[i]; }

  /// Unit-grid row; multiply by scale() for physical moments.
  std::span<const double> unit_row(std::size_t j) const noexcept { return unit_->row(j); }
  double scale() const noexcept { return scale_; }

 private:
  TimeGrid grid_;
  std::shared_ptr<const UnitMomentTable> unit_;
  double scale_;  // delta^{a+b+1}
};

/// Riemann-Liouville integral I^beta f on the grid of f, beta in (0,1].
/// Product integration: f piecewise constant at left endpoints, kernel
/// (t-s)^{beta-1}/Gamma(beta) integrated exactly per cell.
SampledPath rl_integral(const SampledPath& f, double beta);

/// (1/Gamma(beta)) int_0^t (t-s)^{beta-1} s^weight f(s) ds, with the weight
/// factor folded into the exact kernel moments. beta in (0,1], weight > -1.
SampledPath rl_integral_weighted(const SampledPath& f, double beta, double weight);

/// I^beta f for any beta > 0 with f linear between nodes (product
/// trapezoidal rule). Second order for smooth f.
SampledPath rl_integral_trapezoidal(const SampledPath& f, double beta);

struct DerivativeResult {
  SampledPath path;
  /// Output grows like a negative power of t at the origin; the t_0 value
  /// is then a one-sided extrapolation, not a limit.
  bool singular_at_origin = false;
};

/// Three-point differentiation: central in the interior, second-order
/// one-sided at both ends. Needs at least two steps.
SampledPath differentiate(const SampledPath& h);

/// D^beta f = d/dt I^{1-beta} f for beta in (0,1). Requires f(t_0) == 0.
DerivativeResult rl_derivative(const SampledPath& f, double beta);

/// d/dt of rl_integral_weighted(f, 1-beta, weight). No condition on f(t_0):
/// the singular weight is integrated exactly.
DerivativeResult rl_derivative_weighted(const SampledPath& f, double beta, double weight);

/// g(t) = t^{-alpha} f(t) for t > 0, g(0) = 0. Requires f(t_0) == 0.
SampledPath holder_rescale(const SampledPath& f, double alpha);

/// Slope of log max_i |f(t_{i+k}) - f(t_i)| against log(k delta) over dyadic
/// lags k = 1, 2, 4, ..., n/4. Needs n >= 64; throws DegenerateError on a
/// constant path.
double empirical_holder_exponent(const SampledPath& f);

}  // namespace fbmg
