#include "fbmg/core.hpp"

#include <cmath>
#include <string>

#include "fbmg/special.hpp"

namespace fbmg {

NorrosConstants norros_constants(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("core", "Hurst exponent must lie in (0,1)");
  if (hurst == 0.5) return {1.0, 1.0, 1.0};
  using special::gamma;
  const double h = hurst;
  const double g_a = gamma(1.5 - h);
  const double g_b = gamma(h + 0.5);
  const double cH = std::sqrt(2.0 * h * g_a / (g_b * gamma(2.0 - 2.0 * h)));
  const double c1 = 1.0 / (2.0 * h * g_a * g_b);
  const double c2 = cH / (2.0 * h * std::sqrt(2.0 - 2.0 * h));
  return {cH, c1, c2};
}

HurstParam::HurstParam(double hurst) : h_(hurst), constants_(norros_constants(hurst)) {
  if (!std::isfinite(constants_.cH) || !std::isfinite(constants_.c1) || !(constants_.cH > 0.0) ||
      !(constants_.c1 > 0.0) || !(constants_.c2 > 0.0))
    throw DomainError("core", "Norros constants are not finite at H = " + std::to_string(hurst));
}

TimeGrid::TimeGrid(std::size_t steps, double horizon) : n_(steps), horizon_(horizon) {
  if (steps == 0) throw DomainError("core", "grid needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("core", "grid horizon must be positive");
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = t(i);
  return out;
}

SampledPath::SampledPath(const TimeGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

SampledPath::SampledPath(const TimeGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw PreconditionError("core", "path has " + std::to_string(values_.size()) + " values for a grid of " +
                                        std::to_string(grid_.size()) + " nodes");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw PreconditionError("core", "non-finite path value at node " + std::to_string(i));
}

std::vector<double> SampledPath::increments() const {
  std::vector<double> d(values_.size() - 1);
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) d[i] = values_[i + 1] - values_[i];
  return d;
}

SampledPath SampledPath::shifted(double offset) const {
  std::vector<double> v(values_);
  for (double& x : v) x += offset;
  return SampledPath(grid_, std::move(v));
}

SampledPath SampledPath::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return SampledPath(grid_, std::move(v));
}

void require_same_grid(const SampledPath& a, const SampledPath& b, const char* module) {
  if (!(a.grid() == b.grid())) throw GridMismatchError(module, "paths live on different grids");
}

SampledPath linear_combination(double a, const SampledPath& x, double b, const SampledPath& y) {
  require_same_grid(x, y, "core");
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * x[i] + b * y[i];
  return SampledPath(x.grid(), std::move(v));
}

double fbm_covariance(double s, double t, double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("core", "Hurst exponent must lie in (0,1)");
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("core", "fBm covariance needs nonnegative times");
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::fabs(t - s), e));
}

}  // namespace fbmg
