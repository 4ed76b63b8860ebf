#include "fbmg/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "fbmg/detail/shared_cache.hpp"
#include "fbmg/special.hpp"
#include "fbmg/stats.hpp"

namespace fbmg {
namespace {

constexpr const char* kModule = "fraccalc";

// Gauss-Legendre order for cells whose nearest kernel singularity is at least
// one cell away; the Bernstein ratio is then >= 3 + sqrt(8).
constexpr int kInteriorNodes = 12;

void check_exponent(double e, const char* name) {
  if (!(e > -1.0)) throw DomainError(kModule, std::string("exponent ") + name + " must exceed -1");
}

// Slope of log|v(t_k)| over k = 1,2,4,..,16 at most -beta/2 means the values
// blow up toward the origin.
bool grows_at_origin(const SampledPath& v, double beta) {
  if (v.grid().steps() < 32) return false;
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k <= 16; k *= 2) {
    const double a = std::fabs(v[k]);
    if (a == 0.0) return false;
    lx.push_back(std::log(v.grid().t(k)));
    ly.push_back(std::log(a));
  }
  return stats::fit_line(lx, ly).slope <= -0.5 * beta;
}

}  // namespace

double singular_moment(double a, double b, double lo, double hi, double t) {
  check_exponent(a, "a");
  check_exponent(b, "b");
  if (!(lo >= 0.0 && lo < hi && hi <= t)) throw DomainError(kModule, "singular_moment needs 0 <= lo < hi <= t");
  if (a == 0.0 && b == 0.0) return hi - lo;
  if (b == 0.0) return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / (a + 1.0);
  if (a == 0.0) return (std::pow(t - lo, b + 1.0) - std::pow(t - hi, b + 1.0)) / (b + 1.0);
  const double zlo = lo / t;
  const double zhi = hi == t ? 1.0 : hi / t;
  return std::pow(t, a + b + 1.0) * special::beta_interval(zlo, zhi, a + 1.0, b + 1.0);
}

UnitMomentTable::UnitMomentTable(std::size_t steps, double a, double b) : n_(steps), a_(a), b_(b) {
  check_exponent(a, "a");
  check_exponent(b, "b");
  if (steps == 0) throw DomainError(kModule, "moment table needs at least one step");
  data_.resize(n_ * (n_ + 1) / 2);

  if (a == 0.0 || b == 0.0) {
    for (std::size_t j = 1; j <= n_; ++j) {
      double* row = data_.data() + (j - 1) * j / 2;
      const double t = static_cast<double>(j);
      for (std::size_t i = 0; i < j; ++i)
        row[i] = singular_moment(a, b, static_cast<double>(i), static_cast<double>(i + 1), t);
    }
    return;
  }

  const special::QuadratureRule gl = special::gauss_legendre01(kInteriorNodes);
  const std::size_t q = gl.nodes.size();
  // left[i*q+k] = (i + x_k)^a, right[m*q+k] = (m - x_k)^b
  std::vector<double> left(n_ * q), right((n_ + 1) * q);
  for (std::size_t i = 1; i < n_; ++i)
    for (std::size_t k = 0; k < q; ++k) left[i * q + k] = gl.weights[k] * std::pow(static_cast<double>(i) + gl.nodes[k], a);
  for (std::size_t m = 2; m <= n_; ++m)
    for (std::size_t k = 0; k < q; ++k) right[m * q + k] = std::pow(static_cast<double>(m) - gl.nodes[k], b);

  for (std::size_t j = 1; j <= n_; ++j) {
    double* row = data_.data() + (j - 1) * j / 2;
    const double t = static_cast<double>(j);
    row[0] = singular_moment(a, b, 0.0, 1.0, t);
    if (j == 1) continue;
    row[j - 1] = singular_moment(a, b, t - 1.0, t, t);
    for (std::size_t i = 1; i + 1 < j; ++i) {
      const double* l = left.data() + i * q;
      const double* r = right.data() + (j - i) * q;
      double acc = 0.0;
      for (std::size_t k = 0; k < q; ++k) acc += l[k] * r[k];
      row[i] = acc;
    }
  }
}

std::shared_ptr<const UnitMomentTable> UnitMomentTable::shared(std::size_t steps, double a, double b) {
  using Key = std::tuple<std::size_t, double, double>;
  static detail::SharedCache<Key, UnitMomentTable> cache(6);
  return cache.get_or_build(Key{steps, a, b}, [&] { return UnitMomentTable(steps, a, b); });
}

SingularMomentTable::SingularMomentTable(const TimeGrid& grid, double a, double b)
    : grid_(grid), unit_(UnitMomentTable::shared(grid.steps(), a, b)), scale_(std::pow(grid.delta(), a + b + 1.0)) {}

SampledPath rl_integral(const SampledPath& f, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError(kModule, "RL integral order must lie in (0,1]");
  const std::size_t n = f.grid().steps();
  // Toeplitz weights (m^beta - (m-1)^beta), m = j - i.
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m)
    w[m] = std::pow(static_cast<double>(m), beta) - std::pow(static_cast<double>(m - 1), beta);
  const double scale = std::pow(f.grid().delta(), beta) / special::gamma(beta + 1.0);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += f[i] * w[j - i];
    out[j] = scale * acc;
  }
  return SampledPath(f.grid(), std::move(out));
}

SampledPath rl_integral_weighted(const SampledPath& f, double beta, double weight) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError(kModule, "RL integral order must lie in (0,1]");
  check_exponent(weight, "weight");
  const SingularMomentTable table(f.grid(), weight, beta - 1.0);
  const double scale = table.scale() / special::gamma(beta);
  const std::size_t n = f.grid().steps();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const auto row = table.unit_row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += f[i] * row[i];
    out[j] = scale * acc;
  }
  return SampledPath(f.grid(), std::move(out));
}

SampledPath rl_integral_trapezoidal(const SampledPath& f, double beta) {
  if (!(beta > 0.0)) throw DomainError(kModule, "RL integral order must be positive");
  const std::size_t n = f.grid().steps();
  // Cell with u = t_j - s in [m-1, m] (unit grid): f(s) interpolates between
  // f_i (u = m) and f_{i+1} (u = m-1).
  std::vector<double> wl(n + 1, 0.0), wr(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    const double u1 = static_cast<double>(m);
    const double u0 = u1 - 1.0;
    const double m0 = (std::pow(u1, beta) - std::pow(u0, beta)) / beta;
    const double m1 = (std::pow(u1, beta + 1.0) - std::pow(u0, beta + 1.0)) / (beta + 1.0);
    wr[m] = u1 * m0 - m1;
    wl[m] = m0 - wr[m];
  }
  const double scale = std::pow(f.grid().delta(), beta) / special::gamma(beta);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += f[i] * wl[j - i] + f[i + 1] * wr[j - i];
    out[j] = scale * acc;
  }
  return SampledPath(f.grid(), std::move(out));
}

SampledPath differentiate(const SampledPath& h) {
  const std::size_t n = h.grid().steps();
  if (n < 2) throw PreconditionError(kModule, "three-point differentiation needs at least two steps");
  const double inv = 1.0 / (2.0 * h.grid().delta());
  std::vector<double> d(n + 1);
  d[0] = (-3.0 * h[0] + 4.0 * h[1] - h[2]) * inv;
  for (std::size_t i = 1; i < n; ++i) d[i] = (h[i + 1] - h[i - 1]) * inv;
  d[n] = (3.0 * h[n] - 4.0 * h[n - 1] + h[n - 2]) * inv;
  return SampledPath(h.grid(), std::move(d));
}

DerivativeResult rl_derivative(const SampledPath& f, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(kModule, "RL derivative order must lie in (0,1)");
  if (f.front() != 0.0) throw PreconditionError(kModule, "RL derivative needs f(t_0) = 0");
  SampledPath d = differentiate(rl_integral(f, 1.0 - beta));
  const bool singular = grows_at_origin(d, beta);
  return {std::move(d), singular};
}

DerivativeResult rl_derivative_weighted(const SampledPath& f, double beta, double weight) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(kModule, "RL derivative order must lie in (0,1)");
  SampledPath d = differentiate(rl_integral_weighted(f, 1.0 - beta, weight));
  const bool singular = grows_at_origin(d, beta);
  return {std::move(d), singular};
}

SampledPath holder_rescale(const SampledPath& f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(kModule, "rescaling exponent must lie in (0,1)");
  if (f.front() != 0.0) throw PreconditionError(kModule, "holder_rescale needs f(t_0) = 0");
  std::vector<double> g(f.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = std::pow(f.grid().t(i), -alpha) * f[i];
  return SampledPath(f.grid(), std::move(g));
}

double empirical_holder_exponent(const SampledPath& f) {
  const std::size_t n = f.grid().steps();
  if (n < 64) throw PreconditionError(kModule, "Holder exponent estimate needs at least 64 steps");
  std::vector<double> lx, ly;
  bool any = false;
  for (std::size_t k = 1; k <= n / 4; k *= 2) {
    double worst = 0.0;
    for (std::size_t i = 0; i + k <= n; ++i) worst = std::max(worst, std::fabs(f[i + k] - f[i]));
    if (worst == 0.0) continue;
    any = true;
    lx.push_back(std::log(static_cast<double>(k) * f.grid().delta()));
    ly.push_back(std::log(worst));
  }
  if (!any) throw DegenerateError(kModule, "path is constant");
  if (lx.size() < 2) throw DegenerateError(kModule, "too few nonzero lags for a slope");
  return stats::fit_line(lx, ly).slope;
}

}  // namespace fbmg
