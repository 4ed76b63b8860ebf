#include "fbmg/transform.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "fbmg/detail/shared_cache.hpp"
#include "fbmg/fraccalc.hpp"
#include "fbmg/special.hpp"
#include "fbmg/stats.hpp"

namespace fbmg {
namespace {

constexpr const char* kModule = "transform";

struct InnerRules {
  special::QuadratureRule jacobi;    // int_0^1 v^{H-1/2} f(v) dv
  special::QuadratureRule legendre;  // int_0^1 f(v) dv
};

std::shared_ptr<const InnerRules> inner_rules(int nodes, double hurst) {
  using Key = std::pair<int, double>;
  static detail::SharedCache<Key, InnerRules> cache(8);
  return cache.get_or_build(Key{nodes, hurst}, [&] {
    return InnerRules{special::gauss_jacobi01(nodes, hurst - 0.5), special::gauss_legendre01(nodes)};
  });
}

// inner(t,s) = (t-s)^{2H-1} int_0^1 v^c (r+v)^{H-3/2} dv with r = s/(t-s).
// The integrand's only singularity off [0,1] sits at v = -r; panels
// [0,r], [r,2r], [2r,4r], ... keep it at least a panel width away.
double inner_with(double t, double s, double hurst, const InnerRules& rules) {
  const double c = hurst - 0.5;
  const double e = hurst - 1.5;
  const double len = t - s;
  const double r = s / len;
  const double v1 = std::min(1.0, r);
  const auto& gj = rules.jacobi;
  const auto& gl = rules.legendre;

  double acc = 0.0;
  for (std::size_t k = 0; k < gj.nodes.size(); ++k) acc += gj.weights[k] * std::pow(r + v1 * gj.nodes[k], e);
  acc *= std::pow(v1, c + 1.0);

  for (double lo = v1; lo < 1.0;) {
    const double hi = std::min(1.0, 2.0 * lo);
    const double w = hi - lo;
    double panel = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double v = lo + w * gl.nodes[k];
      panel += gl.weights[k] * std::pow(v, c) * std::pow(r + v, e);
    }
    acc += w * panel;
    lo = hi;
  }
  return std::pow(len, 2.0 * hurst - 1.0) * acc;
}

double zeta_with(double t, double s, const HurstParam& hurst, const InnerRules& rules) {
  const double c = hurst.value() - 0.5;
  const double lead = std::pow(t / s, c) * std::pow(t - s, c);
  return hurst.cH() * (lead - c * std::pow(s, -c) * inner_with(t, s, hurst.value(), rules));
}

void check_open_interval(double t, double s) {
  if (!(s > 0.0 && s < t) || !std::isfinite(t))
    throw DomainError(kModule, "kernel needs 0 < s < t");
}

void require_zero_start(const SampledPath& p, const char* what) {
  if (p.front() != 0.0) throw PreconditionError(kModule, std::string(what) + " must start at 0");
}

// Cell averages of s^p over [i, i+1] on the unit grid.
std::vector<double> unit_power_averages(std::size_t n, double p) {
  std::vector<double> out(n);
  const double q = p + 1.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = std::pow(static_cast<double>(i + 1), q);
    out[i] = (next - prev) / q;
    prev = next;
  }
  return out;
}

SampledPath cumulative(const TimeGrid& grid, const std::vector<double>& inc) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < inc.size(); ++i) v[i + 1] = v[i] + inc[i];
  return SampledPath(grid, std::move(v));
}

// Unit-grid cell averages of zeta(j, s) over [i, i+1], packed by row j.
struct ZetaTable {
  std::size_t n = 0;
  std::vector<double> data;
  const double* row(std::size_t j) const { return data.data() + (j - 1) * j / 2; }
};

ZetaTable build_zeta_table(std::size_t n, const HurstParam& hurst) {
  const double h = hurst.value();
  const double c = h - 0.5;
  const auto rules = inner_rules(kZetaNodes, h);
  ZetaTable tab;
  tab.n = n;
  tab.data.resize(n * (n + 1) / 2);
  const double last_power = 1.0 / (h + 0.5);  // int_0^1 u^{H-1/2} du
  const double first_power = 1.0 / (1.5 - h);  // int_0^1 s^{1/2-H} ds
  for (std::size_t j = 1; j <= n; ++j) {
    double* row = tab.data.data() + (j - 1) * j / 2;
    const double t = static_cast<double>(j);
    for (std::size_t i = 0; i + 1 < j; ++i) row[i] = zeta_with(t, static_cast<double>(i) + 0.5, hurst, *rules);
    const double sm = t - 0.5;
    const double inner_last = inner_with(t, sm, h, *rules);
    row[j - 1] = hurst.cH() * (std::pow(t / sm, c) * last_power - c * std::pow(sm, -c) * inner_last);
    if (h > 0.5) {
      // Both power factors of the first cell integrated exactly; the s = 0
      // singularity s^{1/2-H} is otherwise underweighted by the midpoint.
      const double first = std::pow(t, c) * singular_moment(-c, c, 0.0, 1.0, t);
      const double second = first_power * inner_with(t, 0.5, h, *rules);
      row[0] = hurst.cH() * (first - c * second);
    }
  }
  return tab;
}

std::shared_ptr<const ZetaTable> zeta_table(std::size_t n, const HurstParam& hurst) {
  using Key = std::pair<std::size_t, double>;
  static detail::SharedCache<Key, ZetaTable> cache(2);
  return cache.get_or_build(Key{n, hurst.value()}, [&] { return build_zeta_table(n, hurst); });
}

bool blows_up_at_start(const SampledPath& beta) {
  std::vector<double> mags(beta.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(beta[i]);
  return std::fabs(beta[1]) > 1e3 * stats::median(std::move(mags));
}

}  // namespace

double kernel_w(double t, double s, const HurstParam& hurst) {
  const double a = 0.5 - hurst.value();
  if (!(s >= 0.0 && s <= t) || !(t > 0.0)) throw DomainError(kModule, "kernel w needs 0 < s < t");
  if (a < 0.0 && (s == 0.0 || s == t)) throw DomainError(kModule, "kernel w is singular at s = 0 and s = t for H > 1/2");
  if (a == 0.0) return hurst.c1();
  return hurst.c1() * std::pow(s, a) * std::pow(t - s, a);
}

double zeta_inner(double t, double s, double hurst, int nodes) {
  check_open_interval(t, s);
  if (nodes < 8) throw DomainError(kModule, "zeta quadrature needs at least 8 nodes");
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError(kModule, "Hurst exponent must lie in (0,1)");
  return inner_with(t, s, hurst, *inner_rules(nodes, hurst));
}

double kernel_zeta(double t, double s, const HurstParam& hurst, int nodes) {
  check_open_interval(t, s);
  if (nodes < 8) throw DomainError(kModule, "zeta quadrature needs at least 8 nodes");
  if (hurst.is_brownian()) return hurst.cH();
  return zeta_with(t, s, hurst, *inner_rules(nodes, hurst.value()));
}

ZetaEvaluation kernel_zeta_checked(double t, double s, const HurstParam& hurst, int nodes) {
  ZetaEvaluation z;
  z.value = kernel_zeta(t, s, hurst, nodes);
  z.refined = kernel_zeta(t, s, hurst, 2 * nodes);
  z.converged = std::fabs(z.value - z.refined) <= 1e-8 * std::fabs(z.refined);
  return z;
}

TransformBundle forward_transform(const SampledPath& W, const HurstParam& hurst) {
  require_zero_start(W, "source path");
  if (hurst.is_brownian()) return {hurst, W, W, W};

  const TimeGrid& grid = W.grid();
  const std::size_t n = grid.steps();
  const double h = hurst.value();
  const double a = 0.5 - h;
  const double dt = grid.delta();
  const std::vector<double> dW = W.increments();

  // Y
  const std::vector<double> ybar = unit_power_averages(n, a);
  const double yscale = std::pow(dt, a);
  std::vector<double> dY(n);
  for (std::size_t i = 0; i < n; ++i) dY[i] = yscale * ybar[i] * dW[i];

  // M, one kernel row per output node
  const auto table = UnitMomentTable::shared(n, a, a);
  const double mscale = hurst.c1() * std::pow(dt, 2.0 * a);
  std::vector<double> m(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const auto row = table->row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += row[i] * dW[i];
    m[j] = mscale * acc;
  }

  // B
  const std::vector<double> sbar = unit_power_averages(n, -a);
  const double bscale = 2.0 * h / hurst.cH() * std::pow(dt, -a);
  std::vector<double> dB(n);
  for (std::size_t i = 0; i < n; ++i) dB[i] = bscale * sbar[i] * (m[i + 1] - m[i]);

  return {hurst, cumulative(grid, dY), SampledPath(grid, std::move(m)), cumulative(grid, dB)};
}

SampledPath m_from_y(const SampledPath& Y, const HurstParam& hurst) {
  require_zero_start(Y, "Y");
  if (hurst.is_brownian()) return Y;
  const TimeGrid& grid = Y.grid();
  const std::size_t n = grid.steps();
  const double a = 0.5 - hurst.value();
  const double dt = grid.delta();
  const std::vector<double> dY = Y.increments();
  const std::vector<double> ybar = unit_power_averages(n, a);  // int_i^{i+1} u^a du
  const auto table = UnitMomentTable::shared(n, a, a);
  const double scale = hurst.c1() * std::pow(dt, a);
  std::vector<double> m(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const auto row = table->row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += row[i] / ybar[i] * dY[i];
    m[j] = scale * acc;
  }
  return SampledPath(grid, std::move(m));
}

SampledPath reconstruct_fbm(const SampledPath& B, const HurstParam& hurst) {
  require_zero_start(B, "innovation path");
  if (hurst.is_brownian()) return B;
  const TimeGrid& grid = B.grid();
  const std::size_t n = grid.steps();
  const auto tab = zeta_table(n, hurst);
  const std::vector<double> dB = B.increments();
  const double scale = std::pow(grid.delta(), hurst.value() - 0.5);
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double* row = tab->row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += row[i] * dB[i];
    w[j] = scale * acc;
  }
  return SampledPath(grid, std::move(w));
}

DriftBundle drift_pipeline(const SampledPath& xi, const HurstParam& hurst) {
  const TimeGrid& grid = xi.grid();
  const std::size_t n = grid.steps();
  const double h = hurst.value();
  const double dt = grid.delta();

  if (hurst.is_brownian()) {
    SampledPath eta = integrate_left(xi);
    DriftBundle d{hurst, xi, eta, eta, xi, xi, 0.0, false, false};
    for (std::size_t i = 0; i < n; ++i) d.l2NormSq += xi[i] * xi[i] * dt;
    d.singular = blows_up_at_start(d.betaPrime);
    return d;
  }

  const double a = 0.5 - h;

  // eta
  const std::vector<double> ybar = unit_power_averages(n, a);
  const double escale = std::pow(dt, a + 1.0);
  std::vector<double> eta(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) eta[i + 1] = eta[i] + escale * ybar[i] * xi[i];

  // mu
  const auto table = UnitMomentTable::shared(n, a, a);
  const double mscale = hurst.c1() * std::pow(dt, 2.0 * a + 1.0);
  std::vector<double> mu(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const auto row = table->row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += row[i] * xi[i];
    mu[j] = mscale * acc;
  }

  // mu'
  std::vector<double> dmu(n + 1, 0.0);
  bool mu_singular = false;
  if (h < 0.5) {
    // c_1 (1/2-H) int_0^t (t-s)^{-H-1/2} s^{1/2-H} xi_s ds
    const SingularMomentTable mom(grid, a, a - 1.0);
    const double scale = hurst.c1() * a * mom.scale();
    for (std::size_t j = 1; j <= n; ++j) {
      const auto row = mom.unit_row(j);
      double acc = 0.0;
      for (std::size_t i = 0; i < j; ++i) acc += row[i] * xi[i];
      dmu[j] = scale * acc;
    }
  } else {
    // c_1 Gamma(3/2-H) D^{H-1/2} of t^{1/2-H} xi_t
    DerivativeResult d = rl_derivative_weighted(xi, h - 0.5, a);
    const double scale = hurst.c1() * special::gamma(1.5 - h);
    for (std::size_t j = 0; j <= n; ++j) dmu[j] = scale * d.path[j];
    mu_singular = d.singular_at_origin;
  }

  // beta'
  const double bscale = 2.0 * h / hurst.cH();
  std::vector<double> bp(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) bp[j] = bscale * std::pow(grid.t(j), h - 0.5) * dmu[j];
  bp[0] = bp[1];

  DriftBundle out{hurst,
                  xi,
                  SampledPath(grid, std::move(eta)),
                  SampledPath(grid, std::move(mu)),
                  SampledPath(grid, std::move(dmu)),
                  SampledPath(grid, std::move(bp)),
                  0.0,
                  false,
                  mu_singular};
  for (std::size_t i = 0; i < n; ++i) out.l2NormSq += out.betaPrime[i] * out.betaPrime[i] * dt;
  out.singular = blows_up_at_start(out.betaPrime);
  return out;
}

TransformBundle decompose_path(const SampledPath& X, const HurstParam& hurst) { return forward_transform(X, hurst); }

SampledPath integrate_left(const SampledPath& f) {
  const double dt = f.grid().delta();
  std::vector<double> v(f.size(), 0.0);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i + 1] = v[i] + f[i] * dt;
  return SampledPath(f.grid(), std::move(v));
}

StateDrift StateDrift::zero() { return StateDrift(); }

StateDrift StateDrift::fou(double rho, double m) {
  if (!std::isfinite(rho) || !std::isfinite(m)) throw DomainError(kModule, "fOU drift parameters must be finite");
  StateDrift d;
  d.kind_ = Kind::fou;
  d.rho_ = rho;
  d.m_ = m;
  d.name_ = "fou";
  return d;
}

StateDrift StateDrift::custom(std::function<double(double)> fn, std::string name) {
  StateDrift d;
  d.kind_ = Kind::custom;
  d.fn_ = std::move(fn);
  d.name_ = std::move(name);
  return d;
}

double StateDrift::operator()(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::fou:
      return rho_ * (m_ - x);
    case Kind::custom:
      return fn_(x);
  }
  return 0.0;
}

DriftBundle drift_along(const SampledPath& path, const StateDrift& b, const HurstParam& hurst) {
  std::vector<double> xi(path.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = b(path[i]);
  return drift_pipeline(SampledPath(path.grid(), std::move(xi)), hurst);
}

SampledPath gamma_drift(const SampledPath& path, const StateDrift& b, const HurstParam& hurst) {
  return drift_along(path, b, hurst).betaPrime;
}

}  // namespace fbmg
