#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>

#include "fbmg/errors.hpp"
#include "fbmg/fbm_sim.hpp"
#include "fbmg/fraccalc.hpp"
#include "fbmg/stats.hpp"
#include "fbmg/transform.hpp"

using namespace fbmg;
using boost::math::tgamma;

namespace {

SampledPath sampled(const TimeGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.t(i));
  return SampledPath(g, std::move(v));
}

double max_abs_diff(const SampledPath& a, const SampledPath& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs(const SampledPath& a) {
  double m = 0;
  for (double v : a.values()) m = std::max(m, std::fabs(v));
  return m;
}

// int_s^t u^{H-3/2} (u-s)^{H-1/2} du by double-exponential quadrature.
double inner_oracle(double t, double s, double h) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double u) { return std::pow(u, h - 1.5) * std::pow(u - s, h - 0.5); }, s, t, 1e-14);
}

double zeta_oracle(double t, double s, double h) {
  const double cH = std::sqrt(2 * h * tgamma(1.5 - h) / (tgamma(h + 0.5) * tgamma(2 - 2 * h)));
  return cH * (std::pow(t / s, h - 0.5) * std::pow(t - s, h - 0.5) - (h - 0.5) * std::pow(s, 0.5 - h) * inner_oracle(t, s, h));
}

}  // namespace

TEST_CASE("kernel w") {
  for (double t : {0.3, 1.0, 2.5}) CHECK(kernel_w(t, t / 3, HurstParam(0.5)) == 1.0);
  const double c1 = 1.0 / (0.6 * tgamma(1.2) * tgamma(0.8));
  const double c1_07 = 1.0 / (1.4 * tgamma(0.8) * tgamma(1.2));
  CHECK(kernel_w(2, 1, HurstParam(0.3)) == doctest::Approx(c1).epsilon(1e-12));
  CHECK(kernel_w(2, 1, HurstParam(0.3)) == doctest::Approx(1.559).epsilon(1e-3));
  CHECK(kernel_w(1, 1 - 1e-9, HurstParam(0.7)) == doctest::Approx(c1_07 * std::pow(1e-9, -0.2) * std::pow(1 - 1e-9, -0.2)).epsilon(1e-6));
  CHECK(std::isfinite(singular_moment(-0.2, -0.2, 1 - 1.0 / 4096, 1, 1)));
}

TEST_CASE("zeta kernel against adaptive quadrature") {
  for (double s = 0.05; s < 1; s += 0.1) CHECK(kernel_zeta(1, s, HurstParam(0.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kernel_zeta(1.0, 0.5, HurstParam(0.7)) == doctest::Approx(zeta_oracle(1.0, 0.5, 0.7)).epsilon(1e-8));
  for (double h : {0.15, 0.3, 0.45, 0.6, 0.7, 0.85})
    for (double t : {0.5, 1.0, 3.0})
      for (double f : {0.001, 0.2, 0.5, 0.9, 0.999}) {
        const double s = f * t;
        CHECK(zeta_inner(t, s, h) == doctest::Approx(inner_oracle(t, s, h)).epsilon(1e-9));
        CHECK(kernel_zeta(t, s, HurstParam(h)) == doctest::Approx(zeta_oracle(t, s, h)).epsilon(1e-8));
        const double a = kernel_zeta(t, s, HurstParam(h), 32), b = kernel_zeta(t, s, HurstParam(h), 64);
        CHECK(std::fabs(a - b) <= 1e-8 * std::fabs(b));
        CHECK(kernel_zeta_checked(t, s, HurstParam(h)).converged);
      }
  CHECK_THROWS_AS(kernel_zeta(1, 1.5, HurstParam(0.3)), DomainError);
}

TEST_CASE("transforms are the identity at H=1/2") {
  const TimeGrid g(300, 2.0);
  const HurstParam H(0.5);
  const SampledPath W = sample_fbm(g, H, {31, 0});
  const auto tb = forward_transform(W, H);
  CHECK(max_abs_diff(tb.Y, W) <= 1e-12);
  CHECK(max_abs_diff(tb.M, W) <= 1e-12);
  CHECK(max_abs_diff(tb.B, W) <= 1e-12);
  CHECK(max_abs_diff(reconstruct_fbm(W, H), W) <= 1e-12);
  const SampledPath xi = sampled(g, [](double t) { return std::cos(3 * t); });
  const auto d = drift_pipeline(xi, H);
  CHECK(max_abs_diff(d.betaPrime, xi) <= 1e-12);
}

TEST_CASE("forward transform is linear") {
  const TimeGrid g(512, 1.0);
  for (double h : {0.3, 0.7}) {
    const HurstParam H(h);
    const auto x = sample_fbm(g, H, {32, 0});
    const auto y = sample_fbm(g, H, {32, 1});
    const auto lhs = forward_transform(linear_combination(2.0, x, -0.5, y), H);
    const auto fx = forward_transform(x, H), fy = forward_transform(y, H);
    CHECK(max_abs_diff(lhs.Y, linear_combination(2.0, fx.Y, -0.5, fy.Y)) <= 1e-12 * max_abs(lhs.Y));
    CHECK(max_abs_diff(lhs.M, linear_combination(2.0, fx.M, -0.5, fy.M)) <= 1e-12 * max_abs(lhs.M));
    CHECK(max_abs_diff(lhs.B, linear_combination(2.0, fx.B, -0.5, fy.B)) <= 1e-12 * max_abs(lhs.B));

    const auto a = sampled(g, [](double t) { return 1 + t; });
    const auto b = sampled(g, [](double t) { return std::sin(5 * t); });
    const auto dl = drift_pipeline(linear_combination(3.0, a, 1.0, b), H);
    const auto ref = linear_combination(3.0, drift_pipeline(a, H).betaPrime, 1.0, drift_pipeline(b, H).betaPrime);
    CHECK(max_abs_diff(dl.betaPrime, ref) <= 1e-12 * max_abs(ref));
  }
  CHECK_THROWS_AS(forward_transform(sampled(g, [](double) { return 1.0; }), HurstParam(0.3)), PreconditionError);
}

TEST_CASE("M from W agrees with M from Y") {
  const TimeGrid g(4096, 1.0);
  for (double h : {0.3, 0.7}) {
    const HurstParam H(h);
    const auto tb = forward_transform(sample_fbm(g, H, {33, 0}), H);
    CHECK(max_abs_diff(m_from_y(tb.Y, H), tb.M) <= 1e-6 * max_abs(tb.M));
  }
}

TEST_CASE("martingale and innovation statistics on a moderate grid") {
  const TimeGrid g(1024, 1.0);
  for (double h : {0.3, 0.7}) {
    const HurstParam H(h);
    std::vector<double> qv(40);
    std::size_t ks = 0;
    for (std::size_t k = 0; k < qv.size(); ++k) {
      const auto tb = forward_transform(sample_fbm(g, H, RngSeed{34, 0}.substream(k)), H);
      double q = 0;
      for (double d : tb.M.increments()) q += d * d;
      qv[k] = q / (H.c2() * H.c2());
      std::vector<double> z = tb.B.increments();
      for (double& v : z) v /= std::sqrt(g.delta());
      ks += stats::ks_standard_normal(z).p_value > 0.01;
    }
    CHECK(std::fabs(stats::mean_estimate(qv).mean - 1.0) < 0.06);
    CHECK(ks >= 36);
  }
}

TEST_CASE("reconstruction") {
  const TimeGrid g(1024, 1.0);
  const auto zero = reconstruct_fbm(SampledPath(g), HurstParam(0.3));
  CHECK(max_abs(zero) == 0.0);
  for (double h : {0.3, 0.7}) {
    const HurstParam H(h);
    double num = 0, den = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      const auto W = sample_fbm(g, H, RngSeed{35, 0}.substream(k));
      const auto R = reconstruct_fbm(forward_transform(W, H).B, H);
      for (std::size_t i = 0; i < W.size(); ++i) {
        num += (R[i] - W[i]) * (R[i] - W[i]);
        den += W[i] * W[i];
      }
    }
    CHECK(std::sqrt(num / den) < 0.05);
  }
}

TEST_CASE("drift pipeline closed forms") {
  const TimeGrid g(4096, 1.0);
  const auto none = drift_pipeline(SampledPath(g), HurstParam(0.3));
  CHECK(max_abs(none.betaPrime) == 0.0);
  CHECK(max_abs(none.mu) == 0.0);
  CHECK(none.l2NormSq == 0.0);
  CHECK_FALSE(none.singular);

  const auto one = sampled(g, [](double) { return 1.0; });
  for (double h : {0.25, 0.5, 0.75}) {
    const HurstParam H(h);
    const auto d = drift_pipeline(one, H);
    const double k = H.c1() * boost::math::beta(1.5 - h, 1.5 - h);
    for (std::size_t i = 1; i <= g.steps(); i += 13)
      CHECK(d.mu[i] == doctest::Approx(k * std::pow(g.t(i), 2 - 2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("eta identity for xi = t at H = 0.6") {
  const TimeGrid g(4096, 1.0);
  const double h = 0.6;
  const auto d = drift_pipeline(sampled(g, [](double t) { return t; }), HurstParam(h));
  const auto rhs = rl_integral_trapezoidal(d.muPrime, h + 0.5);
  const double scale = 2 * h * tgamma(h + 0.5);
  double worst = 0;
  for (std::size_t i = 0; i <= g.steps(); ++i)
    if (g.t(i) >= 0.05) worst = std::max(worst, std::fabs(scale * rhs[i] / d.eta[i] - 1));
  CHECK(worst <= 1e-3);
}

TEST_CASE("l2 norm of beta' is stable under refinement") {
  for (double h : {0.3, 0.7})
    for (int kind = 0; kind < 2; ++kind) {
      auto f = [kind](double t) { return kind == 0 ? 1.0 : t; };
      const double fine = drift_pipeline(sampled(TimeGrid(4096, 1.0), f), HurstParam(h)).l2NormSq;
      const double coarse = drift_pipeline(sampled(TimeGrid(2048, 1.0), f), HurstParam(h)).l2NormSq;
      CHECK(std::isfinite(fine));
      CHECK(std::fabs(fine / coarse - 1) < 0.1);
    }
}

TEST_CASE("semimartingale decomposition") {
  const TimeGrid g(4096, 1.0);
  const HurstParam H(0.3);
  const auto W = sample_fbm(g, H, {36, 0});
  const auto a = decompose_path(W, H), b = forward_transform(W, H);
  CHECK(max_abs_diff(a.B, b.B) == 0.0);
  CHECK(max_abs_diff(a.M, b.M) == 0.0);
  const auto z = decompose_path(SampledPath(g), H);
  CHECK(max_abs(z.Y) + max_abs(z.M) + max_abs(z.B) == 0.0);

  const auto X = linear_combination(1.0, W, 1.0, sampled(g, [](double t) { return t; }));
  const auto beta = integrate_left(drift_pipeline(sampled(g, [](double) { return 1.0; }), H).betaPrime);
  CHECK(max_abs_diff(decompose_path(X, H).B, linear_combination(1.0, b.B, 1.0, beta)) < 1e-2 * max_abs(b.B));
}

TEST_CASE("gamma drift") {
  const TimeGrid g(4096, 1.0);
  const auto path = sampled(g, [](double t) { return t; });
  CHECK(max_abs(gamma_drift(path, StateDrift::zero(), HurstParam(0.3))) == 0.0);
  const auto level = sampled(g, [](double) { return 0.7; });
  CHECK(max_abs(gamma_drift(level, StateDrift::fou(2.0, 0.7), HurstParam(0.3))) == 0.0);

  const double h = 0.7;
  const HurstParam H(h);
  const auto gam = gamma_drift(path, StateDrift::custom([](double) { return 1.0; }, "one"), H);
  const double k = 2 * h * H.c1() / H.cH() * boost::math::beta(1.5 - h, 1.5 - h) * (2 - 2 * h);
  for (std::size_t i = 1; i <= g.steps(); ++i)
    if (g.t(i) >= 0.05) CHECK(gam[i] == doctest::Approx(k * std::pow(g.t(i), 0.5 - h)).epsilon(1e-2));
}

TEST_CASE("state drift") {
  const auto f = StateDrift::fou(0.5, 2.0);
  CHECK(f(1.0) == 0.5);
  CHECK(f.kind() == StateDrift::Kind::fou);
  CHECK(StateDrift::zero()(123.0) == 0.0);
  CHECK(StateDrift::custom([](double x) { return x * x; }, "sq")(3.0) == 9.0);
  CHECK_THROWS_AS(StateDrift::fou(std::nan(""), 0), DomainError);
}
