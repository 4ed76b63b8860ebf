#include "fbmg/special.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <numbers>

#include "fbmg/errors.hpp"

namespace fbmg::special {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double z) {
  // z already shifted by -1
  double acc = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) acc += kLanczosCoef[k] / (z + static_cast<double>(k));
  return acc;
}

// Continued fraction for the incomplete Beta (modified Lentz).
double beta_cf(double z, double p, double q) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = p + q;
  const double qap = p + 1.0;
  const double qam = p - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * z / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (q - m) * z / ((qam + m2) * (p + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(p + m) * (qab + m) * z / ((p + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("special", "incomplete Beta continued fraction did not converge");
}

// B_z(p,q) evaluated directly by the continued fraction; accurate when
// z < (p+1)/(p+q+2).
double incomplete_beta_direct(double z, double p, double q) {
  if (z == 0.0) return 0.0;
  const double front = std::exp(p * std::log(z) + q * std::log1p(-z)) / p;
  return front * beta_cf(z, p, q);
}

bool use_direct(double z, double p, double q) { return z < (p + 1.0) / (p + q + 2.0); }

}  // namespace

double gamma(double x) {
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("special", "log_gamma requires x > 0");
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_series(z));
}

double beta(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("special", "Beta requires p, q > 0");
  if (p + q < 150.0) return gamma(p) * gamma(q) / gamma(p + q);
  return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

double incomplete_beta(double z, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("special", "incomplete Beta requires p, q > 0");
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("special", "incomplete Beta requires 0 <= z <= 1");
  if (z == 1.0) return beta(p, q);
  if (use_direct(z, p, q)) return incomplete_beta_direct(z, p, q);
  return beta(p, q) - incomplete_beta_direct(1.0 - z, q, p);
}

double regularized_incomplete_beta(double z, double p, double q) {
  if (z == 0.0) return 0.0;
  if (z == 1.0) return 1.0;
  if (use_direct(z, p, q)) return incomplete_beta_direct(z, p, q) / beta(p, q);
  return 1.0 - incomplete_beta_direct(1.0 - z, q, p) / beta(p, q);
}

double beta_interval(double z_lo, double z_hi, double p, double q) {
  if (!(0.0 <= z_lo && z_lo <= z_hi && z_hi <= 1.0))
    throw DomainError("special", "beta_interval requires 0 <= z_lo <= z_hi <= 1");
  if (z_lo == z_hi) return 0.0;
  // Mirror u -> 1-u when the interval sits in the upper half so that both
  // endpoint values are small tail integrals.
  if (z_lo >= 0.5) {
    const double hi_tail = z_hi == 1.0 ? 0.0 : incomplete_beta(1.0 - z_hi, q, p);
    return incomplete_beta(1.0 - z_lo, q, p) - hi_tail;
  }
  if (z_hi <= 0.5) return incomplete_beta(z_hi, p, q) - incomplete_beta(z_lo, p, q);
  // Straddles 1/2: split there.
  return (incomplete_beta(0.5, p, q) - incomplete_beta(z_lo, p, q)) +
         (incomplete_beta(0.5, q, p) - (z_hi == 1.0 ? 0.0 : incomplete_beta(1.0 - z_hi, q, p)));
}

QuadratureRule gauss_jacobi(int points, double alpha, double beta_exp) {
  if (points < 1) throw DomainError("special", "Gauss rule needs at least one node");
  if (!(alpha > -1.0) || !(beta_exp > -1.0)) throw DomainError("special", "Jacobi exponents must exceed -1");
  const double ab = alpha + beta_exp;
  Eigen::VectorXd diag(points);
  Eigen::VectorXd sub(points > 1 ? points - 1 : 0);
  for (int k = 0; k < points; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = (k == 0) ? (beta_exp - alpha) / (ab + 2.0) : (beta_exp * beta_exp - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < points; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    const double num = 4.0 * kk * (kk + alpha) * (kk + beta_exp) * (kk + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    sub[k - 1] = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("special", "Golub-Welsch eigensolve failed");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) + log_gamma(beta_exp + 1.0) -
                              log_gamma(ab + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int k = 0; k < points; ++k) {
    rule.nodes[k] = solver.eigenvalues()[k];
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule gauss_legendre01(int points) { return gauss_jacobi01(points, 0.0); }

QuadratureRule gauss_jacobi01(int points, double c) {
  // (1+x)^c on [-1,1] with v = (1+x)/2 gives 2^{c+1} v^c dv.
  QuadratureRule rule = gauss_jacobi(points, 0.0, c);
  const double scale = std::pow(2.0, -(c + 1.0));
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    rule.nodes[k] = 0.5 * (1.0 + rule.nodes[k]);
    rule.weights[k] *= scale;
  }
  return rule;
}

}  // namespace fbmg::special
