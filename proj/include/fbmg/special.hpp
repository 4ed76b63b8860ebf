#pragma once

#include <vector>

namespace fbmg::special {

/// Gamma function via the Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 1/2. Relative error is below 1e-13 on (0,3).
double gamma(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Complete Beta function B(p,q), p,q > 0.
double beta(double p, double q);

/// Unregularized lower incomplete Beta B_z(p,q) = int_0^z u^{p-1}(1-u)^{q-1} du,
/// 0 <= z <= 1, p,q > 0. Continued fraction with the usual symmetry switch.
double incomplete_beta(double z, double p, double q);

/// Regularized incomplete Beta I_z(p,q).
double regularized_incomplete_beta(double z, double p, double q);

/// int_{z_lo}^{z_hi} u^{p-1}(1-u)^{q-1} du for 0 <= z_lo <= z_hi <= 1, evaluated
/// on whichever side of 1/2 avoids subtracting two values close to B(p,q).
double beta_interval(double z_lo, double z_hi, double p, double q);

/// Quadrature rule: sum_k weights[k] f(nodes[k]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1,1]
/// (Golub-Welsch). alpha, beta > -1.
QuadratureRule gauss_jacobi(int points, double alpha, double beta);

/// Gauss-Legendre rule on [0,1].
QuadratureRule gauss_legendre01(int points);

/// Gauss rule for int_0^1 v^c f(v) dv, c > -1.
QuadratureRule gauss_jacobi01(int points, double c);

}  // namespace fbmg::special
