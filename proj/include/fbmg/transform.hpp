#pragma once

#include <functional>
#include <string>

#include "fbmg/core.hpp"

namespace fbmg {

/// w(t,s) = c_1 s^{1/2-H} (t-s)^{1/2-H} for 0 < s < t.
double kernel_w(double t, double s, const HurstParam& hurst);

inline constexpr int kZetaNodes = 16;

/// int_s^t u^{H-3/2} (u-s)^{H-1/2} du, by Gauss-Jacobi in v after u = s + v(t-s).
/// `nodes` is the rule size per panel; panels are graded toward v = 0.
double zeta_inner(double t, double s, double hurst, int nodes = kZetaNodes);

/// Reconstruction kernel
/// zeta(t,s) = c_H [ (t/s)^{H-1/2} (t-s)^{H-1/2} - (H-1/2) s^{1/2-H} inner(t,s) ].
double kernel_zeta(double t, double s, const HurstParam& hurst, int nodes = kZetaNodes);

struct ZetaEvaluation {
  double value = 0.0;
  double refined = 0.0;  // same kernel with twice the nodes
  bool converged = true;  // |value - refined| <= 1e-8 |refined|
};

ZetaEvaluation kernel_zeta_checked(double t, double s, const HurstParam& hurst, int nodes = kZetaNodes);

struct TransformBundle {
  HurstParam hurst;
  SampledPath Y;
  SampledPath M;
  SampledPath B;
};

/// Y = int s^{1/2-H} dW, M = int w(t,s) dW, B = (2H/c_H) int s^{H-1/2} dM.
/// Exact kernel averages per cell times integrator increments. W(t_0) must be 0.
TransformBundle forward_transform(const SampledPath& W, const HurstParam& hurst);

/// M rebuilt from Y as c_1 int (t-s)^{1/2-H} dY_s. The kernel on each cell is
/// averaged against s^{1/2-H} ds, the measure that carries dY.
SampledPath m_from_y(const SampledPath& Y, const HurstParam& hurst);

/// W_t = int_0^t zeta(t,s) dB_s. B(t_0) must be 0.
SampledPath reconstruct_fbm(const SampledPath& B, const HurstParam& hurst);

struct DriftBundle {
  HurstParam hurst;
  SampledPath xi;
  SampledPath eta;
  SampledPath mu;
  SampledPath muPrime;
  SampledPath betaPrime;
  double l2NormSq = 0.0;
  /// |beta'(t_1)| exceeds 1e3 times the median of |beta'|.
  bool singular = false;
  /// mu' grows like a negative power of t at the origin (H > 1/2 branch).
  bool muPrimeSingular = false;
};

/// xi -> eta -> mu -> mu' -> beta'. Linear in xi.
DriftBundle drift_pipeline(const SampledPath& xi, const HurstParam& hurst);

/// forward_transform applied to an observed path; X(t_0) must be 0.
TransformBundle decompose_path(const SampledPath& X, const HurstParam& hurst);

/// beta_t = sum_{i<j} beta'(t_i) delta.
SampledPath integrate_left(const SampledPath& f);

/// State-dependent drift b(x).
class StateDrift {
 public:
  enum class Kind { zero, fou, custom };

  static StateDrift zero();
  /// b(x) = rho (m - x).
  static StateDrift fou(double rho, double m);
  static StateDrift custom(std::function<double(double)> fn, std::string name);

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }
  double level() const noexcept { return m_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Kind kind_ = Kind::zero;
  double rho_ = 0.0;
  double m_ = 0.0;
  std::function<double(double)> fn_;
  std::string name_ = "zero";
};

/// b(path) fed through drift_pipeline.
DriftBundle drift_along(const SampledPath& path, const StateDrift& b, const HurstParam& hurst);

/// gamma(t_i) = beta'(t_i) for xi_s = b(path_s).
SampledPath gamma_drift(const SampledPath& path, const StateDrift& b, const HurstParam& hurst);

}  // namespace fbmg
