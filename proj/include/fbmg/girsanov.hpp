#pragma once

#include <cstddef>
#include <functional>

#include "fbmg/core.hpp"
#include "fbmg/fbm_sim.hpp"
#include "fbmg/transform.hpp"

namespace fbmg {

struct DensityReport {
  double logDensity = 0.0;  // itoSum - l2NormSq / 2
  double itoSum = 0.0;      // sum beta'(t_i) (B(t_{i+1}) - B(t_i))
  double l2NormSq = 0.0;    // sum beta'(t_i)^2 delta
  bool singularFlag = false;
};

/// Girsanov exponent with left-endpoint (Ito) sums. B(t_0) must be 0.
DensityReport log_density(const SampledPath& betaPrime, const SampledPath& B);

/// Log-likelihood of an observed path X (X(t_0) = x0) under drift b relative
/// to driftless fBm started at x0.
DensityReport density_for_drifted_path(const SampledPath& X, const StateDrift& b, const HurstParam& hurst,
                                       double x0);

struct MleReport {
  double rhoHat = 0.0;
  double score = 0.0;        // sum l_i dB^X_i
  double information = 0.0;  // sum l_i^2 delta
  double logLikAtHat = 0.0;
};

/// Closed-form maximizer in rho of the likelihood for b(x) = rho (m - x).
/// Throws DegenerateError when the information is at most 1e-14.
MleReport fou_mle(const SampledPath& X, double m, double x0, const HurstParam& hurst);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t paths = 0;
  std::size_t clamped = 0;  // paths with |logDensity| > 700
  std::size_t singular = 0;  // paths whose beta' was flagged
};

/// Mean and standard error of phi = exp(logDensity) over driftless fBm paths
/// started at x0. Path k uses seed.substream(k). nPaths >= 100.
MonteCarloEstimate mc_density_normalization(const HurstParam& hurst, const StateDrift& b, double x0,
                                            const TimeGrid& grid, std::size_t nPaths, const RngSeed& seed);

/// Mean of f(X) phi(X) over driftless paths X = x0 + W^H, same seeding as
/// mc_density_normalization.
MonteCarloEstimate mc_reweighted_mean(const HurstParam& hurst, const StateDrift& b, double x0, const TimeGrid& grid,
                                      std::size_t nPaths, const RngSeed& seed,
                                      const std::function<double(const SampledPath&)>& f);

}  // namespace fbmg
