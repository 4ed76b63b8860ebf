#include "fbmg/girsanov.hpp"

#include <cmath>
#include <vector>

#include "fbmg/stats.hpp"

namespace fbmg {
namespace {

constexpr const char* kModule = "girsanov";
constexpr double kLogClamp = 700.0;

MonteCarloEstimate reweighted(const HurstParam& hurst, const StateDrift& b, double x0, const TimeGrid& grid,
                              std::size_t nPaths, const RngSeed& seed,
                              const std::function<double(const SampledPath&)>* f) {
  if (nPaths < 100) throw DomainError(kModule, "Monte Carlo needs at least 100 paths");
  MonteCarloEstimate est;
  est.paths = nPaths;
  std::vector<double> samples(nPaths);
  const bool trivial = b.kind() == StateDrift::Kind::zero;
  for (std::size_t k = 0; k < nPaths; ++k) {
    if (trivial && f == nullptr) {
      samples[k] = 1.0;
      continue;
    }
    const SampledPath X = sample_fbm(grid, hurst, seed.substream(k)).shifted(x0);
    const double value = f != nullptr ? (*f)(X) : 1.0;
    if (trivial) {
      samples[k] = value;
      continue;
    }
    const DensityReport r = density_for_drifted_path(X, b, hurst, x0);
    double log_phi = r.logDensity;
    if (std::fabs(log_phi) > kLogClamp) {
      log_phi = std::copysign(kLogClamp, log_phi);
      ++est.clamped;
    }
    if (r.singularFlag) ++est.singular;
    samples[k] = value * std::exp(log_phi);
  }
  const stats::MeanEstimate m = stats::mean_estimate(samples);
  est.mean = m.mean;
  est.stderr_mean = m.std_error;
  return est;
}

}  // namespace

DensityReport log_density(const SampledPath& betaPrime, const SampledPath& B) {
  require_same_grid(betaPrime, B, kModule);
  if (B.front() != 0.0) throw PreconditionError(kModule, "innovation path must start at 0");
  const std::size_t n = B.grid().steps();
  const double dt = B.grid().delta();
  std::vector<double> ito(n), sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    ito[i] = betaPrime[i] * (B[i + 1] - B[i]);
    sq[i] = betaPrime[i] * betaPrime[i] * dt;
  }
  DensityReport r;
  r.itoSum = stats::pairwise_sum(ito);
  r.l2NormSq = stats::pairwise_sum(sq);
  r.logDensity = r.itoSum - 0.5 * r.l2NormSq;
  return r;
}

DensityReport density_for_drifted_path(const SampledPath& X, const StateDrift& b, const HurstParam& hurst,
                                       double x0) {
  if (X.front() != x0) throw PreconditionError(kModule, "observed path must start at x0");
  if (b.kind() == StateDrift::Kind::zero) return {};
  const DriftBundle drift = drift_along(X, b, hurst);
  const TransformBundle bx = decompose_path(X.shifted(-x0), hurst);
  DensityReport r = log_density(drift.betaPrime, bx.B);
  r.singularFlag = drift.singular;
  return r;
}

MleReport fou_mle(const SampledPath& X, double m, double x0, const HurstParam& hurst) {
  if (X.front() != x0) throw PreconditionError(kModule, "observed path must start at x0");
  std::vector<double> gap(X.size());
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = m - X[i];
  const DriftBundle ell = drift_pipeline(SampledPath(X.grid(), std::move(gap)), hurst);
  const TransformBundle bx = decompose_path(X.shifted(-x0), hurst);
  const DensityReport unit = log_density(ell.betaPrime, bx.B);
  MleReport r;
  r.score = unit.itoSum;
  r.information = unit.l2NormSq;
  if (!(r.information > 1e-14)) throw DegenerateError(kModule, "Fisher information vanishes (path constant at the mean level)");
  r.rhoHat = r.score / r.information;
  r.logLikAtHat = 0.5 * r.score * r.score / r.information;
  return r;
}

MonteCarloEstimate mc_density_normalization(const HurstParam& hurst, const StateDrift& b, double x0,
                                            const TimeGrid& grid, std::size_t nPaths, const RngSeed& seed) {
  return reweighted(hurst, b, x0, grid, nPaths, seed, nullptr);
}

MonteCarloEstimate mc_reweighted_mean(const HurstParam& hurst, const StateDrift& b, double x0, const TimeGrid& grid,
                                      std::size_t nPaths, const RngSeed& seed,
                                      const std::function<double(const SampledPath&)>& f) {
  return reweighted(hurst, b, x0, grid, nPaths, seed, &f);
}

}  // namespace fbmg
