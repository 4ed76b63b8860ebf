#pragma once

#include <cstdint>
#include <random>

#include "fbmg/core.hpp"

namespace fbmg {

/// (seed, stream) pair. The pair alone determines the generated path.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Seed of the k-th path of a Monte Carlo batch started from this seed.
  /// Substreams never depend on evaluation order.
  RngSeed substream(std::uint64_t k) const noexcept;
};

/// Standard normal stream bound to one RngSeed.
class NormalStream {
 public:
  explicit NormalStream(const RngSeed& seed);
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
};

/// Parameters of X_t = x0 + rho * int_0^t (m - X_s) ds + W^H_t.
struct FouParams {
  double rho = 0.0;
  double m = 0.0;
  double x0 = 0.0;
};

inline constexpr std::size_t kCholeskyMaxSteps = 4096;

/// Exact fBm sample from the Cholesky factor of the covariance on t_1..t_n.
/// Factors are cached per (n, T, H). Throws SizeError above kCholeskyMaxSteps.
SampledPath sample_fbm_cholesky(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed);

/// Exact fBm sample by circulant embedding of the fractional Gaussian noise.
/// grid.steps() must be a power of two. Falls back to Cholesky when the
/// embedding is not nonnegative definite and n <= kCholeskyMaxSteps.
SampledPath sample_fbm_circulant(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed);

/// Circulant sampler on power-of-two grids, Cholesky otherwise.
SampledPath sample_fbm(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed);

/// Autocovariance of the fBm increments on a grid of spacing delta.
double fgn_autocovariance(std::size_t lag, double hurst, double delta);

/// Explicit Euler for the fOU drift along a given driving path W (W_0 = 0):
/// X_i = x0 + W_i + sum_{k<i} rho (m - X_k) delta.
SampledPath solve_fou(const SampledPath& driver, const FouParams& params);

/// fOU path driven by sample_fbm.
SampledPath sample_fou(const TimeGrid& grid, const HurstParam& hurst, const FouParams& params, const RngSeed& seed);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace fbmg
