#include "fbmg/fbm_sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "fbmg/detail/shared_cache.hpp"

namespace fbmg {
namespace {

constexpr const char* kModule = "fbm_sim";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using GridKey = std::tuple<std::size_t, double, double>;  // (n, T, H)

// ---------------------------------------------------------------- Cholesky

// Packed lower-triangular factor of the covariance on t_1..t_n.
struct CholeskyFactor {
  std::size_t n = 0;
  std::vector<double> packed;
  const double* row(std::size_t i) const { return packed.data() + i * (i + 1) / 2; }
};

CholeskyFactor factor_covariance(const TimeGrid& grid, double hurst) {
  const std::size_t n = grid.steps();
  CholeskyFactor f;
  f.n = n;
  f.packed.assign(n * (n + 1) / 2, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, fbm_covariance(grid.t(i + 1), grid.t(i + 1), hurst));
  constexpr double kTol = 1e-10;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double* li = f.packed.data() + i * (i + 1) / 2;
    const double ti = grid.t(i + 1);
    for (std::size_t j = 0; j <= i; ++j) {
      const double* lj = f.packed.data() + j * (j + 1) / 2;
      double acc = fbm_covariance(ti, grid.t(j + 1), hurst);
      for (std::size_t k = 0; k < j; ++k) acc -= li[k] * lj[k];
      if (j < i) {
        li[j] = diag[j] > 0.0 ? acc / diag[j] : 0.0;
      } else {
        if (acc < -kTol * scale)
          throw NumericalError(kModule, "covariance matrix is not positive definite (pivot " + std::to_string(acc) +
                                            " at node " + std::to_string(i + 1) + ")");
        diag[i] = acc > 0.0 ? std::sqrt(acc) : 0.0;
        li[i] = diag[i];
      }
    }
  }
  return f;
}

detail::SharedCache<GridKey, CholeskyFactor>& cholesky_cache() {
  static detail::SharedCache<GridKey, CholeskyFactor> cache(4);
  return cache;
}

// ----------------------------------------------------------------- FFTW glue

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer make_buffer(std::size_t size) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (p == nullptr) throw NumericalError(kModule, "FFT buffer allocation failed");
  return ComplexBuffer(p);
}

// Plans are created once per size under a lock (the FFTW planner is not
// thread-safe); fftw_execute_dft on fftw_malloc'ed buffers is.
fftw_plan forward_plan(std::size_t size) {
  static std::mutex mutex;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(size);
  if (it != plans.end()) return it->second;
  ComplexBuffer in = make_buffer(size);
  ComplexBuffer out = make_buffer(size);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(size), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalError(kModule, "FFT planning failed");
  plans.emplace(size, plan);
  return plan;
}

// ------------------------------------------------------- circulant embedding

struct CirculantEmbedding {
  bool valid = false;
  double min_ratio = 0.0;    // min eigenvalue / max eigenvalue
  std::vector<double> root;  // sqrt(lambda_k / (2n)), length 2n
};

CirculantEmbedding embed(const TimeGrid& grid, double hurst) {
  const std::size_t n = grid.steps();
  const std::size_t m = 2 * n;
  ComplexBuffer row = make_buffer(m);
  ComplexBuffer eig = make_buffer(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lag = k <= n ? k : m - k;
    row[k][0] = fgn_autocovariance(lag, hurst, grid.delta());
    row[k][1] = 0.0;
  }
  fftw_execute_dft(forward_plan(m), row.get(), eig.get());
  double lo = eig[0][0], hi = eig[0][0];
  for (std::size_t k = 0; k < m; ++k) {
    lo = std::min(lo, eig[k][0]);
    hi = std::max(hi, eig[k][0]);
  }
  CirculantEmbedding e;
  e.min_ratio = lo / hi;
  e.valid = lo >= -1e-8 * hi;
  if (!e.valid) return e;
  e.root.resize(m);
  for (std::size_t k = 0; k < m; ++k) e.root[k] = std::sqrt(std::max(eig[k][0], 0.0) / static_cast<double>(m));
  return e;
}

detail::SharedCache<GridKey, CirculantEmbedding>& embedding_cache() {
  static detail::SharedCache<GridKey, CirculantEmbedding> cache(8);
  return cache;
}

}  // namespace

RngSeed RngSeed::substream(std::uint64_t k) const noexcept {
  return {seed, splitmix64(stream ^ splitmix64(k + 0x632be59bd9b4e019ULL))};
}

NormalStream::NormalStream(const RngSeed& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.seed), static_cast<std::uint32_t>(seed.seed >> 32),
                    static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32)};
  engine_.seed(seq);
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

double fgn_autocovariance(std::size_t lag, double hurst, double delta) {
  const double k = static_cast<double>(lag);
  const double e = 2.0 * hurst;
  const double g = 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::fabs(k - 1.0), e));
  return g * std::pow(delta, e);
}

SampledPath sample_fbm_cholesky(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed) {
  const std::size_t n = grid.steps();
  if (n > kCholeskyMaxSteps)
    throw SizeError(kModule, "Cholesky sampler is capped at " + std::to_string(kCholeskyMaxSteps) + " steps");
  auto factor = cholesky_cache().get_or_build(GridKey{n, grid.horizon(), hurst.value()},
                                              [&] { return factor_covariance(grid, hurst.value()); });
  NormalStream normal(seed);
  std::vector<double> z(n);
  for (double& v : z) v = normal();
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = factor->row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k <= i; ++k) acc += li[k] * z[k];
    w[i + 1] = acc;
  }
  return SampledPath(grid, std::move(w));
}

SampledPath sample_fbm_circulant(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed) {
  const std::size_t n = grid.steps();
  if (!is_power_of_two(n)) throw PreconditionError(kModule, "circulant sampler needs a power-of-two step count");
  auto emb = embedding_cache().get_or_build(GridKey{n, grid.horizon(), hurst.value()},
                                            [&] { return embed(grid, hurst.value()); });
  if (!emb->valid) {
    if (n <= kCholeskyMaxSteps) return sample_fbm_cholesky(grid, hurst, seed);
    throw NumericalError(kModule, "circulant embedding has a negative eigenvalue (min/max = " +
                                      std::to_string(emb->min_ratio) + ")");
  }
  const std::size_t m = 2 * n;
  ComplexBuffer in = make_buffer(m);
  ComplexBuffer out = make_buffer(m);
  NormalStream normal(seed);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal();
    const double im = normal();
    in[k][0] = emb->root[k] * re;
    in[k][1] = emb->root[k] * im;
  }
  fftw_execute_dft(forward_plan(m), in.get(), out.get());
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i + 1] = w[i] + out[i][0];
  return SampledPath(grid, std::move(w));
}

SampledPath sample_fbm(const TimeGrid& grid, const HurstParam& hurst, const RngSeed& seed) {
  if (is_power_of_two(grid.steps())) return sample_fbm_circulant(grid, hurst, seed);
  return sample_fbm_cholesky(grid, hurst, seed);
}

SampledPath solve_fou(const SampledPath& driver, const FouParams& params) {
  if (driver.front() != 0.0) throw PreconditionError(kModule, "driving path must start at 0");
  const double dt = driver.grid().delta();
  std::vector<double> x(driver.size());
  double drift = 0.0;
  x[0] = params.x0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    drift += params.rho * (params.m - x[i]) * dt;
    x[i + 1] = params.x0 + driver[i + 1] + drift;
  }
  return SampledPath(driver.grid(), std::move(x));
}

SampledPath sample_fou(const TimeGrid& grid, const HurstParam& hurst, const FouParams& params, const RngSeed& seed) {
  if (!std::isfinite(params.rho) || !std::isfinite(params.m) || !std::isfinite(params.x0))
    throw DomainError(kModule, "fOU parameters must be finite");
  return solve_fou(sample_fbm(grid, hurst, seed), params);
}

}  // namespace fbmg
