#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbmg::stats {

/// Pairwise (cascade) summation. Result depends only on the order of `x`,
/// never on how the work is split.
double pairwise_sum(std::span<const double> x);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  double variance = 0.0;  // unbiased sample variance
  std::size_t count = 0;
};

MeanEstimate mean_estimate(std::span<const double> x);

double median(std::vector<double> x);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample KS test against the standard normal.
KsResult ks_standard_normal(std::vector<double> sample);

/// Two-sample KS test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double normal_cdf(double x);

/// Least-squares slope and intercept of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fbmg::stats
