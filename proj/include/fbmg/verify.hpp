#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fbmg::verify {

struct Metric {
  std::string name;
  double value = 0.0;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  /// Non-gating checks are reported but do not affect the overall verdict.
  bool gating = true;
  std::vector<Metric> metrics;
  std::string note;
};

struct Options {
  std::uint64_t seed = 7;
  /// Step and path counts divided by 4, tolerances relaxed to match.
  bool fast = false;
};

/// constants, fbm, fraccalc, transform, girsanov.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws DomainError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite, const Options& options);

}  // namespace fbmg::verify
