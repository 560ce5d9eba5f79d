#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fhlab/functionals.hpp"

namespace fhlab {

struct VerifyConfig {
  /// Random fields per inequality estimate; stability compares against 2x.
  int samples = 200;
  /// Fields used for the energy lower-bound check.
  int energy_samples = 500;
  std::uint64_t seed = 1;
  double scaling_lambda = 2.0;
  /// Builds the kernels with this gamma instead of the model's (for
  /// exercising the failure path).
  std::optional<double> kernel_gamma_override;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool applicable = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Inequality, scaling, shift and phase checks on the given grid and
/// model. Exceptions inside a check turn into a failed result.
std::vector<CheckResult> run_verify_suite(const ModelParams& params, const GridSpec& grid,
                                          const VerifyConfig& config);

/// Empirical sup of gn_ratio over the first `count` fields of the
/// deterministic random-bump stream for `seed`.
double empirical_gn_constant(const ModelParams& params, const GridSpec& grid, int count, std::uint64_t seed);

}  // namespace fhlab
