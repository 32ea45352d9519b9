#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

struct FormulaThreshold {
  /// n^{-1/d*} (log n)^{1/s} when every vertex has local density d*, else n^{-1/d*}.
  double th1_th2 = 0;
  /// n^{-1/d*}, a lower envelope for every pattern.
  double general_lower = 0;
  /// n^{-1/d} (log n)^{1/m} for strictly balanced patterns.
  std::optional<double> strict_formula;
  bool uniform_local_density = false;
};

FormulaThreshold formula_threshold(const PatternGraph& pattern, int n);

/// Every host vertex lies in some copy.
bool coverage_check(const PatternGraph& pattern, const HostGraph& host);

/// Coverage, and every pattern vertex is the image source of at least n/v
/// distinct host vertices.
bool role_coverage_check(const PatternGraph& pattern, const HostGraph& host);

enum class Property { Factor, Coverage, RoleCoverage };

std::string to_string(Property property);
/// Accepts "factor", "coverage", "role".
Property parse_property(const std::string& name);

bool has_property(const PatternGraph& pattern, const HostGraph& host, Property property);

struct ProbeResult {
  double p = 0;
  int successes = 0;
  int trials = 0;
  double estimate = 0;
  double wilson_low = 0;
  double wilson_high = 0;
};

/// Wilson score interval at z standard deviations.
std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.96);

struct ThresholdEstimate {
  int n = 0;
  Property property = Property::Factor;
  double p_half = 0;
  double ci_low = 0;   // largest probe whose Wilson interval lies below target
  double ci_high = 1;  // smallest probe whose Wilson interval lies above target
  double pr_at_ci_low = 0;
  double pr_at_ci_high = 1;
  int trials_per_probe = 0;
  std::uint64_t seed = 0;
  double formula_value = 0;
  double ratio = 0;  // p_half / formula_value
  std::vector<ProbeResult> probes;
  // Factor => RoleCoverage => Coverage on every sampled host.
  std::uint64_t chain_samples = 0;
  std::uint64_t chain_violations = 0;
};

struct ScanOptions {
  double target = 0.5;
  int rounds = 12;
  double z = 1.96;
  /// Evaluate all three properties on every sample and count chain violations
  /// (only when v | n and n is within the factor cap).
  bool check_chain = true;
  unsigned workers = 1;
};

/// Bisection on p over [0, 1]; probe r at n draws host t from
/// derive_seed(derive_seed(derive_seed(seed, n), r), t).
std::vector<ThresholdEstimate> threshold_scan(const PatternGraph& pattern, const std::vector<int>& n_list,
                                              int trials, std::uint64_t seed, Property property,
                                              const ScanOptions& options = {});

}  // namespace hfactor
