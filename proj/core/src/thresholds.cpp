#include "hfactor/thresholds.hpp"

#include <cmath>

#include "hfactor/embed.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/parallel.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {

FormulaThreshold formula_threshold(const PatternGraph& pattern, int n) {
  const int v = pattern.vertex_count();
  if (v < 2 || n < v) throw Error("formula threshold needs n >= v >= 2");
  if (pattern.edge_count() == 0) throw Error("pattern has no edges");
  const auto report = density_profile(pattern);
  const double log_n = std::log(static_cast<double>(n));
  const double inv_d_star = to_double(1 / report.d_star);
  FormulaThreshold out;
  out.general_lower = std::pow(n, -inv_d_star);
  out.uniform_local_density = true;
  for (const auto& pv : report.per_vertex) {
    if (pv.d_star != report.d_star) out.uniform_local_density = false;
  }
  out.th1_th2 = out.uniform_local_density ? out.general_lower * std::pow(log_n, 1.0 / report.s)
                                          : out.general_lower;
  if (report.balance == Balance::StrictlyBalanced) {
    out.strict_formula = std::pow(n, -to_double(1 / report.d)) * std::pow(log_n, 1.0 / pattern.edge_count());
  }
  return out;
}

bool coverage_check(const PatternGraph& pattern, const HostGraph& host) {
  if (host.arity() != pattern.arity()) throw Error("pattern and host arity differ");
  for (auto d : copy_degrees(pattern, host)) {
    if (d == 0) return false;
  }
  return true;
}

bool role_coverage_check(const PatternGraph& pattern, const HostGraph& host) {
  const int v = pattern.vertex_count();
  const int n = host.vertex_count();
  if (n % v != 0) throw Error("role coverage needs v | n");
  if (!coverage_check(pattern, host)) return false;
  for (int a = 0; a < v; ++a) {
    int roles = 0;
    for (int x = 0; x < n && roles < n / v; ++x) {
      roles += Embedder(pattern, host, ConstraintSpec::pinned_copy(pattern, a, static_cast<Vertex>(x))).exists();
    }
    if (roles < n / v) return false;
  }
  return true;
}

std::string to_string(Property property) {
  switch (property) {
    case Property::Factor: return "factor";
    case Property::Coverage: return "coverage";
    case Property::RoleCoverage: return "role";
  }
  return "unknown";
}

Property parse_property(const std::string& name) {
  for (auto p : {Property::Factor, Property::Coverage, Property::RoleCoverage}) {
    if (to_string(p) == name) return p;
  }
  throw Error("unknown property '" + name + "' (factor, coverage, role)");
}

bool has_property(const PatternGraph& pattern, const HostGraph& host, Property property) {
  switch (property) {
    case Property::Factor: return has_factor(pattern, host);
    case Property::Coverage: return coverage_check(pattern, host);
    case Property::RoleCoverage: return role_coverage_check(pattern, host);
  }
  return false;
}

std::pair<double, double> wilson_interval(int successes, int trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double t = trials;
  const double phat = successes / t;
  const double z2 = z * z;
  const double denom = 1 + z2 / t;
  const double center = (phat + z2 / (2 * t)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / t + z2 / (4 * t * t)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<ThresholdEstimate> threshold_scan(const PatternGraph& pattern, const std::vector<int>& n_list,
                                              int trials, std::uint64_t seed, Property property,
                                              const ScanOptions& options) {
  if (trials < 1) throw Error("trials must be at least 1");
  if (options.rounds < 1) throw Error("bisection needs at least one round");
  if (!(options.target > 0 && options.target < 1)) throw Error("target must lie in (0, 1)");
  const int v = pattern.vertex_count();
  for (int n : n_list) {
    if (n < v) throw Error("n = " + std::to_string(n) + " is smaller than the pattern");
    if (property != Property::Coverage && n % v != 0) {
      throw Error("n = " + std::to_string(n) + " is not divisible by v");
    }
    if (property == Property::Factor && n > default_factor_cap(v)) {
      throw Error("n = " + std::to_string(n) + " exceeds the factor counting cap");
    }
  }

  std::vector<ThresholdEstimate> out;
  for (int n : n_list) {
    ThresholdEstimate est;
    est.n = n;
    est.property = property;
    est.trials_per_probe = trials;
    est.seed = seed;
    est.formula_value = formula_threshold(pattern, n).th1_th2;
    const bool chain = options.check_chain && n % v == 0 && n <= default_factor_cap(v);
    const auto n_seed = derive_seed(seed, static_cast<std::uint64_t>(n));

    double lo = 0, hi = 1;
    for (int round = 0; round < options.rounds; ++round) {
      const double p = (lo + hi) / 2;
      const auto probe_seed = derive_seed(n_seed, static_cast<std::uint64_t>(round));
      std::vector<char> hit(trials, 0), violated(trials, 0);
      parallel_for(static_cast<std::size_t>(trials), options.workers, [&](std::size_t t) {
        const auto host = sample_gnp(pattern.arity(), n, p, derive_seed(probe_seed, t));
        if (!chain) {
          hit[t] = has_property(pattern, host, property);
          return;
        }
        const bool cov = coverage_check(pattern, host);
        const bool role = role_coverage_check(pattern, host);
        const bool fac = has_factor(pattern, host);
        violated[t] = (fac && !role) || (role && !cov);
        hit[t] = property == Property::Factor ? fac : property == Property::Coverage ? cov : role;
      });
      ProbeResult probe;
      probe.p = p;
      probe.trials = trials;
      for (int t = 0; t < trials; ++t) {
        probe.successes += hit[t];
        est.chain_violations += violated[t];
      }
      if (chain) est.chain_samples += trials;
      probe.estimate = static_cast<double>(probe.successes) / trials;
      std::tie(probe.wilson_low, probe.wilson_high) = wilson_interval(probe.successes, trials, options.z);
      if (probe.estimate < options.target) {
        lo = p;
      } else {
        hi = p;
      }
      est.probes.push_back(probe);
    }
    est.p_half = (lo + hi) / 2;
    for (const auto& probe : est.probes) {
      if (probe.wilson_high < options.target && probe.p >= est.ci_low) {
        est.ci_low = probe.p;
        est.pr_at_ci_low = probe.estimate;
      }
      if (probe.wilson_low > options.target && probe.p <= est.ci_high) {
        est.ci_high = probe.p;
        est.pr_at_ci_high = probe.estimate;
      }
    }
    est.ratio = est.formula_value > 0 ? est.p_half / est.formula_value : 0.0;
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace hfactor
