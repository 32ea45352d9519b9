#include "hfactor/models.hpp"

#include <cmath>
#include <vector>

#include "hfactor/factor.hpp"
#include "hfactor/host.hpp"
#include "hfactor/parallel.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {

ModelComparison compare_models(const PatternGraph& pattern, int n, double p, int trials,
                               std::uint64_t seed, unsigned workers) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  if (trials < 1) throw Error("trials must be at least 1");
  const int v = pattern.vertex_count();
  if (n < v || n % v != 0) throw Error("n must be a positive multiple of the pattern order");
  if (n > default_factor_cap(v)) throw Error("n exceeds the factor counting cap");

  ModelComparison r;
  r.n = n;
  r.p = p;
  r.trials = trials;
  r.seed = seed;
  const auto universe = edge_universe_size(pattern.arity(), n);
  r.m_edges = static_cast<std::uint64_t>(std::llround(static_cast<double>(universe) * p));

  std::vector<char> gnp(trials), gnm(trials);
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    gnp[t] = has_factor(pattern, sample_gnp(pattern.arity(), n, p, derive_seed(seed, 2 * t)));
    gnm[t] = has_factor(pattern, sample_gnm(pattern.arity(), n, r.m_edges, derive_seed(seed, 2 * t + 1)));
  });
  std::size_t hits_p = 0, hits_m = 0;
  for (int t = 0; t < trials; ++t) {
    hits_p += gnp[t];
    hits_m += gnm[t];
  }
  r.p_gnp = static_cast<double>(hits_p) / trials;
  r.p_gnm = static_cast<double>(hits_m) / trials;
  r.se_gnp = std::sqrt(r.p_gnp * (1 - r.p_gnp) / trials);
  r.se_gnm = std::sqrt(r.p_gnm * (1 - r.p_gnm) / trials);
  r.difference = r.p_gnp - r.p_gnm;
  r.combined_se = std::hypot(r.se_gnp, r.se_gnm);
  return r;
}

}  // namespace hfactor
