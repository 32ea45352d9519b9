#pragma once

#include <cstdint>

#include "hfactor/pattern.hpp"

namespace hfactor {

/// Pr(G has an H-factor) under G(n,p) and G(n,M), M = round(C(n,k) p).
struct ModelComparison {
  int n = 0;
  double p = 0;
  std::uint64_t m_edges = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double p_gnp = 0;
  double p_gnm = 0;
  double se_gnp = 0;
  double se_gnm = 0;
  double difference = 0;   // p_gnp - p_gnm
  double combined_se = 0;  // sqrt(se_gnp^2 + se_gnm^2)
};

/// Trial t of G(n,p) uses derive_seed(seed, 2t), trial t of G(n,M) uses
/// derive_seed(seed, 2t + 1).
ModelComparison compare_models(const PatternGraph& pattern, int n, double p, int trials,
                               std::uint64_t seed, unsigned workers = 1);

}  // namespace hfactor
