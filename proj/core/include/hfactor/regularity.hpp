#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfactor/embed.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

struct RegularityOptions {
  bool part_a = true;
  /// Constraint families with m <= this many pattern edges are enumerated in full.
  int exhaustive_edge_limit = 8;
  /// Number of (A, E') pairs drawn when the family is sampled.
  std::size_t family_samples = 256;
  /// psi maps per (A, E'): all of them when (n)_{|A|} fits, else this many random ones.
  std::size_t psi_cap = 64;
  std::uint64_t seed = 0;
};

struct ConstraintCheck {
  std::vector<int> a;               // pinned pattern vertices
  std::vector<int> eprime;          // constrained pattern edges
  double e_star = 0;                // max over |L| < |E'| of E_L X
  bool small_regime = false;        // E* <= n^{-eps}
  double threshold = 0;             // beta or n^eps E*
  double x_max = 0;                 // largest X(G) over the psi maps tried
  std::vector<Vertex> worst_psi;
  std::size_t psi_checked = 0;
  bool psi_exhaustive = false;
  bool ok = true;                   // X(G) < threshold for every psi tried
};

struct RegularityReport {
  int n = 0;
  double p = 0;
  double eps = 0;
  double beta = 0;
  // part (b)
  double expected_degree = 0;       // D(p)
  std::uint64_t min_degree = 0;
  std::uint64_t max_degree = 0;
  double degree_deviation = 0;      // max_x |D(x,G) - D(p)| / D(p)
  bool part_b_ok = false;
  // part (a)
  bool part_a_run = false;
  std::string family_regime;        // "exhaustive" or "sampled"
  std::vector<ConstraintCheck> checks;
  bool part_a_ok = true;
  bool regular = false;
};

/// Both parts of the (p, eps, beta)-regularity test. E* is computed on K_n
/// with psi fixed to 0, 1, ..., |A|-1; it does not depend on psi since K_n is
/// vertex transitive.
RegularityReport regularity_report(const PatternGraph& pattern, const HostGraph& host, double p,
                                   double eps, double beta, const RegularityOptions& options = {});

}  // namespace hfactor
