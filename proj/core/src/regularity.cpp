#include "hfactor/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "hfactor/polynomial.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {
namespace {

struct Family {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> members;  // (A mask, E' mask)
  bool exhaustive = true;
};

std::vector<int> allowed_edges(const PatternGraph& pattern, std::uint32_t a_mask) {
  std::vector<int> out;
  for (int i = 0; i < pattern.edge_count(); ++i) {
    if ((pattern.edge_mask(i) & ~static_cast<std::uint64_t>(a_mask)) != 0) out.push_back(i);
  }
  return out;
}

Family build_family(const PatternGraph& pattern, const RegularityOptions& options) {
  Family family;
  const int v = pattern.vertex_count();
  const int m = pattern.edge_count();
  if (m <= options.exhaustive_edge_limit) {
    for (std::uint32_t a = 0; a < (1u << v); ++a) {
      const auto allowed = allowed_edges(pattern, a);
      for (std::uint32_t sub = 1; sub < (1u << allowed.size()); ++sub) {
        std::uint32_t e = 0;
        for (std::size_t j = 0; j < allowed.size(); ++j) {
          if (sub >> j & 1u) e |= 1u << allowed[j];
        }
        family.members.emplace_back(a, e);
      }
    }
    return family;
  }
  family.exhaustive = false;
  Rng rng(derive_seed(options.seed, 0x5eed));
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::size_t attempts = 0;
  while (seen.size() < options.family_samples && attempts < 64 * options.family_samples) {
    ++attempts;
    const auto a = static_cast<std::uint32_t>(rng.below(1ull << v));
    const auto allowed = allowed_edges(pattern, a);
    if (allowed.empty()) continue;
    std::uint32_t e = 0;
    for (int j : allowed) {
      if (rng.bernoulli(0.5)) e |= 1u << j;
    }
    if (e == 0) e = 1u << allowed[rng.below(allowed.size())];
    seen.emplace(a, e);
  }
  family.members.assign(seen.begin(), seen.end());
  return family;
}

std::vector<int> bits(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask >> i; ++i) {
    if (mask >> i & 1u) out.push_back(i);
  }
  return out;
}

// Calls visit(psi) for every injection of |A| vertices into [n] when there are
// at most `cap`, else for `cap` random ones. Returns whether it was exhaustive.
template <class Visit>
bool for_each_psi(int size, int n, std::size_t cap, std::uint64_t seed, Visit&& visit) {
  BigInt total = falling_factorial(n, size);
  if (total <= cap) {
    std::vector<Vertex> psi(size);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == size) {
        visit(psi);
        return;
      }
      for (int x = 0; x < n; ++x) {
        if (used[x]) continue;
        used[x] = 1;
        psi[pos] = static_cast<Vertex>(x);
        self(self, pos + 1);
        used[x] = 0;
      }
    };
    rec(rec, 0);
    return true;
  }
  Rng rng(seed);
  std::vector<Vertex> psi(size);
  for (std::size_t s = 0; s < cap; ++s) {
    for (int j = 0; j < size; ++j) {
      Vertex x;
      do {
        x = static_cast<Vertex>(rng.below(n));
      } while (std::find(psi.begin(), psi.begin() + j, x) != psi.begin() + j);
      psi[j] = x;
    }
    visit(psi);
  }
  return false;
}

}  // namespace

RegularityReport regularity_report(const PatternGraph& pattern, const HostGraph& host, double p,
                                   double eps, double beta, const RegularityOptions& options) {
  if (!(eps > 0)) throw Error("eps must be positive");
  if (!(beta > 0)) throw Error("beta must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  if (host.arity() != pattern.arity()) throw Error("pattern and host arity differ");
  const int n = host.vertex_count();
  if (n < pattern.vertex_count()) throw Error("host has fewer vertices than the pattern");

  RegularityReport r;
  r.n = n;
  r.p = p;
  r.eps = eps;
  r.beta = beta;

  r.expected_degree = expected_copy_degree(pattern, n, p);
  const auto degrees = copy_degrees(pattern, host);
  r.min_degree = *std::min_element(degrees.begin(), degrees.end());
  r.max_degree = *std::max_element(degrees.begin(), degrees.end());
  for (auto d : degrees) {
    double dev;
    if (r.expected_degree > 0) {
      dev = std::abs(static_cast<double>(d) - r.expected_degree) / r.expected_degree;
    } else {
      dev = d == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    r.degree_deviation = std::max(r.degree_deviation, dev);
  }
  r.part_b_ok = r.degree_deviation <= eps;

  if (options.part_a) {
    r.part_a_run = true;
    const auto family = build_family(pattern, options);
    r.family_regime = family.exhaustive ? "exhaustive" : "sampled";
    const double n_eps = std::pow(static_cast<double>(n), eps);
    std::size_t index = 0;
    for (const auto& [a_mask, e_mask] : family.members) {
      ConstraintCheck c;
      c.a = bits(a_mask);
      c.eprime = bits(e_mask);
      ConstraintSpec canonical;
      for (std::size_t j = 0; j < c.a.size(); ++j) canonical.pinned.emplace_back(c.a[j], static_cast<Vertex>(j));
      canonical.constrained_edges = c.eprime;
      const CopyPolynomial poly(pattern, n, canonical, CoefficientScale::Raw);
      c.e_star = derivative_profile(poly, p).e_star;
      c.small_regime = c.e_star <= 1.0 / n_eps;
      c.threshold = c.small_regime ? beta : n_eps * c.e_star;

      ConstraintSpec spec = canonical;
      c.psi_exhaustive = for_each_psi(
          static_cast<int>(c.a.size()), n, options.psi_cap, derive_seed(options.seed, index),
          [&](const std::vector<Vertex>& psi) {
            for (std::size_t j = 0; j < psi.size(); ++j) spec.pinned[j].second = psi[j];
            const double x = to_double(Rational(constrained_count(pattern, host, spec)));
            ++c.psi_checked;
            if (c.psi_checked == 1 || x > c.x_max) {
              c.x_max = x;
              c.worst_psi = psi;
            }
          });
      c.ok = c.x_max < c.threshold;
      r.part_a_ok = r.part_a_ok && c.ok;
      r.checks.push_back(std::move(c));
      ++index;
    }
  }
  r.regular = r.part_b_ok && r.part_a_ok;
  return r;
}

}  // namespace hfactor
