#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hfactor/common.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

/// A labeled copy of H in G: mapping[a] is the host vertex pattern vertex a
/// goes to. Injective, and every pattern edge lands on a host edge.
struct LabeledCopy {
  std::vector<Vertex> mapping;

  bool operator==(const LabeledCopy&) const = default;
  auto operator<=>(const LabeledCopy&) const = default;
};

/// Pins pattern vertices (the set A and the injection psi) and selects the
/// pattern edges E' whose images must be host edges. Edges outside E' are
/// unconstrained.
struct ConstraintSpec {
  std::vector<std::pair<int, Vertex>> pinned;
  std::vector<int> constrained_edges;

  /// No pins, E' = E(P): plain labeled copies.
  static ConstraintSpec all_edges(const PatternGraph& pattern);
  /// Pattern vertex a pinned to host vertex x, E' = E(P).
  static ConstraintSpec pinned_copy(const PatternGraph& pattern, int a, Vertex x);
};

/// Backtracking embedder for one (pattern, host, constraint) triple.
///
/// Pinned vertices are placed first, then vertices incident to E' in an order
/// where each has the most E' edges into the already-placed set, then
/// vertices touching no E' edge ("free" vertices). An E' edge is checked
/// as soon as its last vertex is placed. count() multiplies by the number of
/// injective placements of the free vertices instead of enumerating them.
class Embedder {
 public:
  /// Structural checks only: indices in range, psi injective, arities match.
  Embedder(const PatternGraph& pattern, const HostGraph& host, const ConstraintSpec& spec);

  BigInt count() const;
  bool exists() const;

  /// Visits complete injections in lexicographic order of the search; the
  /// visitor returns false to stop early.
  void for_each(const std::function<bool(std::span<const Vertex>)>& visit) const;

  /// Visits placements of the pinned and E'-incident vertices only; free
  /// pattern vertices hold kUnplaced and `multiplicity` is the number of ways
  /// to place them.
  static constexpr Vertex kUnplaced = UINT32_MAX;
  void for_each_core(
      const std::function<void(std::span<const Vertex>, const BigInt& multiplicity)>& visit) const;

 private:
  struct Step {
    int vertex = 0;
    bool pinned = false;
    Vertex pin = 0;
    std::vector<int> closing_edges;
    int anchor = -1;  // placed pattern vertex sharing a closing edge, or -1
  };

  template <class Leaf>
  bool search(std::size_t pos, std::vector<Vertex>& image, std::vector<char>& used,
              std::size_t limit, Leaf& leaf) const;

  const PatternGraph& pattern_;
  const HostGraph& host_;
  std::vector<Step> steps_;
  std::size_t core_size_ = 0;  // steps_[0, core_size_) are pinned or E'-incident
  int free_count_ = 0;
};

std::vector<LabeledCopy> enumerate_copies(const PatternGraph& pattern, const HostGraph& host);

/// D(x, G): labeled copies whose image contains x.
BigInt copy_degree(const PatternGraph& pattern, const HostGraph& host, Vertex x);

/// D(x, G) for every x, from one enumeration pass.
std::vector<std::uint64_t> copy_degrees(const PatternGraph& pattern, const HostGraph& host);

/// For each host edge (by index), the number of labeled copies whose edge
/// image contains it.
std::vector<std::uint64_t> copies_per_edge(const PatternGraph& pattern, const HostGraph& host);

/// D(p) = v (n-1)_{v-1} p^m, the expected copy degree of a vertex in G(n,p).
double expected_copy_degree(const PatternGraph& pattern, int n, double p);

/// X(G): injections agreeing with psi on A and mapping E' into E(G).
/// Requires E' to contain no edge lying inside A.
BigInt constrained_count(const PatternGraph& pattern, const HostGraph& host,
                         const ConstraintSpec& spec);

}  // namespace hfactor
