#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hfactor/common.hpp"

namespace hfactor {

inline constexpr int kMaxPatternVertices = 12;

/// The fixed pattern H: a k-uniform (hyper)graph on vertices 0..v-1.
///
/// Edges are kept sorted (each edge's vertices ascending, edges in
/// lexicographic order) so two patterns with the same edge set compare equal.
class PatternGraph {
 public:
  /// Validates: 2 <= k <= v <= kMaxPatternVertices, at least one edge, every
  /// edge a k-subset of [v], no duplicates.
  static PatternGraph create(int arity, int vertex_count, std::vector<std::vector<int>> edges,
                             std::string name = {});

  int arity() const { return arity_; }
  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::vector<int>>& edges() const { return edges_; }

  /// Vertex bitmask of edge i.
  std::uint32_t edge_mask(int i) const { return edge_masks_[i]; }

  /// Number of edges lying inside the vertex set `mask`.
  int edges_within(std::uint32_t mask) const;

  /// Free-form label used in reports (file name, "K3", ...).
  const std::string& name() const { return name_; }

  bool operator==(const PatternGraph& other) const {
    return arity_ == other.arity_ && vertex_count_ == other.vertex_count_ && edges_ == other.edges_;
  }

 private:
  int arity_ = 2;
  int vertex_count_ = 0;
  std::vector<std::vector<int>> edges_;
  std::vector<std::uint32_t> edge_masks_;
  std::string name_;
};

PatternGraph parse_pattern(std::string_view text, std::string name = {});

// Common patterns.
PatternGraph clique_pattern(int v);
PatternGraph cycle_pattern(int v);
PatternGraph path_pattern(int v);
PatternGraph hyperedge_pattern(int k);

enum class Balance { StrictlyBalanced, BalancedNotStrict, Unbalanced };

std::string to_string(Balance balance);

struct VertexDensity {
  Rational d_star;  // max density over sub-patterns containing the vertex
  int s = 0;        // fewest edges among sub-patterns attaining d_star
};

struct DensityReport {
  Rational d;
  Rational d_star;
  std::vector<VertexDensity> per_vertex;
  int s = 0;
  Balance balance = Balance::Unbalanced;
  std::uint64_t aut_count = 1;
};

/// e(H)/(v(H)-1), exact.
Rational density(const PatternGraph& pattern);

/// d*, the per-vertex local densities and s_v, and the balance class.
///
/// Only induced sub-patterns on >= 2 vertices are scanned: removing edges at a
/// fixed vertex set lowers the density, so every densest sub-pattern is
/// induced.
DensityReport density_profile(const PatternGraph& pattern);

Balance balance_class(const PatternGraph& pattern);

/// |Aut(H)| by backtracking over vertex bijections. Isolated vertices are
/// factored out as a (count)! multiplier.
std::uint64_t automorphism_count(const PatternGraph& pattern);

}  // namespace hfactor
