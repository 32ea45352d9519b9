#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hfactor/common.hpp"

namespace hfactor {

inline constexpr int kMaxHostVertices = 10000;

/// Number of k-subsets of [n]; throws if it does not fit in 64 bits.
std::uint64_t edge_universe_size(int arity, int vertex_count);

/// Colex rank of a sorted k-subset: sum_i C(v_i, i+1).
std::uint64_t rank_edge(std::span<const Vertex> sorted_vertices);

/// Inverse of rank_edge.
std::vector<Vertex> unrank_edge(std::uint64_t rank, int arity);

/// A k-uniform (hyper)graph on vertices 0..n-1.
///
/// Edges are stored sorted by colex rank with a vertex -> incident-edge index.
/// Graphs (k = 2) additionally keep a bit adjacency matrix for O(1) lookups.
class HostGraph {
 public:
  HostGraph() = default;

  /// Empty host.
  HostGraph(int arity, int vertex_count);

  /// Validates: every edge is a k-subset of [n] with no duplicates.
  static HostGraph from_edges(int arity, int vertex_count,
                              const std::vector<std::vector<Vertex>>& edges);
  static HostGraph from_ranks(int arity, int vertex_count, std::vector<std::uint64_t> ranks);
  static HostGraph complete(int arity, int vertex_count);

  int arity() const { return arity_; }
  int vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return ranks_.size(); }

  /// Sorted vertices of edge i.
  std::span<const Vertex> edge(std::size_t i) const {
    return {vertices_.data() + i * arity_, static_cast<std::size_t>(arity_)};
  }
  std::uint64_t edge_rank(std::size_t i) const { return ranks_[i]; }
  const std::vector<std::uint64_t>& edge_ranks() const { return ranks_; }
  std::vector<std::vector<Vertex>> edge_list() const;

  /// Vertices in any order.
  bool has_edge(std::span<const Vertex> vertices) const;
  bool has_edge_rank(std::uint64_t rank) const;
  /// Index of the edge with this rank, or -1.
  std::ptrdiff_t index_of_rank(std::uint64_t rank) const;
  bool adjacent(Vertex a, Vertex b) const {
    return (adjacency_[a * row_words_ + (b >> 6)] >> (b & 63)) & 1u;
  }

  /// Edge indices incident to x.
  std::span<const std::uint32_t> incident(Vertex x) const { return incident_[x]; }
  std::size_t degree(Vertex x) const { return incident_[x].size(); }

  HostGraph without_edge(std::span<const Vertex> vertices) const;
  HostGraph without_edge_rank(std::uint64_t rank) const;

  bool operator==(const HostGraph& other) const {
    return arity_ == other.arity_ && vertex_count_ == other.vertex_count_ && ranks_ == other.ranks_;
  }

 private:
  void build_index();

  int arity_ = 2;
  int vertex_count_ = 0;
  std::vector<std::uint64_t> ranks_;        // sorted
  std::vector<Vertex> vertices_;            // arity_ entries per edge
  std::vector<std::vector<std::uint32_t>> incident_;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> adjacency_;    // k = 2 only
};

HostGraph parse_host(std::string_view text);

/// Each of the C(n,k) possible edges independently with probability p.
HostGraph sample_gnp(int arity, int vertex_count, double p, std::uint64_t seed);

/// A uniformly random M-subset of the C(n,k) possible edges.
HostGraph sample_gnm(int arity, int vertex_count, std::uint64_t edges, std::uint64_t seed);

/// A uniformly random ordering of all C(n,k) possible edges, as colex ranks.
struct EdgeOrdering {
  int arity = 2;
  int vertex_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> ranks;

  std::vector<Vertex> edge(std::size_t i) const { return unrank_edge(ranks[i], arity); }
};

EdgeOrdering random_ordering(int arity, int vertex_count, std::uint64_t seed);

}  // namespace hfactor
