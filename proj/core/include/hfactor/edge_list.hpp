#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hfactor {

/// Parsed contents of a pattern or host file:
///
///   graph <v>              or   hypergraph <k> <v>
///   <k vertex indices>     one edge per nonblank line, 0-based
///   # comment lines are ignored
///
/// Each edge is returned sorted. Arity, index range, repeated vertices inside
/// an edge and duplicate edges are rejected here; size limits are left to the
/// caller.
struct EdgeListFile {
  int arity = 2;
  std::uint64_t vertex_count = 0;
  std::vector<std::vector<std::uint64_t>> edges;
};

EdgeListFile parse_edge_list(std::string_view text);

std::string format_edge_list(int arity, std::uint64_t vertex_count,
                             const std::vector<std::vector<std::uint64_t>>& edges);

}  // namespace hfactor
