#pragma once

#include <vector>

#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace testing_support {

inline hfactor::HostGraph graph(int n, const std::vector<std::vector<hfactor::Vertex>>& edges) {
  return hfactor::HostGraph::from_edges(2, n, edges);
}

inline hfactor::PatternGraph pattern(int v, const std::vector<std::vector<int>>& edges) {
  return hfactor::PatternGraph::create(2, v, edges);
}

// K3 with a pendant edge at vertex 2.
inline hfactor::PatternGraph triangle_pendant() { return pattern(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}); }

// Two triangles sharing vertex 0.
inline hfactor::PatternGraph bowtie() {
  return pattern(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
}

inline hfactor::PatternGraph two_edges() { return pattern(4, {{0, 1}, {2, 3}}); }

}  // namespace testing_support
