#include "hfactor/pattern.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "hfactor/edge_list.hpp"

namespace hfactor {

PatternGraph PatternGraph::create(int arity, int vertex_count, std::vector<std::vector<int>> edges,
                                  std::string name) {
  if (arity < 2) throw Error("pattern arity must be at least 2");
  if (vertex_count < arity) throw Error("pattern needs at least k vertices");
  if (vertex_count > kMaxPatternVertices) {
    throw Error("pattern has " + std::to_string(vertex_count) + " vertices; at most " +
                std::to_string(kMaxPatternVertices) +
                " are supported (automorphism and sub-pattern search are exhaustive)");
  }
  if (edges.empty()) throw Error("pattern must have at least one edge");

  std::set<std::vector<int>> seen;
  for (auto& edge : edges) {
    if (static_cast<int>(edge.size()) != arity) throw Error("pattern edge arity mismatch");
    std::sort(edge.begin(), edge.end());
    for (int x : edge) {
      if (x < 0 || x >= vertex_count) throw Error("pattern vertex index out of range");
    }
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
      throw Error("repeated vertex inside a pattern edge");
    }
    if (!seen.insert(edge).second) throw Error("duplicate pattern edge");
  }
  std::sort(edges.begin(), edges.end());

  PatternGraph p;
  p.arity_ = arity;
  p.vertex_count_ = vertex_count;
  p.edges_ = std::move(edges);
  p.name_ = std::move(name);
  for (const auto& edge : p.edges_) {
    std::uint32_t mask = 0;
    for (int x : edge) mask |= 1u << x;
    p.edge_masks_.push_back(mask);
  }
  return p;
}

int PatternGraph::edges_within(std::uint32_t mask) const {
  int count = 0;
  for (auto e : edge_masks_) count += (e & mask) == e;
  return count;
}

PatternGraph parse_pattern(std::string_view text, std::string name) {
  const auto file = parse_edge_list(text);
  if (file.vertex_count > static_cast<std::uint64_t>(kMaxPatternVertices)) {
    throw Error("pattern has " + std::to_string(file.vertex_count) + " vertices; at most " +
                std::to_string(kMaxPatternVertices) + " are supported");
  }
  std::vector<std::vector<int>> edges;
  for (const auto& e : file.edges) edges.emplace_back(e.begin(), e.end());
  if (edges.empty()) throw Error("pattern must have at least one edge");
  return PatternGraph::create(file.arity, static_cast<int>(file.vertex_count), std::move(edges),
                              std::move(name));
}

PatternGraph clique_pattern(int v) {
  std::vector<std::vector<int>> edges;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) edges.push_back({a, b});
  return PatternGraph::create(2, v, std::move(edges), "K" + std::to_string(v));
}

PatternGraph cycle_pattern(int v) {
  std::vector<std::vector<int>> edges;
  for (int a = 0; a < v; ++a) edges.push_back({a, (a + 1) % v});
  return PatternGraph::create(2, v, std::move(edges), "C" + std::to_string(v));
}

PatternGraph path_pattern(int v) {
  std::vector<std::vector<int>> edges;
  for (int a = 0; a + 1 < v; ++a) edges.push_back({a, a + 1});
  return PatternGraph::create(2, v, std::move(edges), "P" + std::to_string(v));
}

PatternGraph hyperedge_pattern(int k) {
  std::vector<int> edge(k);
  for (int i = 0; i < k; ++i) edge[i] = i;
  return PatternGraph::create(k, k, {edge}, "E" + std::to_string(k));
}

std::string to_string(Balance balance) {
  switch (balance) {
    case Balance::StrictlyBalanced: return "strictly_balanced";
    case Balance::BalancedNotStrict: return "balanced_not_strict";
    case Balance::Unbalanced: return "unbalanced";
  }
  return "unknown";
}

Rational density(const PatternGraph& pattern) {
  return Rational(pattern.edge_count(), pattern.vertex_count() - 1);
}

namespace {

Balance classify(const PatternGraph& pattern, const Rational& d, const Rational& d_star) {
  if (d_star != d) return Balance::Unbalanced;
  const int v = pattern.vertex_count();
  const std::uint32_t full = (1u << v) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    if (Rational(pattern.edges_within(mask), size - 1) >= d) return Balance::BalancedNotStrict;
  }
  return Balance::StrictlyBalanced;
}

}  // namespace

DensityReport density_profile(const PatternGraph& pattern) {
  const int v = pattern.vertex_count();
  const std::uint32_t full = (1u << v) - 1;

  DensityReport report;
  report.d = density(pattern);
  report.per_vertex.assign(v, VertexDensity{Rational(-1), 0});
  report.d_star = Rational(-1);

  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    const int e = pattern.edges_within(mask);
    const Rational dens(e, size - 1);
    if (dens > report.d_star) report.d_star = dens;
    for (int x = 0; x < v; ++x) {
      if (!(mask >> x & 1u)) continue;
      auto& local = report.per_vertex[x];
      if (dens > local.d_star) {
        local.d_star = dens;
        local.s = e;
      } else if (dens == local.d_star && e < local.s) {
        local.s = e;
      }
    }
  }
  report.s = 0;
  for (const auto& local : report.per_vertex) report.s = std::max(report.s, local.s);
  report.balance = classify(pattern, report.d, report.d_star);
  report.aut_count = automorphism_count(pattern);
  return report;
}

Balance balance_class(const PatternGraph& pattern) {
  const auto profile = density_profile(pattern);
  return profile.balance;
}

namespace {

struct AutSearch {
  const PatternGraph& pattern;
  std::vector<int> order;      // non-isolated vertices, in search order
  std::vector<int> image;      // image[x] or -1
  std::vector<bool> used;
  std::set<std::uint32_t> edge_set;
  std::vector<std::vector<int>> edges_closing_at;  // indexed by position in order
  std::uint64_t count = 0;

  void search(std::size_t pos) {
    if (pos == order.size()) {
      ++count;
      return;
    }
    const int x = order[pos];
    for (int y : order) {
      if (used[y]) continue;
      image[x] = y;
      bool ok = true;
      for (int ei : edges_closing_at[pos]) {
        std::uint32_t mapped = 0;
        for (int z : pattern.edges()[ei]) mapped |= 1u << image[z];
        if (!edge_set.count(mapped)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        used[y] = true;
        search(pos + 1);
        used[y] = false;
      }
      image[x] = -1;
    }
  }
};

}  // namespace

std::uint64_t automorphism_count(const PatternGraph& pattern) {
  const int v = pattern.vertex_count();
  std::uint32_t covered = 0;
  for (int i = 0; i < pattern.edge_count(); ++i) covered |= pattern.edge_mask(i);

  AutSearch search{pattern, {}, std::vector<int>(v, -1), std::vector<bool>(v, false), {}, {}, 0};
  for (int i = 0; i < pattern.edge_count(); ++i) search.edge_set.insert(pattern.edge_mask(i));

  // Order: repeatedly take the vertex with the most edges into the placed set.
  std::uint32_t placed = 0;
  while (placed != covered) {
    int best = -1;
    int best_score = -1;
    for (int x = 0; x < v; ++x) {
      if (!(covered >> x & 1u) || (placed >> x & 1u)) continue;
      int score = 0;
      for (int i = 0; i < pattern.edge_count(); ++i) {
        const auto e = pattern.edge_mask(i);
        if ((e >> x & 1u) && (e & placed)) ++score;
      }
      if (score > best_score) {
        best_score = score;
        best = x;
      }
    }
    placed |= 1u << best;
    search.order.push_back(best);
  }
  // An edge is checked at the position of its last-placed vertex.
  search.edges_closing_at.resize(search.order.size());
  std::uint32_t prefix = 0;
  for (std::size_t pos = 0; pos < search.order.size(); ++pos) {
    prefix |= 1u << search.order[pos];
    for (int i = 0; i < pattern.edge_count(); ++i) {
      const auto e = pattern.edge_mask(i);
      if ((e & prefix) == e && (e >> search.order[pos] & 1u)) search.edges_closing_at[pos].push_back(i);
    }
  }
  search.search(0);

  std::uint64_t isolated_factor = 1;
  for (int i = 2; i <= v - std::popcount(covered); ++i) isolated_factor *= i;
  return search.count * isolated_factor;
}

}  // namespace hfactor
