#include "hfactor/host.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hfactor/edge_list.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {
namespace {

constexpr std::uint64_t kOverflow = UINT64_MAX;

// C(n, k) or kOverflow.
std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using Wide = unsigned __int128;
  Wide acc = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    acc = acc * (n - k + j) / j;
    if (acc >= kOverflow) return kOverflow;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::uint64_t edge_universe_size(int arity, int vertex_count) {
  const auto size = checked_binomial(vertex_count, arity);
  if (size == kOverflow) throw Error("C(n,k) does not fit in 64 bits");
  return size;
}

std::uint64_t rank_edge(std::span<const Vertex> sorted_vertices) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < sorted_vertices.size(); ++i) {
    rank += checked_binomial(sorted_vertices[i], i + 1);
  }
  return rank;
}

std::vector<Vertex> unrank_edge(std::uint64_t rank, int arity) {
  std::vector<Vertex> out(arity);
  std::uint64_t hi = static_cast<std::uint64_t>(arity) + 1;
  while (checked_binomial(hi, arity) <= rank) hi *= 2;
  for (int i = arity; i >= 1; --i) {
    // Largest x with C(x, i) <= rank, x in [i-1, hi).
    std::uint64_t lo = static_cast<std::uint64_t>(i - 1);
    std::uint64_t top = hi;
    while (top - lo > 1) {
      const std::uint64_t mid = lo + (top - lo) / 2;
      if (checked_binomial(mid, i) <= rank) {
        lo = mid;
      } else {
        top = mid;
      }
    }
    out[i - 1] = static_cast<Vertex>(lo);
    rank -= checked_binomial(lo, i);
    hi = lo;
  }
  return out;
}

HostGraph::HostGraph(int arity, int vertex_count) : arity_(arity), vertex_count_(vertex_count) {
  if (arity < 2) throw Error("host arity must be at least 2");
  if (vertex_count < 0 || vertex_count > kMaxHostVertices) {
    throw Error("host vertex count must be in [0, " + std::to_string(kMaxHostVertices) + "]");
  }
  edge_universe_size(arity, vertex_count);
  build_index();
}

HostGraph HostGraph::from_edges(int arity, int vertex_count,
                                const std::vector<std::vector<Vertex>>& edges) {
  HostGraph g(arity, vertex_count);
  std::vector<std::uint64_t> ranks;
  ranks.reserve(edges.size());
  for (auto edge : edges) {
    if (static_cast<int>(edge.size()) != arity) throw Error("host edge arity mismatch");
    std::sort(edge.begin(), edge.end());
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
      throw Error("repeated vertex inside a host edge");
    }
    if (!edge.empty() && edge.back() >= static_cast<Vertex>(vertex_count)) {
      throw Error("host vertex index out of range");
    }
    ranks.push_back(rank_edge(edge));
  }
  std::sort(ranks.begin(), ranks.end());
  if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) throw Error("duplicate host edge");
  g.ranks_ = std::move(ranks);
  g.build_index();
  return g;
}

HostGraph HostGraph::from_ranks(int arity, int vertex_count, std::vector<std::uint64_t> ranks) {
  HostGraph g(arity, vertex_count);
  const auto universe = edge_universe_size(arity, vertex_count);
  std::sort(ranks.begin(), ranks.end());
  if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) throw Error("duplicate host edge");
  if (!ranks.empty() && ranks.back() >= universe) throw Error("edge rank out of range");
  g.ranks_ = std::move(ranks);
  g.build_index();
  return g;
}

HostGraph HostGraph::complete(int arity, int vertex_count) {
  std::vector<std::uint64_t> ranks(edge_universe_size(arity, vertex_count));
  std::iota(ranks.begin(), ranks.end(), std::uint64_t{0});
  return from_ranks(arity, vertex_count, std::move(ranks));
}

void HostGraph::build_index() {
  vertices_.clear();
  vertices_.reserve(ranks_.size() * arity_);
  for (auto r : ranks_) {
    const auto e = unrank_edge(r, arity_);
    vertices_.insert(vertices_.end(), e.begin(), e.end());
  }
  incident_.assign(vertex_count_, {});
  for (std::size_t i = 0; i < ranks_.size(); ++i) {
    for (Vertex x : edge(i)) incident_[x].push_back(static_cast<std::uint32_t>(i));
  }
  if (arity_ == 2) {
    row_words_ = (static_cast<std::size_t>(vertex_count_) + 63) / 64;
    adjacency_.assign(row_words_ * vertex_count_, 0);
    for (std::size_t i = 0; i < ranks_.size(); ++i) {
      const auto e = edge(i);
      adjacency_[e[0] * row_words_ + (e[1] >> 6)] |= std::uint64_t{1} << (e[1] & 63);
      adjacency_[e[1] * row_words_ + (e[0] >> 6)] |= std::uint64_t{1} << (e[0] & 63);
    }
  } else {
    row_words_ = 0;
    adjacency_.clear();
  }
}

std::vector<std::vector<Vertex>> HostGraph::edge_list() const {
  std::vector<std::vector<Vertex>> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < edge_count(); ++i) {
    const auto e = edge(i);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

bool HostGraph::has_edge_rank(std::uint64_t rank) const {
  return std::binary_search(ranks_.begin(), ranks_.end(), rank);
}

bool HostGraph::has_edge(std::span<const Vertex> vertices) const {
  if (static_cast<int>(vertices.size()) != arity_) return false;
  if (arity_ == 2) return vertices[0] != vertices[1] && adjacent(vertices[0], vertices[1]);
  Vertex buffer[16];
  std::copy(vertices.begin(), vertices.end(), buffer);
  std::sort(buffer, buffer + arity_);
  if (std::adjacent_find(buffer, buffer + arity_) != buffer + arity_) return false;
  return has_edge_rank(rank_edge({buffer, static_cast<std::size_t>(arity_)}));
}

std::ptrdiff_t HostGraph::index_of_rank(std::uint64_t rank) const {
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), rank);
  if (it == ranks_.end() || *it != rank) return -1;
  return it - ranks_.begin();
}

HostGraph HostGraph::without_edge_rank(std::uint64_t rank) const {
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), rank);
  if (it == ranks_.end() || *it != rank) throw Error("edge not present in host");
  HostGraph g = *this;
  g.ranks_.erase(g.ranks_.begin() + (it - ranks_.begin()));
  g.build_index();
  return g;
}

HostGraph HostGraph::without_edge(std::span<const Vertex> vertices) const {
  std::vector<Vertex> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  return without_edge_rank(rank_edge(sorted));
}

HostGraph parse_host(std::string_view text) {
  const auto file = parse_edge_list(text);
  if (file.vertex_count > static_cast<std::uint64_t>(kMaxHostVertices)) {
    throw Error("host has too many vertices (max " + std::to_string(kMaxHostVertices) + ")");
  }
  std::vector<std::vector<Vertex>> edges;
  edges.reserve(file.edges.size());
  for (const auto& e : file.edges) edges.emplace_back(e.begin(), e.end());
  return HostGraph::from_edges(file.arity, static_cast<int>(file.vertex_count), edges);
}

HostGraph sample_gnp(int arity, int vertex_count, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  if (vertex_count < arity) throw Error("need n >= k");
  const auto universe = edge_universe_size(arity, vertex_count);
  if (p >= 1.0) return HostGraph::complete(arity, vertex_count);
  std::vector<std::uint64_t> ranks;
  if (p > 0.0) {
    // Geometric skipping over colex ranks.
    Rng rng(seed);
    const double log_q = std::log1p(-p);
    std::uint64_t next = 0;
    while (true) {
      const double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
      if (skip >= static_cast<double>(universe - next)) break;
      next += static_cast<std::uint64_t>(skip);
      ranks.push_back(next);
      ++next;
      if (next >= universe) break;
    }
  }
  return HostGraph::from_ranks(arity, vertex_count, std::move(ranks));
}

HostGraph sample_gnm(int arity, int vertex_count, std::uint64_t edges, std::uint64_t seed) {
  if (vertex_count < arity) throw Error("need n >= k");
  const auto universe = edge_universe_size(arity, vertex_count);
  if (edges > universe) throw Error("M exceeds C(n,k)");
  const bool complement = edges > universe / 2;
  const std::uint64_t draw = complement ? universe - edges : edges;

  // Floyd's algorithm for a uniform draw-subset of [0, universe).
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(draw * 2);
  for (std::uint64_t j = universe - draw; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks;
  if (complement) {
    ranks.reserve(edges);
    for (std::uint64_t r = 0; r < universe; ++r) {
      if (!chosen.count(r)) ranks.push_back(r);
    }
  } else {
    ranks.assign(chosen.begin(), chosen.end());
  }
  return HostGraph::from_ranks(arity, vertex_count, std::move(ranks));
}

EdgeOrdering random_ordering(int arity, int vertex_count, std::uint64_t seed) {
  if (vertex_count < arity) throw Error("need n >= k");
  EdgeOrdering order{arity, vertex_count, seed, {}};
  order.ranks.resize(edge_universe_size(arity, vertex_count));
  std::iota(order.ranks.begin(), order.ranks.end(), std::uint64_t{0});
  Rng rng(seed);
  for (std::size_t i = order.ranks.size(); i > 1; --i) {
    std::swap(order.ranks[i - 1], order.ranks[rng.below(i)]);
  }
  return order;
}

}  // namespace hfactor
