#include "hfactor/embed.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hfactor {

ConstraintSpec ConstraintSpec::all_edges(const PatternGraph& pattern) {
  ConstraintSpec spec;
  for (int i = 0; i < pattern.edge_count(); ++i) spec.constrained_edges.push_back(i);
  return spec;
}

ConstraintSpec ConstraintSpec::pinned_copy(const PatternGraph& pattern, int a, Vertex x) {
  auto spec = all_edges(pattern);
  spec.pinned.emplace_back(a, x);
  return spec;
}

Embedder::Embedder(const PatternGraph& pattern, const HostGraph& host, const ConstraintSpec& spec)
    : pattern_(pattern), host_(host) {
  if (pattern.arity() != host.arity()) throw Error("pattern and host arities differ");
  const int v = pattern.vertex_count();

  std::vector<char> is_pinned(v, 0);
  std::set<Vertex> pin_images;
  for (const auto& [a, x] : spec.pinned) {
    if (a < 0 || a >= v) throw Error("pinned pattern vertex out of range");
    if (x >= static_cast<Vertex>(host.vertex_count())) throw Error("pinned host vertex out of range");
    if (is_pinned[a]) throw Error("pattern vertex pinned twice");
    if (!pin_images.insert(x).second) throw Error("pin map psi is not injective");
    is_pinned[a] = 1;
  }
  std::vector<char> in_eprime(pattern.edge_count(), 0);
  for (int ei : spec.constrained_edges) {
    if (ei < 0 || ei >= pattern.edge_count()) throw Error("constrained edge index out of range");
    if (in_eprime[ei]) throw Error("constrained edge listed twice");
    in_eprime[ei] = 1;
  }
  std::uint32_t touched = 0;
  for (int ei = 0; ei < pattern.edge_count(); ++ei) {
    if (in_eprime[ei]) touched |= pattern.edge_mask(ei);
  }

  std::vector<int> order;
  std::uint32_t placed = 0;
  for (const auto& [a, x] : spec.pinned) {
    order.push_back(a);
    placed |= 1u << a;
  }
  auto eprime_score = [&](int x, std::uint32_t against) {
    int score = 0;
    for (int ei = 0; ei < pattern.edge_count(); ++ei) {
      const auto e = pattern.edge_mask(ei);
      if (in_eprime[ei] && (e >> x & 1u) && (e & against)) ++score;
    }
    return score;
  };
  while (true) {
    int best = -1;
    std::pair<int, int> best_key{-1, -1};
    for (int x = 0; x < v; ++x) {
      if ((placed >> x & 1u) || !(touched >> x & 1u)) continue;
      const std::pair<int, int> key{eprime_score(x, placed), eprime_score(x, ~0u)};
      if (key > best_key) {
        best_key = key;
        best = x;
      }
    }
    if (best < 0) break;
    order.push_back(best);
    placed |= 1u << best;
  }
  core_size_ = order.size();
  for (int x = 0; x < v; ++x) {
    if (!(placed >> x & 1u)) order.push_back(x);
  }
  free_count_ = static_cast<int>(order.size() - core_size_);

  std::uint32_t prefix = 0;
  std::vector<std::pair<int, Vertex>> pins(spec.pinned.begin(), spec.pinned.end());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    Step step;
    step.vertex = order[pos];
    prefix |= 1u << step.vertex;
    if (pos < pins.size()) {
      step.pinned = true;
      step.pin = pins[pos].second;
    }
    for (int ei = 0; ei < pattern.edge_count(); ++ei) {
      const auto e = pattern.edge_mask(ei);
      if (in_eprime[ei] && (e >> step.vertex & 1u) && (e & prefix) == e) {
        step.closing_edges.push_back(ei);
        if (step.anchor < 0) {
          for (int z : pattern.edges()[ei]) {
            if (z != step.vertex) {
              step.anchor = z;
              break;
            }
          }
        }
      }
    }
    steps_.push_back(std::move(step));
  }
}

template <class Leaf>
bool Embedder::search(std::size_t pos, std::vector<Vertex>& image, std::vector<char>& used,
                      std::size_t limit, Leaf& leaf) const {
  if (pos == limit) return leaf(image);
  const Step& step = steps_[pos];
  Vertex buffer[16];

  auto attempt = [&](Vertex y) -> bool {
    if (used[y]) return true;
    image[step.vertex] = y;
    for (int ei : step.closing_edges) {
      const auto& edge = pattern_.edges()[ei];
      for (std::size_t j = 0; j < edge.size(); ++j) buffer[j] = image[edge[j]];
      if (!host_.has_edge({buffer, edge.size()})) {
        image[step.vertex] = kUnplaced;
        return true;
      }
    }
    used[y] = 1;
    const bool keep_going = search(pos + 1, image, used, limit, leaf);
    used[y] = 0;
    image[step.vertex] = kUnplaced;
    return keep_going;
  };

  if (step.pinned) return attempt(step.pin);
  if (step.anchor >= 0) {
    const Vertex hub = image[step.anchor];
    if (host_.arity() == 2) {
      for (auto ei : host_.incident(hub)) {
        const auto e = host_.edge(ei);
        if (!attempt(e[0] == hub ? e[1] : e[0])) return false;
      }
      return true;
    }
    std::vector<Vertex> candidates;
    for (auto ei : host_.incident(hub)) {
      for (Vertex y : host_.edge(ei)) {
        if (y != hub && !used[y]) candidates.push_back(y);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (Vertex y : candidates) {
      if (!attempt(y)) return false;
    }
    return true;
  }
  for (Vertex y = 0; y < static_cast<Vertex>(host_.vertex_count()); ++y) {
    if (!attempt(y)) return false;
  }
  return true;
}

BigInt Embedder::count() const {
  std::vector<Vertex> image(pattern_.vertex_count(), kUnplaced);
  std::vector<char> used(host_.vertex_count(), 0);
  std::uint64_t leaves = 0;
  auto leaf = [&](const std::vector<Vertex>&) {
    ++leaves;
    return true;
  };
  search(0, image, used, core_size_, leaf);
  if (leaves == 0) return 0;
  const auto available = static_cast<std::uint64_t>(host_.vertex_count()) - core_size_;
  return BigInt(leaves) * falling_factorial(available, free_count_);
}

bool Embedder::exists() const {
  if (static_cast<std::uint64_t>(host_.vertex_count()) < steps_.size()) return false;
  std::vector<Vertex> image(pattern_.vertex_count(), kUnplaced);
  std::vector<char> used(host_.vertex_count(), 0);
  bool found = false;
  auto leaf = [&](const std::vector<Vertex>&) {
    found = true;
    return false;
  };
  search(0, image, used, core_size_, leaf);
  return found;
}

void Embedder::for_each(const std::function<bool(std::span<const Vertex>)>& visit) const {
  std::vector<Vertex> image(pattern_.vertex_count(), kUnplaced);
  std::vector<char> used(host_.vertex_count(), 0);
  auto leaf = [&](const std::vector<Vertex>& img) { return visit(img); };
  search(0, image, used, steps_.size(), leaf);
}

void Embedder::for_each_core(
    const std::function<void(std::span<const Vertex>, const BigInt&)>& visit) const {
  std::vector<Vertex> image(pattern_.vertex_count(), kUnplaced);
  std::vector<char> used(host_.vertex_count(), 0);
  const auto available = static_cast<std::uint64_t>(host_.vertex_count()) - core_size_;
  const BigInt multiplicity = static_cast<std::uint64_t>(host_.vertex_count()) < core_size_
                                  ? BigInt(0)
                                  : falling_factorial(available, free_count_);
  if (multiplicity == 0) return;
  auto leaf = [&](const std::vector<Vertex>& img) {
    visit(img, multiplicity);
    return true;
  };
  search(0, image, used, core_size_, leaf);
}

std::vector<LabeledCopy> enumerate_copies(const PatternGraph& pattern, const HostGraph& host) {
  std::vector<LabeledCopy> copies;
  Embedder(pattern, host, ConstraintSpec::all_edges(pattern)).for_each([&](std::span<const Vertex> m) {
    copies.push_back(LabeledCopy{{m.begin(), m.end()}});
    return true;
  });
  std::sort(copies.begin(), copies.end());
  return copies;
}

BigInt copy_degree(const PatternGraph& pattern, const HostGraph& host, Vertex x) {
  if (x >= static_cast<Vertex>(host.vertex_count())) throw Error("vertex out of range");
  BigInt total = 0;
  for (int a = 0; a < pattern.vertex_count(); ++a) {
    total += Embedder(pattern, host, ConstraintSpec::pinned_copy(pattern, a, x)).count();
  }
  return total;
}

std::vector<std::uint64_t> copy_degrees(const PatternGraph& pattern, const HostGraph& host) {
  std::vector<std::uint64_t> degrees(host.vertex_count(), 0);
  Embedder(pattern, host, ConstraintSpec::all_edges(pattern)).for_each([&](std::span<const Vertex> m) {
    for (Vertex y : m) ++degrees[y];
    return true;
  });
  return degrees;
}

std::vector<std::uint64_t> copies_per_edge(const PatternGraph& pattern, const HostGraph& host) {
  std::vector<std::uint64_t> counts(host.edge_count(), 0);
  std::vector<Vertex> buffer(pattern.arity());
  Embedder(pattern, host, ConstraintSpec::all_edges(pattern)).for_each([&](std::span<const Vertex> m) {
    for (const auto& edge : pattern.edges()) {
      for (std::size_t j = 0; j < edge.size(); ++j) buffer[j] = m[edge[j]];
      std::sort(buffer.begin(), buffer.end());
      ++counts[host.index_of_rank(rank_edge(buffer))];
    }
    return true;
  });
  return counts;
}

double expected_copy_degree(const PatternGraph& pattern, int n, double p) {
  const int v = pattern.vertex_count();
  if (n < v) throw Error("need n >= v");
  double falling = 1.0;
  for (int i = 1; i < v; ++i) falling *= static_cast<double>(n - i);
  return v * falling * std::pow(p, pattern.edge_count());
}

BigInt constrained_count(const PatternGraph& pattern, const HostGraph& host,
                         const ConstraintSpec& spec) {
  std::uint32_t pinned_mask = 0;
  for (const auto& [a, x] : spec.pinned) {
    if (a >= 0 && a < pattern.vertex_count()) pinned_mask |= 1u << a;
  }
  for (int ei : spec.constrained_edges) {
    if (ei >= 0 && ei < pattern.edge_count() &&
        (pattern.edge_mask(ei) & pinned_mask) == pattern.edge_mask(ei)) {
      throw Error("constrained edge set E' contains an edge inside A");
    }
  }
  return Embedder(pattern, host, spec).count();
}

}  // namespace hfactor
