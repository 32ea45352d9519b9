#include "hfactor/factor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace hfactor {

int default_factor_cap(int pattern_vertices) {
  if (pattern_vertices <= 2) return 24;
  if (pattern_vertices == 3) return 15;
  return 12;
}

std::uint64_t vertex_mask(std::span<const Vertex> vertices) {
  std::uint64_t mask = 0;
  for (Vertex x : vertices) {
    if (x >= 64) throw Error("vertex id too large for a subset mask");
    mask |= std::uint64_t{1} << x;
  }
  return mask;
}

std::vector<Vertex> mask_vertices(std::uint64_t mask) {
  std::vector<Vertex> out;
  while (mask) {
    out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

namespace {

// Bijections from pattern vertices onto `block` mapping every pattern edge to
// a host edge.
std::uint64_t block_embeddings(const PatternGraph& pattern, const HostGraph& host,
                               const std::vector<Vertex>& block) {
  const int v = pattern.vertex_count();
  // closing[a]: edges whose largest vertex is a (pattern vertices placed in order 0..v-1).
  std::vector<std::vector<int>> closing(v);
  for (int ei = 0; ei < pattern.edge_count(); ++ei) closing[pattern.edges()[ei].back()].push_back(ei);

  std::vector<Vertex> image(v);
  std::vector<char> used(block.size(), 0);
  std::uint64_t count = 0;
  Vertex buffer[16];
  auto rec = [&](auto& self, int a) -> void {
    if (a == v) {
      ++count;
      return;
    }
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (used[j]) continue;
      image[a] = block[j];
      bool ok = true;
      for (int ei : closing[a]) {
        const auto& edge = pattern.edges()[ei];
        for (std::size_t t = 0; t < edge.size(); ++t) buffer[t] = image[edge[t]];
        if (!host.has_edge({buffer, edge.size()})) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[j] = 1;
      self(self, a + 1);
      used[j] = 0;
    }
  };
  rec(rec, 0);
  return count;
}

}  // namespace

FactorCounter::FactorCounter(const PatternGraph& pattern, const HostGraph& host, std::optional<int> cap)
    : pattern_(pattern), host_(host), block_size_(pattern.vertex_count()) {
  if (pattern.arity() != host.arity()) throw Error("pattern and host arities differ");
  const int n = host.vertex_count();
  const int limit = cap.value_or(default_factor_cap(block_size_));
  if (n > limit || n > 64) {
    throw Error("host has " + std::to_string(n) + " vertices; exact factor counting for v=" +
                std::to_string(block_size_) + " is capped at n <= " + std::to_string(std::min(limit, 64)));
  }
  full_mask_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  blocks_by_min_.resize(n);
  if (n < block_size_) return;

  // Walk all v-subsets of [n] in lexicographic order.
  std::vector<Vertex> block(block_size_);
  for (int i = 0; i < block_size_; ++i) block[i] = i;
  while (true) {
    const auto emb = block_embeddings(pattern_, host_, block);
    if (emb > 0) blocks_by_min_[block[0]].push_back(Block{vertex_mask(block), emb});
    int i = block_size_ - 1;
    while (i >= 0 && block[i] == static_cast<Vertex>(n - block_size_ + i)) --i;
    if (i < 0) break;
    ++block[i];
    for (int j = i + 1; j < block_size_; ++j) block[j] = block[j - 1] + 1;
  }
}

std::uint64_t FactorCounter::count_small(std::uint64_t uncovered) {
  if (uncovered == 0) return 1;
  if (std::popcount(uncovered) % block_size_ != 0) return 0;
  if (auto it = small_memo_.find(uncovered); it != small_memo_.end()) return it->second;
  const int low = std::countr_zero(uncovered);
  std::uint64_t total = 0;
  for (const auto& b : blocks_by_min_[low]) {
    if (b.mask & ~uncovered) continue;
    const std::uint64_t rest = count_small(uncovered & ~b.mask);
    if (rest == 0) continue;
    std::uint64_t term;
    if (__builtin_mul_overflow(rest, b.embeddings, &term)) throw Overflow{};
    if (__builtin_add_overflow(total, term, &total)) throw Overflow{};
  }
  small_memo_.emplace(uncovered, total);
  return total;
}

BigInt FactorCounter::count_big(std::uint64_t uncovered) {
  if (uncovered == 0) return 1;
  if (std::popcount(uncovered) % block_size_ != 0) return 0;
  if (auto it = big_memo_.find(uncovered); it != big_memo_.end()) return it->second;
  const int low = std::countr_zero(uncovered);
  BigInt total = 0;
  for (const auto& b : blocks_by_min_[low]) {
    if (b.mask & ~uncovered) continue;
    BigInt rest = count_big(uncovered & ~b.mask);
    if (rest == 0) continue;
    total += rest * b.embeddings;
  }
  big_memo_.emplace(uncovered, total);
  return total;
}

BigInt FactorCounter::count(std::uint64_t uncovered) {
  if (uncovered & ~full_mask_) throw Error("vertex mask outside the host");
  if (!big_mode_) {
    try {
      return count_small(uncovered);
    } catch (const Overflow&) {
      big_mode_ = true;
      small_memo_.clear();
    }
  }
  return count_big(uncovered);
}

bool FactorCounter::exists_rec(std::uint64_t uncovered) {
  if (uncovered == 0) return true;
  if (std::popcount(uncovered) % block_size_ != 0) return false;
  if (auto it = exists_memo_.find(uncovered); it != exists_memo_.end()) return it->second;
  const int low = std::countr_zero(uncovered);
  bool found = false;
  for (const auto& b : blocks_by_min_[low]) {
    if ((b.mask & ~uncovered) == 0 && exists_rec(uncovered & ~b.mask)) {
      found = true;
      break;
    }
  }
  exists_memo_.emplace(uncovered, found);
  return found;
}

bool FactorCounter::exists(std::uint64_t uncovered) {
  if (uncovered & ~full_mask_) throw Error("vertex mask outside the host");
  return exists_rec(uncovered);
}

namespace {

void require_divisible(const PatternGraph& pattern, int n) {
  if (n % pattern.vertex_count() != 0) {
    throw Error("n = " + std::to_string(n) + " is not divisible by v = " +
                std::to_string(pattern.vertex_count()));
  }
}

FactorCount with_unlabeled(const PatternGraph& pattern, int n, BigInt labeled) {
  const BigInt aut_power = boost::multiprecision::pow(BigInt(automorphism_count(pattern)),
                                                      static_cast<unsigned>(n / pattern.vertex_count()));
  if (labeled % aut_power != 0) {
    throw InvariantViolation("labeled factor count " + labeled.str() + " not divisible by |Aut(H)|^(n/v)");
  }
  FactorCount out;
  out.unlabeled = labeled / aut_power;
  out.labeled = std::move(labeled);
  return out;
}

}  // namespace

FactorCount count_factors(const PatternGraph& pattern, const HostGraph& host, std::optional<int> cap) {
  require_divisible(pattern, host.vertex_count());
  FactorCounter counter(pattern, host, cap);
  return with_unlabeled(pattern, host.vertex_count(), counter.total());
}

bool has_factor(const PatternGraph& pattern, const HostGraph& host, std::optional<int> cap) {
  require_divisible(pattern, host.vertex_count());
  FactorCounter counter(pattern, host, cap);
  return counter.exists(counter.all_vertices());
}

FactorCount complete_graph_count(const PatternGraph& pattern, int n) {
  require_divisible(pattern, n);
  if (n < 0) throw Error("n must be non-negative");
  return with_unlabeled(pattern, n, factorial(n) / factorial(n / pattern.vertex_count()));
}

double expected_factor_count(const PatternGraph& pattern, int n, double p) {
  require_divisible(pattern, n);
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  const BigInt labeled = factorial(n) / factorial(n / pattern.vertex_count());
  const double exponent = static_cast<double>(pattern.edge_count()) * n / pattern.vertex_count();
  const double direct = labeled.convert_to<double>() * std::pow(p, exponent);
  if (std::isfinite(direct)) return direct;
  return std::exp(log_of(labeled) + exponent * std::log(p));
}

Rational edge_fraction(const PatternGraph& pattern, const HostGraph& host, std::span<const Vertex> edge) {
  if (!host.has_edge(edge)) throw Error("edge is not present in the host");
  FactorCounter before(pattern, host);
  const BigInt phi = before.total();
  if (phi == 0) throw Error("host has no H-factor; edge fraction undefined");
  const HostGraph reduced = host.without_edge(edge);
  FactorCounter after(pattern, reduced);
  return Rational(1) - Rational(after.total(), phi);
}

BigInt weight_w(const PatternGraph& pattern, const HostGraph& host, std::span<const Vertex> z) {
  const int v = pattern.vertex_count();
  const int n = host.vertex_count();
  if (static_cast<int>(z.size()) > v) throw Error("|Z| must not exceed v");
  FactorCounter counter(pattern, host);
  const std::uint64_t base = vertex_mask(z);
  if (std::popcount(base) != static_cast<int>(z.size())) throw Error("Z has repeated vertices");
  const int extra = v - static_cast<int>(z.size());
  if (extra == 0) return counter.without(base);

  std::vector<Vertex> rest;
  for (int x = 0; x < n; ++x) {
    if (!(base >> x & 1u)) rest.push_back(x);
  }
  if (static_cast<int>(rest.size()) < extra) return 0;
  BigInt total = 0;
  std::vector<int> idx(extra);
  for (int i = 0; i < extra; ++i) idx[i] = i;
  while (true) {
    std::uint64_t mask = base;
    for (int i : idx) mask |= std::uint64_t{1} << rest[i];
    total += counter.without(mask);
    int i = extra - 1;
    while (i >= 0 && idx[i] == static_cast<int>(rest.size()) - extra + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < extra; ++j) idx[j] = idx[j - 1] + 1;
  }
  return total;
}

WeightStats b_statistic(FactorCounter& counter) {
  WeightStats stats;
  stats.phi = counter.total();
  if (stats.phi == 0) throw Error("host has no H-factor");
  const auto copies = enumerate_copies(counter.pattern(), counter.host());
  if (copies.empty()) throw Error("host has no copies of H");
  BigInt sum = 0;
  stats.max = 0;
  stats.weights.reserve(copies.size());
  for (const auto& copy : copies) {
    BigInt w = counter.without(vertex_mask(copy.mapping));
    sum += w;
    if (w > stats.max) stats.max = w;
    stats.weights.push_back(CopyWeight{copy, std::move(w)});
  }
  const BigInt count = copies.size();
  stats.mean = to_double(Rational(sum, count));
  stats.maxr = to_double(Rational(stats.max * count, sum));
  return stats;
}

WeightStats b_statistic(const PatternGraph& pattern, const HostGraph& host) {
  FactorCounter counter(pattern, host);
  return b_statistic(counter);
}

CStatistic c_statistic(const PatternGraph& pattern, const HostGraph& host) {
  const int v = pattern.vertex_count();
  const int n = host.vertex_count();
  FactorCounter counter(pattern, host);
  CStatistic out;
  out.phi = counter.total();
  if (out.phi == 0) throw Error("host has no H-factor");
  const Rational floor_term(out.phi, boost::multiprecision::pow(BigInt(n), 2 * (v - 1)));
  out.worst_ratio = -1;

  const int y_size = v - 1;
  std::vector<Vertex> y(y_size);
  for (int i = 0; i < y_size; ++i) y[i] = i;
  std::vector<BigInt> values;
  while (true) {
    const std::uint64_t y_mask = vertex_mask(y);
    values.clear();
    for (int x = 0; x < n; ++x) {
      if (y_mask >> x & 1u) continue;
      values.push_back(counter.without(y_mask | (std::uint64_t{1} << x)));
    }
    std::sort(values.begin(), values.end());
    const BigInt& max = values.back();
    const BigInt& median = values[(values.size() - 1) / 2];
    const Rational bound = std::max(floor_term, Rational(2 * median));
    const double ratio = to_double(Rational(max) / bound);
    ++out.sets_checked;
    if (Rational(max) > bound) {
      ++out.violations;
      out.holds = false;
    }
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_set = y;
      out.worst_max = max;
      out.worst_median = median;
    }
    int i = y_size - 1;
    while (i >= 0 && y[i] == static_cast<Vertex>(n - y_size + i)) --i;
    if (i < 0) break;
    ++y[i];
    for (int j = i + 1; j < y_size; ++j) y[j] = y[j - 1] + 1;
  }
  return out;
}

}  // namespace hfactor
