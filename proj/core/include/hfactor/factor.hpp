#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hfactor/common.hpp"
#include "hfactor/embed.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

/// Largest host size accepted by exact factor counting for a pattern on v
/// vertices: 24 for v = 2, 15 for v = 3, 12 otherwise.
int default_factor_cap(int pattern_vertices);

/// H-factor counts. `labeled` counts sets of n/v labeled copies whose images
/// partition V; `unlabeled` = labeled / |Aut(H)|^{n/v}.
struct FactorCount {
  BigInt labeled;
  BigInt unlabeled;
};

/// Exact labeled H-factor counts of induced subgraphs G[U], U a vertex mask.
///
///   f(empty) = 1
///   f(U)     = sum over v-sets B in U containing min(U) of emb(B) * f(U \ B)
///
/// where emb(B) is the number of bijections V(H) -> B taking pattern edges to
/// host edges. Results are memoized on U, so weight queries w_G(Z) = f(V \ Z)
/// against the same host share work. Arithmetic runs in checked 64-bit
/// integers and switches to big integers on the first overflow.
class FactorCounter {
 public:
  FactorCounter(const PatternGraph& pattern, const HostGraph& host,
                std::optional<int> cap = std::nullopt);

  const PatternGraph& pattern() const { return pattern_; }
  const HostGraph& host() const { return host_; }
  std::uint64_t all_vertices() const { return full_mask_; }

  /// f(U).
  BigInt count(std::uint64_t uncovered);
  /// Phi(G).
  BigInt total() { return count(full_mask_); }
  /// Phi(G - Z).
  BigInt without(std::uint64_t removed) { return count(full_mask_ & ~removed); }
  /// Whether f(U) > 0, with early exit.
  bool exists(std::uint64_t uncovered);

  std::size_t memo_size() const { return small_memo_.size() + big_memo_.size(); }

 private:
  struct Block {
    std::uint64_t mask;
    std::uint64_t embeddings;
  };
  struct Overflow {};

  std::uint64_t count_small(std::uint64_t uncovered);
  BigInt count_big(std::uint64_t uncovered);
  bool exists_rec(std::uint64_t uncovered);

  const PatternGraph& pattern_;
  const HostGraph& host_;
  int block_size_;
  std::uint64_t full_mask_;
  std::vector<std::vector<Block>> blocks_by_min_;
  bool big_mode_ = false;
  std::unordered_map<std::uint64_t, std::uint64_t> small_memo_;
  std::unordered_map<std::uint64_t, BigInt> big_memo_;
  std::unordered_map<std::uint64_t, bool> exists_memo_;
};

FactorCount count_factors(const PatternGraph& pattern, const HostGraph& host,
                          std::optional<int> cap = std::nullopt);

bool has_factor(const PatternGraph& pattern, const HostGraph& host,
                std::optional<int> cap = std::nullopt);

/// n!/(n/v)! labeled; divided by |Aut(H)|^{n/v} unlabeled.
FactorCount complete_graph_count(const PatternGraph& pattern, int n);

/// E Phi_labeled(G(n,p)) = (n!/(n/v)!) p^{mn/v}.
double expected_factor_count(const PatternGraph& pattern, int n, double p);

/// 1 - Phi(G - e)/Phi(G): the fraction of factors whose edge set contains e.
Rational edge_fraction(const PatternGraph& pattern, const HostGraph& host,
                       std::span<const Vertex> edge);

/// |Z| = v: Phi(G - Z). |Z| < v: sum over v-sets Z' containing Z of Phi(G - Z').
BigInt weight_w(const PatternGraph& pattern, const HostGraph& host, std::span<const Vertex> z);

struct CopyWeight {
  LabeledCopy copy;
  BigInt weight;
};

/// Copy weights w_G(K) = Phi(G - V(K)) and their summary.
struct WeightStats {
  std::vector<CopyWeight> weights;
  BigInt phi;
  double mean = 0;
  BigInt max;
  double maxr = 0;  // max / mean

  bool property_b(double level) const { return maxr <= level; }
};

WeightStats b_statistic(const PatternGraph& pattern, const HostGraph& host);
WeightStats b_statistic(FactorCounter& counter);

/// Per (v-1)-set Y: the completions w(Y + x), x not in Y, their max and
/// lower median, and whether max <= max(n^{-2(v-1)} Phi, 2 med).
struct CStatistic {
  BigInt phi;
  std::size_t sets_checked = 0;
  std::size_t violations = 0;
  bool holds = true;
  std::vector<Vertex> worst_set;
  BigInt worst_max;
  BigInt worst_median;
  double worst_ratio = 0;  // max / max(n^{-2(v-1)} Phi, 2 med); > 1 means violated
  std::string median_rule = "lower";
};

CStatistic c_statistic(const PatternGraph& pattern, const HostGraph& host);

std::uint64_t vertex_mask(std::span<const Vertex> vertices);
std::vector<Vertex> mask_vertices(std::uint64_t mask);

}  // namespace hfactor
