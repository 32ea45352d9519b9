#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hfactor/common.hpp"
#include "hfactor/embed.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

/// Law of the copy covering y in a uniformly random labeled H-factor:
/// Pr(K) = w_G(K) / sum over K' containing y of w_G(K'). Entropy in nats.
struct CopyDistribution {
  Vertex y = 0;
  std::vector<LabeledCopy> copies;      // positive-weight copies only
  std::vector<double> probabilities;
  double entropy = 0;
  std::size_t zero_weight_excluded = 0;
};

CopyDistribution copy_distribution(const PatternGraph& pattern, const HostGraph& host, Vertex y);

struct ShearerReport {
  double log_phi = 0;
  double bound = 0;            // (1/v) sum_y h(y, G)
  double slack = 0;            // bound - log_phi
  std::vector<double> vertex_entropy;
  bool holds = true;           // log_phi <= bound + 1e-9
};

ShearerReport shearer_check(const PatternGraph& pattern, const HostGraph& host);

/// A finite set with nonnegative weights.
struct WeightedFamily {
  std::vector<std::string> ids;
  std::vector<double> weights;

  static WeightedFamily from_weights(std::vector<double> weights);
  double total() const;
};

/// Reads rows "<id columns...>,weight"; the last column is the weight and the
/// rest joined with ':' form the id. A header row is skipped when its last
/// cell is not numeric.
WeightedFamily parse_weight_family_csv(std::string_view text);

/// The constructive window: K = log|S| - H(X), log C = 4(K + log 3),
/// a = mean/C, b = C*mean, J = {x : a <= w(x) <= b}.
struct EntropyWindow {
  std::size_t size = 0;            // |S| after dropping zero weights
  std::size_t zero_weight_removed = 0;
  double entropy = 0;              // H(X), nats
  double k = 0;
  double c = 0;
  double log_c = 0;
  double a = 0;
  double b = 0;
  std::vector<std::size_t> window;  // indices into the input family
  double wj_ratio = 0;             // w(J)/w(S)
  double j_frac = 0;               // |J|/|S|
  double j_frac_floor = 0;         // exp(-(K + log 3)/0.7)
  bool guarantees_hold = true;     // wj_ratio > 0.7 and j_frac >= j_frac_floor
};

EntropyWindow entropy_window(const WeightedFamily& family);

/// Weights on v-subsets of [n], keyed by vertex bitmask. Missing subsets
/// weigh 0.
struct SubsetWeights {
  int n = 0;
  int v = 0;
  std::unordered_map<std::uint32_t, double> weights;

  double at(std::uint32_t mask) const {
    auto it = weights.find(mask);
    return it == weights.end() ? 0.0 : it->second;
  }
};

/// CSV rows "z1,...,zv,weight" with sorted vertex ids; an optional header row
/// is skipped.
SubsetWeights parse_subset_weights_csv(std::string_view text, int n, int v);

struct WeightLemmaReport {
  bool hypothesis_holds = true;
  bool conclusion_holds = true;
  std::size_t hypothesis_sets_checked = 0;   // Y with psi(Y) >= B
  std::size_t conclusion_sets_checked = 0;   // X with psi(X) >= 2^{i-1} B, over all i
  std::optional<std::vector<Vertex>> hypothesis_counterexample;
  std::optional<std::vector<Vertex>> counterexample;
  int counterexample_i = 0;
  double counterexample_count = 0;
  double counterexample_required = 0;
};

/// Checks the hypothesis (every (v-1)-set Y with psi(Y) >= B has at least
/// (n-v)/2 completions Z with w(Z) >= psi(Y)/2) and, when it holds, the
/// conclusion for every X with |X| = v-i, 1 <= i <= v, psi(X) >= 2^{i-1} B:
/// at least ((n-v)/2)^i/(i-1)! completions with w(Z) >= 2^{-i} psi(X).
/// psi(X) is the max weight over v-sets containing X. Exhaustive.
WeightLemmaReport weight_lemma_check(const SubsetWeights& weights, double bound);

}  // namespace hfactor
