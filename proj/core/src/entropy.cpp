#include "hfactor/entropy.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hfactor/factor.hpp"

namespace hfactor {
namespace {

constexpr double kLogTolerance = 1e-9;

CopyDistribution distribution_at(FactorCounter& counter, const BigInt& phi, Vertex y) {
  const auto& pattern = counter.pattern();
  const auto& host = counter.host();
  CopyDistribution dist;
  dist.y = y;
  std::vector<LabeledCopy> through;
  for (int a = 0; a < pattern.vertex_count(); ++a) {
    Embedder(pattern, host, ConstraintSpec::pinned_copy(pattern, a, y))
        .for_each([&](std::span<const Vertex> m) {
          through.push_back(LabeledCopy{{m.begin(), m.end()}});
          return true;
        });
  }
  std::sort(through.begin(), through.end());

  BigInt total = 0;
  const double log_phi = log_of(phi);
  for (auto& copy : through) {
    const BigInt w = counter.without(vertex_mask(copy.mapping));
    if (w == 0) {
      ++dist.zero_weight_excluded;
      continue;
    }
    total += w;
    const double log_p = log_of(w) - log_phi;
    const double p = to_double(Rational(w, phi));
    dist.probabilities.push_back(p);
    dist.entropy -= p * log_p;
    dist.copies.push_back(std::move(copy));
  }
  // Every factor has exactly one copy through y.
  if (total != phi) {
    throw InvariantViolation("copy weights through a vertex do not sum to the factor count");
  }
  return dist;
}

}  // namespace

CopyDistribution copy_distribution(const PatternGraph& pattern, const HostGraph& host, Vertex y) {
  if (y >= static_cast<Vertex>(host.vertex_count())) throw Error("vertex out of range");
  FactorCounter counter(pattern, host);
  const BigInt phi = counter.total();
  if (phi == 0) throw Error("host has no H-factor");
  return distribution_at(counter, phi, y);
}

ShearerReport shearer_check(const PatternGraph& pattern, const HostGraph& host) {
  FactorCounter counter(pattern, host);
  const BigInt phi = counter.total();
  if (phi == 0) throw Error("host has no H-factor");
  ShearerReport report;
  report.log_phi = log_of(phi);
  double sum = 0;
  for (Vertex y = 0; y < static_cast<Vertex>(host.vertex_count()); ++y) {
    const double h = distribution_at(counter, phi, y).entropy;
    report.vertex_entropy.push_back(h);
    sum += h;
  }
  report.bound = sum / pattern.vertex_count();
  report.slack = report.bound - report.log_phi;
  report.holds = report.log_phi <= report.bound + kLogTolerance;
  return report;
}

WeightedFamily WeightedFamily::from_weights(std::vector<double> weights) {
  WeightedFamily family;
  family.ids.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) family.ids.push_back(std::to_string(i));
  family.weights = std::move(weights);
  return family;
}

double WeightedFamily::total() const {
  double sum = 0;
  for (double w : weights) sum += w;
  return sum;
}

namespace {

std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return std::nullopt;
  return value;
}

template <class Row>
void for_each_csv_row(std::string_view text, Row&& row) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (line.front() == '#') continue;
    row(split_csv_row(line), line_no);
  }
}

}  // namespace

WeightedFamily parse_weight_family_csv(std::string_view text) {
  WeightedFamily family;
  bool first = true;
  for_each_csv_row(text, [&](const std::vector<std::string>& cells, std::size_t line_no) {
    const auto weight = parse_double(cells.back());
    if (!weight) {
      if (first) {
        first = false;
        return;
      }
      throw Error("line " + std::to_string(line_no) + ": weight is not a number");
    }
    first = false;
    if (!(*weight >= 0) || !std::isfinite(*weight)) {
      throw Error("line " + std::to_string(line_no) + ": weights must be finite and nonnegative");
    }
    std::string id;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) id += (i ? ":" : "") + cells[i];
    if (id.empty()) id = std::to_string(family.weights.size());
    family.ids.push_back(std::move(id));
    family.weights.push_back(*weight);
  });
  return family;
}

EntropyWindow entropy_window(const WeightedFamily& family) {
  EntropyWindow out;
  std::vector<std::size_t> support;
  double total = 0;
  for (std::size_t i = 0; i < family.weights.size(); ++i) {
    const double w = family.weights[i];
    if (!(w >= 0) || !std::isfinite(w)) throw Error("weights must be finite and nonnegative");
    if (w == 0) {
      ++out.zero_weight_removed;
      continue;
    }
    support.push_back(i);
    total += w;
  }
  if (support.empty()) throw Error("weighted family has no positive weight");
  out.size = support.size();

  for (auto i : support) {
    const double q = family.weights[i] / total;
    out.entropy -= q * std::log(q);
  }
  const double size = static_cast<double>(out.size);
  out.k = std::log(size) - out.entropy;
  out.log_c = 4.0 * (out.k + std::log(3.0));
  out.c = std::exp(out.log_c);
  const double mean = total / size;
  out.a = mean / out.c;
  out.b = out.c * mean;

  double in_window = 0;
  for (auto i : support) {
    const double w = family.weights[i];
    if (w >= out.a && w <= out.b) {
      out.window.push_back(i);
      in_window += w;
    }
  }
  out.wj_ratio = in_window / total;
  out.j_frac = static_cast<double>(out.window.size()) / size;
  out.j_frac_floor = std::exp(-(out.k + std::log(3.0)) / 0.7);
  out.guarantees_hold = out.wj_ratio > 0.7 && out.j_frac >= out.j_frac_floor;
  return out;
}

SubsetWeights parse_subset_weights_csv(std::string_view text, int n, int v) {
  SubsetWeights out;
  out.n = n;
  out.v = v;
  bool first = true;
  for_each_csv_row(text, [&](const std::vector<std::string>& cells, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (first) {
      first = false;
      if (!parse_double(cells.front())) return;  // header
    }
    if (cells.size() != static_cast<std::size_t>(v) + 1) {
      throw Error(where + "expected " + std::to_string(v) + " vertex columns and a weight");
    }
    std::uint32_t mask = 0;
    long previous = -1;
    for (int j = 0; j < v; ++j) {
      long x = 0;
      const auto& cell = cells[j];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || x < 0 || x >= n) {
        throw Error(where + "vertex id must be an integer in [0, n)");
      }
      if (x <= previous) throw Error(where + "vertex ids must be strictly increasing");
      previous = x;
      mask |= 1u << x;
    }
    const auto weight = parse_double(cells.back());
    if (!weight || !(*weight >= 0) || !std::isfinite(*weight)) {
      throw Error(where + "weight must be a finite nonnegative number");
    }
    if (!out.weights.emplace(mask, *weight).second) throw Error(where + "duplicate subset");
  });
  return out;
}

WeightLemmaReport weight_lemma_check(const SubsetWeights& sw, double bound) {
  const int n = sw.n;
  const int v = sw.v;
  if (!(n > v && v >= 2)) throw Error("weight lemma needs n > v >= 2");
  if (n > 20) throw Error("weight lemma verifier is exhaustive; n must be at most 20");
  if (!(bound > 0) || !std::isfinite(bound)) throw Error("B must be a positive number");
  for (const auto& [mask, w] : sw.weights) {
    if (std::popcount(mask) != v || (mask >> n) != 0) throw Error("malformed weight map: key is not a v-subset of [n]");
    if (!(w >= 0) || !std::isfinite(w)) throw Error("malformed weight map: negative or non-finite weight");
  }

  const std::uint32_t universe = 1u << n;
  // psi(X) for |X| <= v, filled from the v-sets down.
  std::vector<double> psi(universe, 0.0);
  std::vector<std::uint32_t> v_sets;
  for (std::uint32_t mask = 0; mask < universe; ++mask) {
    if (std::popcount(mask) == v) {
      v_sets.push_back(mask);
      psi[mask] = sw.at(mask);
    }
  }
  for (int size = v - 1; size >= 0; --size) {
    for (std::uint32_t mask = 0; mask < universe; ++mask) {
      if (std::popcount(mask) != size) continue;
      double best = 0;
      for (int x = 0; x < n; ++x) {
        if (!(mask >> x & 1u)) best = std::max(best, psi[mask | (1u << x)]);
      }
      psi[mask] = best;
    }
  }

  // good[X] counts completions Z of X with w(Z) >= psi(X) / 2^{v-|X|}.
  std::vector<std::uint32_t> good(universe, 0);
  for (auto z : v_sets) {
    const double w = psi[z];
    // Every subset X of Z with |X| <= v-1.
    for (std::uint32_t x = z;; x = (x - 1) & z) {
      const int i = v - std::popcount(x);
      if (i >= 1 && w >= std::ldexp(psi[x], -i)) ++good[x];
      if (x == 0) break;
    }
  }

  WeightLemmaReport report;
  const double half_gap = (n - v) / 2.0;
  for (std::uint32_t y = 0; y < universe; ++y) {
    if (std::popcount(y) != v - 1 || psi[y] < bound) continue;
    ++report.hypothesis_sets_checked;
    if (good[y] < half_gap && report.hypothesis_holds) {
      report.hypothesis_holds = false;
      report.hypothesis_counterexample = mask_vertices(y);
    }
  }
  if (!report.hypothesis_holds) return report;

  double factorial_im1 = 1;
  for (int i = 1; i <= v; ++i) {
    if (i > 1) factorial_im1 *= (i - 1);
    const double required = std::pow(half_gap, i) / factorial_im1;
    const double level = std::ldexp(bound, i - 1);
    for (std::uint32_t x = 0; x < universe; ++x) {
      if (std::popcount(x) != v - i || psi[x] < level) continue;
      ++report.conclusion_sets_checked;
      if (good[x] < required && report.conclusion_holds) {
        report.conclusion_holds = false;
        report.counterexample = mask_vertices(x);
        report.counterexample_i = i;
        report.counterexample_count = good[x];
        report.counterexample_required = required;
      }
    }
  }
  return report;
}

}  // namespace hfactor
