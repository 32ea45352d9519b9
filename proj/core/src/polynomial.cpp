#include "hfactor/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hfactor/parallel.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {
namespace {

struct EdgeSetHash {
  std::size_t operator()(const std::vector<std::uint64_t>& key) const {
    std::uint64_t h = key.size();
    for (auto r : key) h = mix64(h ^ r);
    return static_cast<std::size_t>(h);
  }
};

using EdgeSetCounts = std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, EdgeSetHash>;

// Visits every anchored placement of the E'-incident vertices with U = phi(E')
// as sorted edge ranks. Each placement stands for `multiplicity` injections.
void for_each_term(const CopyPolynomial& f,
                   const std::function<void(const std::vector<std::uint64_t>&)>& visit,
                   BigInt& multiplicity) {
  const auto& pattern = f.pattern();
  std::vector<std::uint64_t> u(f.degree());
  std::vector<Vertex> buffer(pattern.arity());
  multiplicity = 0;
  Embedder(pattern, f.complete_host(), f.anchor())
      .for_each_core([&](std::span<const Vertex> image, const BigInt& mult) {
        multiplicity = mult;
        for (int j = 0; j < f.degree(); ++j) {
          const auto& edge = pattern.edges()[f.anchor().constrained_edges[j]];
          for (std::size_t t = 0; t < edge.size(); ++t) buffer[t] = image[edge[t]];
          std::sort(buffer.begin(), buffer.end());
          u[j] = rank_edge(buffer);
        }
        std::sort(u.begin(), u.end());
        visit(u);
      });
}

double scaled(const BigInt& count, const BigInt& multiplicity, const BigInt& normalization) {
  return to_double(Rational(count * multiplicity, normalization));
}

std::vector<std::uint64_t> edge_ranks(const std::vector<std::vector<Vertex>>& edges, int arity) {
  std::vector<std::uint64_t> ranks;
  for (auto e : edges) {
    if (static_cast<int>(e.size()) != arity) throw Error("derivative set edge has the wrong arity");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw Error("repeated vertex in an edge");
    ranks.push_back(rank_edge(e));
  }
  std::sort(ranks.begin(), ranks.end());
  if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) throw Error("derivative set repeats an edge");
  return ranks;
}

}  // namespace

CopyPolynomial::CopyPolynomial(PatternGraph pattern, int n, ConstraintSpec anchor, CoefficientScale scale)
    : pattern_(std::move(pattern)), n_(n), anchor_(std::move(anchor)), scale_(scale) {
  if (n_ < pattern_.vertex_count()) throw Error("polynomial needs n >= v");
  if (n_ > kMaxPolynomialHost) {
    throw Error("polynomial host size capped at n <= " + std::to_string(kMaxPolynomialHost));
  }
  std::sort(anchor_.constrained_edges.begin(), anchor_.constrained_edges.end());
  complete_ = HostGraph::complete(pattern_.arity(), n_);
  injections_ = constrained_count(pattern_, complete_, anchor_);
  if (scale_ == CoefficientScale::Normalized && injections_ > 0) {
    EdgeSetCounts full;
    BigInt mult;
    for_each_term(*this, [&](const std::vector<std::uint64_t>& u) { ++full[u]; }, mult);
    std::uint64_t best = 0;
    for (const auto& [u, c] : full) best = std::max(best, c);
    normalization_ = BigInt(best) * mult;
  }
}

CopyPolynomial CopyPolynomial::copies_through(const PatternGraph& pattern, int n, int a, CoefficientScale scale) {
  return CopyPolynomial(pattern, n, ConstraintSpec::pinned_copy(pattern, a, 0), scale);
}

double CopyPolynomial::evaluate(const HostGraph& host) const {
  if (host.vertex_count() != n_ || host.arity() != pattern_.arity()) throw Error("host does not match polynomial");
  return to_double(Rational(Embedder(pattern_, host, anchor_).count(), normalization_));
}

double expectation(const CopyPolynomial& f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  return to_double(Rational(f.injection_count(), f.normalization())) * std::pow(p, f.degree());
}

double derivative_expectation(const CopyPolynomial& f, const std::vector<std::vector<Vertex>>& l, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  if (static_cast<int>(l.size()) > f.degree()) throw Error("|L| exceeds the polynomial degree");
  if (l.empty()) return expectation(f, p);
  for (const auto& e : l) {
    for (Vertex x : e) {
      if (x >= static_cast<Vertex>(f.n())) throw Error("derivative set vertex out of range");
    }
  }
  const auto target = edge_ranks(l, f.pattern().arity());
  std::uint64_t hits = 0;
  BigInt mult;
  for_each_term(f, [&](const std::vector<std::uint64_t>& u) {
    hits += std::includes(u.begin(), u.end(), target.begin(), target.end());
  }, mult);
  if (hits == 0) return 0.0;
  return scaled(hits, mult, f.normalization()) * std::pow(p, f.degree() - static_cast<int>(target.size()));
}

DerivativeProfile derivative_profile(const CopyPolynomial& f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  const int d = f.degree();
  if (d > 20) throw Error("derivative profile supports degree <= 20");
  DerivativeProfile out;
  out.degree = d;
  out.expectation = expectation(f, p);
  out.e_j.assign(d, 0.0);
  out.e_star = out.expectation;

  // Core placements times subsets per placement.
  BigInt core_leaves = 0;
  Embedder(f.pattern(), f.complete_host(), f.anchor())
      .for_each_core([&](std::span<const Vertex>, const BigInt&) { ++core_leaves; });
  if (core_leaves * (BigInt(1) << d) > kDerivativeWorkCap) {
    throw Error("derivative profile work cap exceeded (" + core_leaves.str() + " placements x 2^" +
                std::to_string(d) + "); reduce n or pin more vertices");
  }

  EdgeSetCounts table;
  std::vector<std::uint64_t> l;
  BigInt mult;
  for_each_term(f, [&](const std::vector<std::uint64_t>& u) {
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
      l.clear();
      for (int j = 0; j < d; ++j) {
        if (mask >> j & 1u) l.push_back(u[j]);
      }
      ++table[l];
    }
  }, mult);
  out.distinct_sets = table.size();

  const double log_n = std::log(static_cast<double>(f.n()));
  for (const auto& [set, count] : table) {
    const int size = static_cast<int>(set.size());
    const double value = scaled(count, mult, f.normalization()) * std::pow(p, d - size);
    out.e_j[size - 1] = std::max(out.e_j[size - 1], value);
    if (size < d) {
      out.e_star = std::max(out.e_star, value);
      out.eprime_max = std::max(out.eprime_max, value);
      if (value > 0 && out.expectation > 0) {
        const double exponent = std::log(out.expectation / value) / log_n;
        out.min_exponent = out.min_exponent ? std::min(*out.min_exponent, exponent) : exponent;
      }
    }
  }
  return out;
}

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::KV: return "KV";
    case Theorem::V: return "V";
    case Theorem::Combination: return "Combination";
    case Theorem::Cor5_5: return "Cor5_5";
    case Theorem::Inhomog: return "Inhomog";
    case Theorem::Cor5_8: return "Cor5_8";
    case Theorem::LastVu: return "LastVu";
  }
  return "unknown";
}

Theorem parse_theorem(const std::string& name) {
  for (auto t : {Theorem::KV, Theorem::V, Theorem::Combination, Theorem::Cor5_5, Theorem::Inhomog,
                 Theorem::Cor5_8, Theorem::LastVu}) {
    if (to_string(t) == name) return t;
  }
  throw Error("unknown theorem '" + name + "' (KV, V, Combination, Cor5_5, Inhomog, Cor5_8, LastVu)");
}

HypothesisReport hypothesis_check(const CopyPolynomial& f, double p, double eps, Theorem theorem,
                                  const HypothesisOptions& options) {
  if (!(eps > 0)) throw Error("eps must be positive");
  HypothesisReport r;
  r.theorem = theorem;
  r.eps = eps;
  r.profile = derivative_profile(f, p);
  const auto& prof = r.profile;
  const double n = f.n();
  const double log_n = std::log(n);
  const double n_eps = std::pow(n, eps);
  r.omega_threshold = options.omega_threshold.value_or(10.0 * log_n);
  r.a_bound = options.a_bound.value_or(prof.expectation);
  const double e = prof.expectation;
  const int d = prof.degree;

  double max_all = 0;    // max over 1 <= j <= d
  double max_inner = 0;  // max over 1 <= j <= d-1
  for (int j = 1; j <= d; ++j) {
    max_all = std::max(max_all, prof.e_j[j - 1]);
    if (j < d) max_inner = std::max(max_inner, prof.e_j[j - 1]);
  }
  // Nonconstant part of the derivative at L = {}: E f unless f is constant.
  const double eprime_with_empty = std::max(prof.eprime_max, d >= 1 ? e : 0.0);

  auto ratio = [](double quantity, double allowed) {
    if (quantity == 0) return 0.0;
    return allowed > 0 ? quantity / allowed : std::numeric_limits<double>::infinity();
  };

  switch (theorem) {
    case Theorem::KV:
      r.expectation_ok = true;
      r.binding_ratio = ratio(n_eps * max_all, e);
      break;
    case Theorem::V:
      r.expectation_ok = e >= r.omega_threshold;
      r.binding_ratio = ratio(max_inner, 1.0 / n_eps);
      break;
    case Theorem::Combination:
      r.expectation_ok = e >= r.omega_threshold;
      r.binding_ratio = ratio(max_inner, e / n_eps);
      break;
    case Theorem::Cor5_5:
      r.expectation_ok = e <= r.a_bound;
      r.binding_ratio = ratio(r.omega_threshold + n_eps * max_inner, r.a_bound);
      break;
    case Theorem::Inhomog:
      r.expectation_ok = e >= r.omega_threshold;
      r.binding_ratio = ratio(prof.eprime_max, e / n_eps);
      break;
    case Theorem::Cor5_8:
      r.expectation_ok = e <= r.a_bound;
      r.binding_ratio = ratio(r.omega_threshold + n_eps * prof.eprime_max, r.a_bound);
      break;
    case Theorem::LastVu:
      r.expectation_ok = true;
      r.binding_ratio = ratio(eprime_with_empty, 1.0 / n_eps);
      break;
  }
  r.derivative_ok = r.binding_ratio <= 1.0;
  r.pass = r.expectation_ok && r.derivative_ok;
  if (options.q) r.finitary_window_ok = n / *options.q > e && e > *options.q * log_n;
  return r;
}

ConcentrationReport concentration_trial(const CopyPolynomial& f, double p, int trials, double eps,
                                        std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw Error("trials must be at least 1");
  ConcentrationReport r;
  r.trials = trials;
  r.seed = seed;
  r.p = p;
  r.eps = eps;
  r.expectation = expectation(f, p);
  r.values.assign(trials, 0.0);
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    const auto host = sample_gnp(f.pattern().arity(), f.n(), p, derive_seed(seed, t));
    r.values[t] = f.evaluate(host);
  });
  double sum = 0;
  for (double x : r.values) sum += x;
  r.mean = sum / trials;
  double ss = 0;
  std::size_t exceed = 0;
  for (double x : r.values) {
    ss += (x - r.mean) * (x - r.mean);
    exceed += std::abs(x - r.expectation) > eps * r.expectation;
  }
  r.stddev = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
  r.standard_error = r.stddev / std::sqrt(static_cast<double>(trials));
  const double diff = r.mean - r.expectation;
  r.z_score = r.standard_error > 0 ? diff / r.standard_error : (std::abs(diff) < 1e-12 ? 0.0 : INFINITY);
  r.exceed_fraction = static_cast<double>(exceed) / trials;
  return r;
}

}  // namespace hfactor
