#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "hfactor/embed.hpp"
#include "hfactor/entropy.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/host.hpp"
#include "hfactor/models.hpp"
#include "hfactor/pattern.hpp"
#include "hfactor/polynomial.hpp"
#include "hfactor/process.hpp"
#include "hfactor/rng.hpp"
#include "hfactor/thresholds.hpp"
#include "oracles.hpp"

using namespace hfactor;

namespace {

constexpr double kLogTolerance = 1e-9;
constexpr double kSigmas = 4.0;
constexpr double kWindowMass = 0.7;
constexpr double kCountSeconds = 5.0;
constexpr double kWindowSeconds = 30.0;
constexpr double kScanSeconds = 600.0;
constexpr double kRatioLow = 0.5;
constexpr double kRatioHigh = 2.0;
constexpr double kRatioSpread = 2.0;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

// Random host with at least one factor.
HostGraph host_with_factor(const PatternGraph& pattern, int n, Rng& rng) {
  while (true) {
    const double p = 0.5 + 0.4 * rng.uniform();
    auto g = sample_gnp(pattern.arity(), n, p, rng.next());
    if (has_factor(pattern, g)) return g;
  }
}

struct BatteryCase {
  PatternGraph pattern;
  HostGraph host;
};

std::vector<BatteryCase> identity_battery() {
  Rng rng(derive_seed(kSeed, 2));
  const std::vector<int> even = {4, 6, 8, 10, 12};
  const std::vector<int> triple = {3, 6, 9, 12};
  std::vector<BatteryCase> out;
  for (int t = 0; t < 100; ++t) {
    if (t % 2 == 0) {
      const int n = even[rng.below(even.size())];
      out.push_back({clique_pattern(2), host_with_factor(clique_pattern(2), n, rng)});
    } else {
      const auto p = t % 4 == 1 ? clique_pattern(3) : path_pattern(3);
      const int n = triple[rng.below(triple.size())];
      out.push_back({p, host_with_factor(p, n, rng)});
    }
  }
  return out;
}

bool exact_count_matches(const PatternGraph& p, int n, const BigInt& labeled, const BigInt& unlabeled,
                         std::string& detail) {
  const auto host = HostGraph::complete(p.arity(), n);
  const auto counted = count_factors(p, host);
  const auto closed = complete_graph_count(p, n);
  const auto brute = oracle::factor_count(p, host);
  const bool ok = counted.labeled == labeled && counted.unlabeled == unlabeled && closed.labeled == labeled &&
                  closed.unlabeled == unlabeled && brute == labeled;
  detail += p.name() + "/n=" + std::to_string(n) + ":" + to_string(counted.labeled) + "," +
            to_string(counted.unlabeled) + (ok ? " " : "(mismatch) ");
  return ok;
}

Outcome exact_counts() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  o.pass &= exact_count_matches(clique_pattern(2), 4, 12, 3, o.detail);
  o.pass &= exact_count_matches(clique_pattern(3), 6, 360, 10, o.detail);
  o.pass &= exact_count_matches(clique_pattern(3), 9, 60480, 280, o.detail);
  const double secs = seconds_since(start);
  o.pass &= secs < kCountSeconds;
  o.detail += fmt("time=%.3fs", secs);
  return o;
}

Outcome martingale_identity(const std::vector<BatteryCase>& battery) {
  Outcome o;
  int equal = 0;
  int oracle_checked = 0;
  for (const auto& c : battery) {
    const auto [average, predicted] = verify_martingale_step(c.pattern, c.host);
    equal += average == predicted;
    if (c.host.vertex_count() <= 9) {
      ++oracle_checked;
      o.pass &= count_factors(c.pattern, c.host).labeled == oracle::factor_count(c.pattern, c.host);
    }
  }
  o.pass &= equal == static_cast<int>(battery.size());
  o.detail = fmt("%d/%zu exact, phi vs oracle on %d hosts", equal, battery.size(), oracle_checked);
  return o;
}

Outcome edge_sum_identity(const std::vector<BatteryCase>& battery) {
  Outcome o;
  int equal = 0;
  for (const auto& c : battery) {
    const Rational expected(c.pattern.edge_count() * c.host.vertex_count(), c.pattern.vertex_count());
    equal += edge_fraction_sum(c.pattern, c.host) == expected;
  }
  o.pass = equal == static_cast<int>(battery.size());
  o.detail = fmt("%d/%zu exact", equal, battery.size());
  return o;
}

Outcome telescoping() {
  Outcome o;
  double worst = 0;
  std::size_t live = 0;
  for (int t = 0; t < 50; ++t) {
    const bool matching = t < 25;
    const auto p = matching ? clique_pattern(2) : clique_pattern(3);
    const int n = matching ? 10 : 9;
    const auto trace = run_process(p, n, derive_seed(kSeed, 400 + t), edge_universe_size(2, n));
    double sum = 0;
    for (const auto& step : trace.steps) {
      if (!std::isfinite(step.log_factor_count)) break;
      sum += log_of(Rational(1) - step.xi);
      worst = std::max(worst, std::abs(step.log_factor_count - (trace.log_initial + sum)));
      ++live;
    }
  }
  o.pass = worst <= kLogTolerance;
  o.detail = fmt("max |gap|=%.3g over %zu live steps", worst, live);
  return o;
}

Outcome shearer() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 5));
  double min_slack = INFINITY;
  int holds = 0;
  for (int t = 0; t < 200; ++t) {
    const bool matching = t % 2 == 0;
    const auto p = matching ? clique_pattern(2) : clique_pattern(3);
    const int n = matching ? 2 * (2 + static_cast<int>(rng.below(5))) : 3 * (1 + static_cast<int>(rng.below(3)));
    const auto r = shearer_check(p, host_with_factor(p, n, rng));
    holds += r.log_phi <= r.bound + kLogTolerance;
    min_slack = std::min(min_slack, r.bound - r.log_phi);
  }
  o.pass = holds == 200;
  o.detail = fmt("%d/200 hold, min slack=%.3g", holds, min_slack);
  return o;
}

Outcome entropy_window_battery() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 6));
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  int disagreements = 0;
  double min_mass = 1;
  for (int t = 0; t < 10000; ++t) {
    const auto size = 2 + rng.below(499);
    std::vector<double> w(size);
    for (auto& x : w) x = std::pow(10.0, 6 * rng.uniform());
    const auto r = entropy_window(WeightedFamily::from_weights(w));

    // Independent recomputation of the window.
    double total = 0;
    for (double x : w) total += x;
    double h = 0;
    for (double x : w) h -= x / total * std::log(x / total);
    const double k = std::log(static_cast<double>(size)) - h;
    const double c = std::exp(4 * (k + std::log(3.0)));
    const double mean = total / size;
    double mass = 0;
    std::size_t count = 0;
    for (double x : w) {
      if (x >= mean / c && x <= c * mean) {
        mass += x;
        ++count;
      }
    }
    const double floor = std::exp(-(k + std::log(3.0)) / kWindowMass) * size;
    const bool ok = mass > kWindowMass * total && static_cast<double>(count) >= floor;
    failures += !ok;
    disagreements += r.window.size() != count || r.guarantees_hold != ok;
    min_mass = std::min(min_mass, mass / total);
  }
  const double secs = seconds_since(start);
  o.pass = failures == 0 && disagreements == 0 && secs < kWindowSeconds;
  o.detail = fmt("failures=%d, library disagreements=%d, min w(J)/w(S)=%.4f, time=%.2fs", failures,
                 disagreements, min_mass, secs);
  return o;
}

SubsetWeights weight_instance(int n, int v, Rng& rng, double& bound) {
  SubsetWeights s{n, v, {}};
  const int style = static_cast<int>(rng.below(4));
  std::vector<double> vertex_factor(n);
  for (auto& f : vertex_factor) f = 1 + 0.5 * rng.uniform();
  const double zero_rate = 0.15 * rng.uniform();
  const double spread = 0.3 + rng.uniform();
  bound = 0.5 + rng.uniform();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != v) continue;
    double w = 0;
    switch (style) {
      case 0: w = bound * (1 + rng.uniform()); break;
      case 1: {
        w = bound;
        for (int x = 0; x < n; ++x) {
          if (mask >> x & 1u) w *= vertex_factor[x];
        }
        break;
      }
      case 2: w = rng.bernoulli(zero_rate) ? 0.0 : bound * std::exp(spread * (rng.uniform() - 0.5)); break;
      default: w = bound * std::pow(4.0, rng.uniform()) * (rng.bernoulli(zero_rate) ? 0.1 : 1.0); break;
    }
    s.weights[mask] = w;
  }
  return s;
}

Outcome weight_lemma() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 7));
  int accepted = 0;
  int attempts = 0;
  int counterexamples = 0;
  std::size_t conclusion_sets = 0;
  while (accepted < 1000 && attempts < 200000) {
    ++attempts;
    const int v = 2 + static_cast<int>(rng.below(3));
    const int n = v + 2 + static_cast<int>(rng.below(12 - v - 1));
    double bound = 0;
    const auto s = weight_instance(n, v, rng, bound);
    const auto r = weight_lemma_check(s, bound);
    if (!r.hypothesis_holds) continue;
    ++accepted;
    counterexamples += !r.conclusion_holds;
    conclusion_sets += r.conclusion_sets_checked;
  }
  o.pass = accepted == 1000 && counterexamples == 0;
  o.detail = fmt("%d instances (%d generated), counterexamples=%d, conclusion sets=%zu", accepted, attempts,
                 counterexamples, conclusion_sets);
  return o;
}

bool mean_within(const PatternGraph& p, int n, double prob, double target, std::uint64_t stream,
                 std::string& detail) {
  const int samples = 10000;
  double sum = 0, sum_sq = 0;
  for (int t = 0; t < samples; ++t) {
    const auto g = sample_gnp(p.arity(), n, prob, derive_seed(derive_seed(kSeed, stream), t));
    const double phi = to_double(Rational(count_factors(p, g).labeled));
    sum += phi;
    sum_sq += phi * phi;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / (samples - 1));
  const double z = (mean - target) / se;
  detail += fmt("%s n=%d: mean=%.3f target=%.3f z=%.2f; ", p.name().c_str(), n, mean, target, z);
  return std::abs(z) <= kSigmas;
}

Outcome expectation_formula() {
  Outcome o;
  o.pass &= mean_within(clique_pattern(2), 8, 0.5, 105.0, 80, o.detail);
  o.pass &= std::abs(expected_factor_count(clique_pattern(2), 8, 0.5) - 105.0) < 1e-9;
  const double k3 = 360 * std::pow(0.7, 6);
  o.pass &= mean_within(clique_pattern(3), 6, 0.7, k3, 81, o.detail);
  o.pass &= std::abs(expected_factor_count(clique_pattern(3), 6, 0.7) - k3) < 1e-9;
  return o;
}

std::vector<ThresholdEstimate> g_scan;
double g_scan_seconds = 0;

Outcome threshold_scaling() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  g_scan = threshold_scan(clique_pattern(2), {12, 16, 20}, 2000, derive_seed(kSeed, 9), Property::Factor);
  g_scan_seconds = seconds_since(start);
  double lo = INFINITY, hi = 0;
  for (const auto& e : g_scan) {
    const double ratio = e.p_half * e.n / std::log(e.n);
    o.pass &= ratio >= kRatioLow && ratio <= kRatioHigh;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.detail += fmt("n=%d p_half=%.4f ratio=%.3f; ", e.n, e.p_half, ratio);
  }
  o.pass &= g_scan.size() == 3 && hi / lo < kRatioSpread && g_scan_seconds < kScanSeconds;
  o.detail += fmt("spread=%.3f time=%.1fs", hi / lo, g_scan_seconds);
  return o;
}

Outcome implication_chain() {
  Outcome o;
  std::uint64_t samples = 0, violations = 0;
  for (const auto& e : g_scan) {
    samples += e.chain_samples;
    violations += e.chain_violations;
    o.pass &= e.chain_samples > 0;
  }
  o.pass &= !g_scan.empty() && violations == 0;
  o.detail = fmt("%llu hosts, %llu violations", static_cast<unsigned long long>(samples),
                 static_cast<unsigned long long>(violations));
  return o;
}

Outcome model_coupling() {
  Outcome o;
  const auto r = compare_models(clique_pattern(2), 12, 0.35, 5000, derive_seed(kSeed, 11));
  o.pass = std::abs(r.difference) <= kSigmas * r.combined_se;
  o.detail = fmt("M=%llu gnp=%.4f gnm=%.4f |diff|=%.4f limit=%.4f", static_cast<unsigned long long>(r.m_edges),
                 r.p_gnp, r.p_gnm, std::abs(r.difference), kSigmas * r.combined_se);
  return o;
}

// Injections agreeing with the pins whose E' image contains every edge of L.
std::uint64_t brute_derivative_count(const PatternGraph& p, int n, const ConstraintSpec& spec,
                                     const std::vector<std::vector<Vertex>>& l) {
  const int v = p.vertex_count();
  std::uint64_t count = 0;
  std::vector<Vertex> phi(v);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == v) {
      for (const auto& [a, x] : spec.pinned) {
        if (phi[a] != x) return;
      }
      std::set<std::vector<Vertex>> image;
      for (int i : spec.constrained_edges) {
        std::vector<Vertex> e;
        for (int a : p.edges()[i]) e.push_back(phi[a]);
        std::sort(e.begin(), e.end());
        image.insert(e);
      }
      for (const auto& e : l) {
        if (!image.count(e)) return;
      }
      ++count;
      return;
    }
    for (int x = 0; x < n; ++x) {
      if (std::find(phi.begin(), phi.begin() + pos, static_cast<Vertex>(x)) != phi.begin() + pos) continue;
      phi[pos] = static_cast<Vertex>(x);
      rec(pos + 1);
    }
  };
  rec(0);
  return count;
}

Outcome polynomial_consistency() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 12));
  const std::vector<PatternGraph> patterns = {
      clique_pattern(3), path_pattern(3), cycle_pattern(4), path_pattern(4),
      PatternGraph::create(2, 4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}})};
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const auto& p = patterns[t % patterns.size()];
    const int n = p.vertex_count() + 1 + static_cast<int>(rng.below(4));
    ConstraintSpec spec;
    if (rng.bernoulli(0.6)) {
      spec.pinned.emplace_back(static_cast<int>(rng.below(p.vertex_count())), static_cast<Vertex>(rng.below(n)));
    }
    for (int i = 0; i < p.edge_count(); ++i) {
      if (rng.bernoulli(0.6)) spec.constrained_edges.push_back(i);
    }
    if (spec.constrained_edges.empty()) spec.constrained_edges.push_back(0);
    const CopyPolynomial f(p, n, spec, CoefficientScale::Raw);

    const double whole = derivative_expectation(f, {}, 1.0);
    bool ok = whole == to_double(Rational(constrained_count(p, HostGraph::complete(2, n), spec)));

    // A nonempty L taken from the E' image of one admissible injection.
    std::vector<Vertex> phi(n);
    for (int x = 0; x < n; ++x) phi[x] = static_cast<Vertex>(x);
    for (int x = n - 1; x > 0; --x) std::swap(phi[x], phi[rng.below(x + 1)]);
    for (const auto& [a, x] : spec.pinned) {
      std::swap(phi[a], *std::find(phi.begin(), phi.end(), x));
    }
    std::vector<std::vector<Vertex>> l;
    for (int i : spec.constrained_edges) {
      if (!l.empty() && rng.bernoulli(0.5)) continue;
      std::vector<Vertex> e;
      for (int a : p.edges()[i]) e.push_back(phi[a]);
      std::sort(e.begin(), e.end());
      l.push_back(e);
    }
    ok = ok && derivative_expectation(f, l, 1.0) == static_cast<double>(brute_derivative_count(p, n, spec, l));
    exact += ok;
  }
  o.pass = exact == 50;
  o.detail = fmt("p=1 battery %d/50; ", exact);

  struct McCase {
    PatternGraph pattern;
    int n;
    double p;
  };
  const std::vector<McCase> mc = {{clique_pattern(3), 30, 0.3}, {cycle_pattern(4), 20, 0.4},
                                  {path_pattern(3), 25, 0.2}, {clique_pattern(2), 40, 0.5}};
  double worst_z = 0;
  for (std::size_t i = 0; i < mc.size(); ++i) {
    const auto f = CopyPolynomial::copies_through(mc[i].pattern, mc[i].n);
    const auto r = concentration_trial(f, mc[i].p, 2000, 0.5, derive_seed(kSeed, 1200 + i));
    worst_z = std::max(worst_z, std::abs(r.z_score));
  }
  o.pass &= worst_z <= kSigmas;
  o.detail += fmt("max |z|=%.2f; ", worst_z);

  const int n = 30;
  const auto prof = derivative_profile(CopyPolynomial::copies_through(clique_pattern(3), n), std::pow(n, -2.0 / 3));
  o.pass &= prof.min_exponent.has_value() && *prof.min_exponent > 0;
  o.detail += prof.min_exponent ? fmt("K3 n=30 delta=%.4f", *prof.min_exponent) : std::string("K3 n=30 delta=none");
  return o;
}

Outcome hypergraph_parity() {
  Outcome o;
  const auto e3 = hyperedge_pattern(3);
  for (int n : {6, 9, 12}) {
    const int blocks = n / 3;
    const BigInt labeled = factorial(n) / factorial(blocks);
    BigInt unlabeled = labeled;
    for (int b = 0; b < blocks; ++b) unlabeled /= 6;
    o.pass &= unlabeled == factorial(n) / (factorial(blocks) * boost::multiprecision::pow(BigInt(6), blocks));
    o.pass &= exact_count_matches(e3, n, labeled, unlabeled, o.detail);
  }
  o.pass &= complete_graph_count(e3, 6).labeled == 360;

  Rng rng(derive_seed(kSeed, 13));
  int martingale = 0, sums = 0, brute = 0;
  const int hosts = 40;
  for (int t = 0; t < hosts; ++t) {
    const int n = 3 * (2 + static_cast<int>(rng.below(3)));
    const auto g = host_with_factor(e3, n, rng);
    const auto [average, predicted] = verify_martingale_step(e3, g);
    martingale += average == predicted;
    sums += edge_fraction_sum(e3, g) == Rational(n, 3);
    brute += count_factors(e3, g).labeled == oracle::factor_count(e3, g);
  }
  o.pass &= martingale == hosts && sums == hosts && brute == hosts;
  o.detail += fmt("martingale %d/%d, edge sum %d/%d, oracle %d/%d", martingale, hosts, sums, hosts, brute, hosts);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<BatteryCase> battery;
  const std::vector<Criterion> criteria = {
      {"exact-counts", exact_counts},
      {"martingale-identity",
       [&] {
         battery = identity_battery();
         return martingale_identity(battery);
       }},
      {"edge-sum-identity", [&] { return edge_sum_identity(battery); }},
      {"telescoping", telescoping},
      {"shearer", shearer},
      {"entropy-window", entropy_window_battery},
      {"weight-lemma", weight_lemma},
      {"expectation-formula", expectation_formula},
      {"threshold-scaling", threshold_scaling},
      {"implication-chain", implication_chain},
      {"model-coupling", model_coupling},
      {"polynomial-consistency", polynomial_consistency},
      {"hypergraph-parity", hypergraph_parity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s %2zu %-24s %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
