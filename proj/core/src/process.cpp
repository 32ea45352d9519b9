#include "hfactor/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hfactor/embed.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/parallel.hpp"
#include "hfactor/rng.hpp"

namespace hfactor {

Rational gamma(const PatternGraph& pattern, int n, std::uint64_t i) {
  const std::uint64_t universe = edge_universe_size(pattern.arity(), n);
  if (i < 1 || i > universe) throw Error("step index out of range [1, C(n,k)]");
  const BigInt edges_per_factor = BigInt(pattern.edge_count()) * n / pattern.vertex_count();
  return Rational(edges_per_factor, BigInt(universe - i + 1));
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::TMax: return "t_max";
    case StopReason::Extinct: return "extinct";
    case StopReason::Exhausted: return "exhausted";
  }
  return "unknown";
}

namespace {

struct GraphMeasure {
  double maxr = 0;
  double degree_deviation = 0;
  std::uint64_t max_edge_copies = 0;
  std::uint64_t min_copy_degree = 0;
};

// One enumeration pass over the copies of H in the counter's host.
GraphMeasure measure(FactorCounter& counter, double p) {
  const auto& pattern = counter.pattern();
  const auto& host = counter.host();
  GraphMeasure out;
  std::vector<std::uint64_t> degrees(host.vertex_count(), 0);
  std::vector<std::uint64_t> per_edge(host.edge_count(), 0);
  BigInt weight_sum = 0;
  BigInt weight_max = 0;
  std::uint64_t copies = 0;
  std::vector<Vertex> buffer(pattern.arity());
  Embedder(pattern, host, ConstraintSpec::all_edges(pattern)).for_each([&](std::span<const Vertex> m) {
    ++copies;
    for (Vertex y : m) ++degrees[y];
    for (const auto& edge : pattern.edges()) {
      for (std::size_t j = 0; j < edge.size(); ++j) buffer[j] = m[edge[j]];
      std::sort(buffer.begin(), buffer.end());
      ++per_edge[host.index_of_rank(rank_edge(buffer))];
    }
    BigInt w = counter.without(vertex_mask(m));
    if (w > weight_max) weight_max = w;
    weight_sum += w;
    return true;
  });
  if (copies > 0 && weight_sum > 0) {
    out.maxr = to_double(Rational(weight_max * copies, weight_sum));
  } else {
    out.maxr = std::numeric_limits<double>::infinity();
  }
  out.max_edge_copies = per_edge.empty() ? 0 : *std::max_element(per_edge.begin(), per_edge.end());
  out.min_copy_degree = degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
  const double expected = expected_copy_degree(pattern, host.vertex_count(), p);
  for (auto d : degrees) {
    const double dev = expected > 0 ? std::abs(static_cast<double>(d) - expected) / expected
                                    : std::numeric_limits<double>::infinity();
    out.degree_deviation = std::max(out.degree_deviation, dev);
  }
  return out;
}

}  // namespace

ProcessTrace run_process(const PatternGraph& pattern, int n, std::uint64_t seed, std::uint64_t t_max,
                         const GuardOptions& guard) {
  if (n % pattern.vertex_count() != 0) throw Error("n must be divisible by v");
  const int k = pattern.arity();
  const std::uint64_t universe = edge_universe_size(k, n);
  const auto ordering = random_ordering(k, n, seed);

  ProcessTrace trace;
  trace.n = n;
  trace.pattern_id = pattern.name();
  trace.seed = seed;

  auto current = std::make_unique<HostGraph>(HostGraph::complete(k, n));
  auto counter = std::make_unique<FactorCounter>(pattern, *current);
  BigInt phi = counter->total();
  trace.log_initial = log_of(phi);

  Rational x_partial = 0;
  Rational gamma_sum = 0;
  const std::uint64_t last = std::min(t_max, universe);
  trace.stop_reason = t_max >= universe ? StopReason::Exhausted : StopReason::TMax;
  trace.stop_step = last;

  for (std::uint64_t i = 1; i <= last; ++i) {
    ProcessStep step;
    step.i = i;
    step.edge = ordering.edge(i - 1);

    if (guard.enabled) {
      const double p_prev = 1.0 - static_cast<double>(i - 1) / static_cast<double>(universe);
      const auto m = measure(*counter, p_prev);
      step.maxr = m.maxr;
      step.degree_deviation = m.degree_deviation;
      step.max_edge_copies = m.max_edge_copies;
      step.min_copy_degree = m.min_copy_degree;
      const bool passes = m.maxr <= guard.b_level && m.degree_deviation <= guard.regularity_eps;
      if (!passes && trace.guard_failed_at < 0) trace.guard_failed_at = static_cast<std::int64_t>(i - 1);
      if (m.min_copy_degree > 0) {
        step.xi_bound = m.maxr * static_cast<double>(m.max_edge_copies) / static_cast<double>(m.min_copy_degree);
      } else {
        step.xi_bound = std::numeric_limits<double>::infinity();
      }
    }
    step.guard_ok = trace.guard_failed_at < 0;

    auto next = std::make_unique<HostGraph>(current->without_edge_rank(ordering.ranks[i - 1]));
    auto next_counter = std::make_unique<FactorCounter>(pattern, *next);
    BigInt next_phi = next_counter->total();

    step.xi = Rational(1) - Rational(next_phi, phi);
    step.gamma = gamma(pattern, n, i);
    gamma_sum += step.gamma;
    step.z = step.guard_ok ? Rational(step.xi - step.gamma) : Rational(0);
    x_partial += step.z;
    step.x_partial = x_partial;
    step.log_factor_count = log_of(next_phi);
    step.margin = step.log_factor_count - (trace.log_initial - to_double(gamma_sum));
    if (guard.enabled && step.min_copy_degree > 0) {
      // Slack for the float product; xi itself is exact.
      step.xi_bound_ok = to_double(step.xi) <= step.xi_bound * (1 + 1e-12);
    }
    trace.steps.push_back(std::move(step));

    next_counter.reset();
    counter.reset();
    current = std::move(next);
    counter = std::make_unique<FactorCounter>(pattern, *current);
    phi = std::move(next_phi);
    if (phi == 0) {
      trace.stop_reason = StopReason::Extinct;
      trace.stop_step = i;
      break;
    }
  }
  return trace;
}

Rational edge_fraction_sum(const PatternGraph& pattern, const HostGraph& host) {
  FactorCounter counter(pattern, host);
  const BigInt phi = counter.total();
  if (phi == 0) throw Error("host has no H-factor");
  Rational sum = 0;
  for (std::size_t i = 0; i < host.edge_count(); ++i) {
    const HostGraph reduced = host.without_edge_rank(host.edge_rank(i));
    FactorCounter after(pattern, reduced);
    sum += Rational(1) - Rational(after.total(), phi);
  }
  return sum;
}

std::pair<Rational, Rational> verify_martingale_step(const PatternGraph& pattern, const HostGraph& host) {
  if (host.vertex_count() % pattern.vertex_count() != 0) throw Error("n must be divisible by v");
  const Rational sum = edge_fraction_sum(pattern, host);
  const BigInt edges = host.edge_count();
  const BigInt per_factor = BigInt(pattern.edge_count()) * host.vertex_count() / pattern.vertex_count();
  return {sum / Rational(edges), Rational(per_factor, edges)};
}

TailReport tail_experiment(const PatternGraph& pattern, int n, int trials, std::uint64_t seed,
                           double lambda, std::uint64_t t_max, const GuardOptions& guard,
                           unsigned workers) {
  if (trials < 1) throw Error("trials must be at least 1");
  TailReport report;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  report.lambda = lambda;
  report.max_abs_x.assign(trials, 0.0);
  std::vector<char> tripped(trials, 0);
  std::vector<std::size_t> bound_misses(trials, 0);

  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    const auto trace = run_process(pattern, n, derive_seed(seed, t), t_max, guard);
    double worst = 0;
    for (const auto& step : trace.steps) {
      worst = std::max(worst, std::abs(to_double(step.x_partial)));
      if (!step.xi_bound_ok) ++bound_misses[t];
    }
    report.max_abs_x[t] = worst;
    tripped[t] = trace.guard_failed_at >= 0;
  });

  std::size_t exceed = 0;
  double sum = 0;
  for (int t = 0; t < trials; ++t) {
    exceed += report.max_abs_x[t] > lambda;
    sum += report.max_abs_x[t];
    report.guard_trips += tripped[t];
    report.xi_bound_violations += bound_misses[t];
  }
  report.exceed_fraction = static_cast<double>(exceed) / trials;
  report.mean_max_abs_x = sum / trials;
  auto sorted = report.max_abs_x;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
  };
  report.quantile_50 = quantile(0.5);
  report.quantile_90 = quantile(0.9);
  report.quantile_99 = quantile(0.99);
  return report;
}

}  // namespace hfactor
