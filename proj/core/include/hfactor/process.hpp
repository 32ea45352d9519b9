#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hfactor/common.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

/// gamma_i = (mn/v) / (C(n,k) - i + 1), the conditional mean of xi_i.
Rational gamma(const PatternGraph& pattern, int n, std::uint64_t i);

/// Finite stand-ins for the guard events on G_{i-1}: copy weights within
/// `b_level` of their mean (maxr <= b_level) and every copy degree within a
/// relative `regularity_eps` of D(p_{i-1}), p_{i-1} = 1 - (i-1)/C(n,k).
struct GuardOptions {
  bool enabled = true;
  double b_level = 10.0;
  double regularity_eps = 0.5;
};

struct ProcessStep {
  std::uint64_t i = 0;
  std::vector<Vertex> edge;
  Rational xi;
  Rational gamma;
  Rational z;          // xi - gamma while the guard holds, else 0
  Rational x_partial;  // prefix sum of z
  double log_factor_count = 0;  // log Phi_labeled(G_i); -inf once extinct
  double margin = 0;            // log Phi(G_i) - [log Phi(G_0) - sum gamma]

  // Guard and per-step statistics, all measured on G_{i-1}.
  bool guard_ok = true;      // every G_j, j < i, passed
  double maxr = 0;
  double degree_deviation = 0;
  std::uint64_t max_edge_copies = 0;
  std::uint64_t min_copy_degree = 0;
  double xi_bound = 0;       // maxr * max_edge_copies / min_copy_degree
  bool xi_bound_ok = true;   // xi <= xi_bound (when min_copy_degree > 0)
};

enum class StopReason { TMax, Extinct, Exhausted };

std::string to_string(StopReason reason);

struct ProcessTrace {
  int n = 0;
  std::string pattern_id;
  std::uint64_t seed = 0;
  double log_initial = 0;  // log Phi_labeled(K_n)
  std::vector<ProcessStep> steps;
  std::uint64_t stop_step = 0;
  StopReason stop_reason = StopReason::TMax;
  std::int64_t guard_failed_at = -1;  // first j with G_j failing the guard, or -1
};

/// Deletes edges of K_n in a uniformly random order, recording xi_i, gamma_i,
/// the martingale X_t and log Phi(G_i) exactly. Stops after t_max steps, when
/// Phi reaches 0 ("extinct"), or when every edge is gone.
ProcessTrace run_process(const PatternGraph& pattern, int n, std::uint64_t seed, std::uint64_t t_max,
                         const GuardOptions& guard = {});

/// (average of edge_fraction over all e in E(G), (mn/v)/|E(G)|). The two are
/// equal for every G with a factor.
std::pair<Rational, Rational> verify_martingale_step(const PatternGraph& pattern, const HostGraph& host);

/// Sum over e in E(G) of edge_fraction; equals mn/v whenever Phi(G) > 0.
Rational edge_fraction_sum(const PatternGraph& pattern, const HostGraph& host);

struct TailReport {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double lambda = 0;
  std::vector<double> max_abs_x;  // per trial, max_t |X_t|
  double exceed_fraction = 0;     // fraction of trials with max_t |X_t| > lambda
  double mean_max_abs_x = 0;
  double quantile_50 = 0;
  double quantile_90 = 0;
  double quantile_99 = 0;
  std::size_t guard_trips = 0;  // trials whose guard failed at some step
  std::size_t xi_bound_violations = 0;
};

TailReport tail_experiment(const PatternGraph& pattern, int n, int trials, std::uint64_t seed,
                           double lambda, std::uint64_t t_max, const GuardOptions& guard = {},
                           unsigned workers = 1);

}  // namespace hfactor
