#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hfactor/common.hpp"
#include "hfactor/embed.hpp"
#include "hfactor/host.hpp"
#include "hfactor/pattern.hpp"

namespace hfactor {

inline constexpr int kMaxPolynomialHost = 500;

enum class CoefficientScale {
  Normalized,  // divide by the largest coefficient (a normal polynomial)
  Raw,         // one unit per injection
};

/// The copy-counting polynomial
///
///   h(t) = sum over injections phi agreeing with the anchor pins of t_{phi(E')}
///
/// in the edge indicators t_e of K_n. It is kept implicit as (pattern, n,
/// anchor): every operation enumerates embeddings into K_n rather than storing
/// coefficients. Under CoefficientScale::Normalized the polynomial is
/// f = h / max_U alpha_U, so the largest coefficient is 1.
class CopyPolynomial {
 public:
  CopyPolynomial(PatternGraph pattern, int n, ConstraintSpec anchor,
                 CoefficientScale scale = CoefficientScale::Normalized);

  /// Copies of the pattern with pattern vertex `a` pinned to host vertex 0.
  static CopyPolynomial copies_through(const PatternGraph& pattern, int n, int a = 0,
                                       CoefficientScale scale = CoefficientScale::Normalized);

  const PatternGraph& pattern() const { return pattern_; }
  int n() const { return n_; }
  const ConstraintSpec& anchor() const { return anchor_; }
  const HostGraph& complete_host() const { return complete_; }
  int degree() const { return static_cast<int>(anchor_.constrained_edges.size()); }
  CoefficientScale scale() const { return scale_; }
  /// max_U alpha_U under Normalized, 1 under Raw.
  const BigInt& normalization() const { return normalization_; }
  /// Number of injections satisfying the pins (h(1,...,1)).
  const BigInt& injection_count() const { return injections_; }

  /// f evaluated at the edge indicator of `host`.
  double evaluate(const HostGraph& host) const;

 private:
  PatternGraph pattern_;
  int n_;
  ConstraintSpec anchor_;
  CoefficientScale scale_;
  HostGraph complete_;
  BigInt normalization_ = 1;
  BigInt injections_ = 0;
};

/// Upper bound on (anchored embeddings) x 2^degree work for derivative tables.
inline constexpr std::uint64_t kDerivativeWorkCap = 50'000'000;

double expectation(const CopyPolynomial& f, double p);

/// E_L f = sum over U containing L of alpha_U p^{|U \ L|}. L is a set of host
/// edges (each a list of vertices).
double derivative_expectation(const CopyPolynomial& f, const std::vector<std::vector<Vertex>>& l, double p);

struct DerivativeProfile {
  int degree = 0;
  double expectation = 0;
  std::vector<double> e_j;   // e_j[j-1] = E_j f = max over |L| = j, j = 1..d
  double e_star = 0;         // max over |L| < d, L = {} included
  double eprime_max = 0;     // max over nonempty L of the nonconstant part
  std::size_t distinct_sets = 0;  // L with nonzero derivative
  /// min over 1 <= |L| < d with E_L > 0 of log(E f / E_L f) / log n; empty if d <= 1.
  std::optional<double> min_exponent;
};

DerivativeProfile derivative_profile(const CopyPolynomial& f, double p);

enum class Theorem { KV, V, Combination, Cor5_5, Inhomog, Cor5_8, LastVu };

std::string to_string(Theorem theorem);
Theorem parse_theorem(const std::string& name);

struct HypothesisOptions {
  /// Finite stand-in for an omega(log n) lower bound; default 10 log n.
  std::optional<double> omega_threshold;
  /// The A of the upper-tail corollaries; default E f.
  std::optional<double> a_bound;
  /// Window constant Q for n/Q > E f > Q log n; reported only.
  std::optional<double> q;
};

struct HypothesisReport {
  Theorem theorem = Theorem::Combination;
  DerivativeProfile profile;
  double eps = 0;
  double omega_threshold = 0;
  double a_bound = 0;
  bool expectation_ok = true;  // the E f / A side of the hypothesis
  bool derivative_ok = true;   // the derivative side
  double binding_ratio = 0;    // derivative quantity / allowed value; <= 1 passes
  bool pass = false;
  std::optional<bool> finitary_window_ok;
};

HypothesisReport hypothesis_check(const CopyPolynomial& f, double p, double eps, Theorem theorem,
                                  const HypothesisOptions& options = {});

struct ConcentrationReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double p = 0;
  double eps = 0;
  double expectation = 0;
  double mean = 0;
  double stddev = 0;
  double standard_error = 0;
  double z_score = 0;          // (mean - expectation) / standard_error; 0 when both vanish
  double exceed_fraction = 0;  // Pr(|f - E f| > eps E f)
  std::vector<double> values;
};

/// Samples G(n,p) `trials` times and evaluates f exactly on each.
ConcentrationReport concentration_trial(const CopyPolynomial& f, double p, int trials, double eps,
                                        std::uint64_t seed, unsigned workers = 1);

}  // namespace hfactor
