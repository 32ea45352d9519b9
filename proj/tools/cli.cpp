#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "hfactor/entropy.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/models.hpp"
#include "hfactor/parallel.hpp"
#include "hfactor/pattern.hpp"
#include "hfactor/polynomial.hpp"
#include "hfactor/process.hpp"
#include "hfactor/regularity.hpp"
#include "hfactor/rng.hpp"
#include "hfactor/thresholds.hpp"

#ifndef HFACTOR_VERSION
#define HFACTOR_VERSION "0.0.0"
#endif

namespace hfactor::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PatternGraph load_pattern(const std::string& spec) {
  if (spec.empty()) throw Error("--pattern is required");
  if (std::filesystem::exists(spec)) {
    return parse_pattern(read_file(spec), std::filesystem::path(spec).stem().string());
  }
  static const std::regex builtin("([KCPE])([0-9]+)");
  std::smatch match;
  if (std::regex_match(spec, match, builtin)) {
    const int size = std::stoi(match[2]);
    switch (match[1].str()[0]) {
      case 'K': return clique_pattern(size);
      case 'C': return cycle_pattern(size);
      case 'P': return path_pattern(size);
      case 'E': return hyperedge_pattern(size);
    }
  }
  throw Error("pattern file '" + spec + "' not found (built-ins: K<v>, C<v>, P<v>, E<k>)");
}

HostGraph load_host(const std::string& path, const PatternGraph& pattern) {
  auto host = parse_host(read_file(path));
  if (host.arity() != pattern.arity()) throw Error("host arity does not match the pattern");
  return host;
}

template <class T>
T need(const std::optional<T>& value, const char* flag) {
  if (!value) throw Error(std::string(flag) + " is required for this command");
  return *value;
}

std::string real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

std::string num(const Rational& r) { return numerator(r).str(); }
std::string den(const Rational& r) { return denominator(r).str(); }

std::string join_vertices(std::span<const Vertex> vertices, char sep = '-') {
  std::string s;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(vertices[i]);
  }
  return s;
}

Json json_real(double x) {
  if (std::isfinite(x)) return x;
  return real(x);
}

class Csv {
 public:
  Csv(std::ostream& os, bool version_line) : os_(os) {
    if (version_line) os_ << "# hfactor " << HFACTOR_VERSION << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

struct Output {
  std::ostream& os;
  bool csv;
  bool version_line;

  void json(const Json& j) const { os << j.dump(2) << '\n'; }
};

unsigned workers_of(const RunConfig& c) { return c.workers ? c.workers : default_workers(); }

Json density_json(const PatternGraph& pattern) {
  const auto r = density_profile(pattern);
  Json per_vertex = Json::array();
  for (std::size_t x = 0; x < r.per_vertex.size(); ++x) {
    per_vertex.push_back({{"vertex", x}, {"d_star", to_string(r.per_vertex[x].d_star)}, {"s", r.per_vertex[x].s}});
  }
  return {{"pattern", pattern.name()},
          {"arity", pattern.arity()},
          {"v", pattern.vertex_count()},
          {"m", pattern.edge_count()},
          {"d", to_string(r.d)},
          {"d_star", to_string(r.d_star)},
          {"s", r.s},
          {"balance", to_string(r.balance)},
          {"aut_count", r.aut_count},
          {"per_vertex", per_vertex}};
}

void cmd_analyze(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  if (!o.csv) {
    Json j = density_json(pattern);
    if (c.n) {
      const auto f = formula_threshold(pattern, *c.n);
      j["threshold"] = {{"n", *c.n}, {"th1_th2", f.th1_th2}, {"general_lower", f.general_lower}};
      j["threshold"]["strict_formula"] = f.strict_formula ? Json(*f.strict_formula) : Json(nullptr);
    }
    o.json(j);
    return;
  }
  const auto r = density_profile(pattern);
  Csv csv(o.os, o.version_line);
  csv.row({"vertex", "d_star_num", "d_star_den", "s", "d_num", "d_den", "balance", "aut_count"});
  for (std::size_t x = 0; x < r.per_vertex.size(); ++x) {
    csv.row({std::to_string(x), num(r.per_vertex[x].d_star), den(r.per_vertex[x].d_star),
             std::to_string(r.per_vertex[x].s), num(r.d), den(r.d), to_string(r.balance),
             std::to_string(r.aut_count)});
  }
}

void cmd_count(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  struct Row {
    std::uint64_t seed;
    std::size_t edges;
    FactorCount count;
  };
  std::vector<Row> rows;
  std::string model;
  if (!c.host.empty()) {
    model = "file";
    const auto host = load_host(c.host, pattern);
    rows.push_back({0, host.edge_count(), count_factors(pattern, host)});
  } else {
    const int n = need(c.n, "--n (or --host)");
    if (c.p && c.m_edges) throw Error("give at most one of --p and --M");
    model = c.p ? "gnp" : c.m_edges ? "gnm" : "complete";
    const int trials = model == "complete" ? 1 : c.trials;
    for (int t = 0; t < trials; ++t) {
      const auto s = derive_seed(c.seed, t);
      const auto host = c.p ? sample_gnp(pattern.arity(), n, *c.p, s)
                        : c.m_edges ? sample_gnm(pattern.arity(), n, *c.m_edges, s)
                                    : HostGraph::complete(pattern.arity(), n);
      rows.push_back({model == "complete" ? 0 : s, host.edge_count(), count_factors(pattern, host)});
    }
  }
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"trial", "model", "seed", "edges", "labeled", "unlabeled"});
    for (std::size_t t = 0; t < rows.size(); ++t) {
      csv.row({std::to_string(t), model, std::to_string(rows[t].seed), std::to_string(rows[t].edges),
               rows[t].count.labeled.str(), rows[t].count.unlabeled.str()});
    }
    return;
  }
  Json j = {{"command", "count"}, {"pattern", pattern.name()}, {"model", model}};
  if (c.p && c.n) j["expected_labeled"] = expected_factor_count(pattern, *c.n, *c.p);
  Json list = Json::array();
  for (const auto& r : rows) {
    list.push_back({{"seed", r.seed}, {"edges", r.edges}, {"labeled", r.count.labeled.str()},
                    {"unlabeled", r.count.unlabeled.str()}});
  }
  if (rows.size() == 1) {
    j["edges"] = rows[0].edges;
    j["labeled"] = rows[0].count.labeled.str();
    j["unlabeled"] = rows[0].count.unlabeled.str();
  } else {
    j["samples"] = list;
  }
  o.json(j);
}

void cmd_scan(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  auto n_list = c.n_list;
  if (n_list.empty() && c.n) n_list.push_back(*c.n);
  if (n_list.empty()) throw Error("--n-list (or --n) is required for scan");
  ScanOptions options;
  options.workers = workers_of(c);
  const auto results = threshold_scan(pattern, n_list, c.trials, c.seed, parse_property(c.property), options);
  for (const auto& r : results) {
    if (r.chain_violations > 0) {
      throw InvariantViolation("Factor => RoleCoverage => Coverage violated at n = " + std::to_string(r.n));
    }
  }
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"n", "p_half", "ci_low", "ci_high", "formula_value", "ratio", "trials", "seed", "property"});
    for (const auto& r : results) {
      csv.row({std::to_string(r.n), real(r.p_half), real(r.ci_low), real(r.ci_high), real(r.formula_value),
               real(r.ratio), std::to_string(r.trials_per_probe), std::to_string(r.seed), to_string(r.property)});
    }
    return;
  }
  Json list = Json::array();
  for (const auto& r : results) {
    Json probes = Json::array();
    for (const auto& p : r.probes) {
      probes.push_back({{"p", p.p}, {"successes", p.successes}, {"trials", p.trials}, {"estimate", p.estimate},
                        {"wilson_low", p.wilson_low}, {"wilson_high", p.wilson_high}});
    }
    list.push_back({{"n", r.n}, {"p_half", r.p_half}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high},
                    {"formula_value", r.formula_value}, {"ratio", r.ratio}, {"trials", r.trials_per_probe},
                    {"seed", r.seed}, {"property", to_string(r.property)}, {"chain_samples", r.chain_samples},
                    {"chain_violations", r.chain_violations}, {"probes", probes}});
  }
  o.json({{"command", "scan"}, {"pattern", pattern.name()}, {"results", list}});
}

GuardOptions guard_of(const RunConfig& c) {
  GuardOptions g;
  g.enabled = !c.no_guard;
  g.b_level = c.b_level;
  g.regularity_eps = c.guard_eps;
  return g;
}

void cmd_trace(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const int n = need(c.n, "--n");
  const auto t_max = c.t_max.value_or(std::numeric_limits<std::uint64_t>::max());
  const auto trace = run_process(pattern, n, c.seed, t_max, guard_of(c));
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"i", "edge", "xi_num", "xi_den", "gamma_num", "gamma_den", "z", "x_partial", "log_factor_count",
             "margin", "guard_state"});
    for (const auto& s : trace.steps) {
      csv.row({std::to_string(s.i), join_vertices(s.edge), num(s.xi), den(s.xi), num(s.gamma), den(s.gamma),
               to_string(s.z), to_string(s.x_partial), real(s.log_factor_count), real(s.margin),
               s.guard_ok ? "ok" : "failed"});
    }
    return;
  }
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"i", s.i}, {"edge", s.edge}, {"xi", to_string(s.xi)}, {"gamma", to_string(s.gamma)},
                     {"z", to_string(s.z)}, {"x_partial", to_string(s.x_partial)},
                     {"log_factor_count", json_real(s.log_factor_count)}, {"margin", json_real(s.margin)},
                     {"guard_ok", s.guard_ok}, {"maxr", json_real(s.maxr)},
                     {"degree_deviation", json_real(s.degree_deviation)}, {"max_edge_copies", s.max_edge_copies},
                     {"min_copy_degree", s.min_copy_degree}, {"xi_bound", json_real(s.xi_bound)},
                     {"xi_bound_ok", s.xi_bound_ok}});
  }
  o.json({{"command", "trace"}, {"pattern", trace.pattern_id}, {"n", trace.n}, {"seed", trace.seed},
          {"log_initial", trace.log_initial}, {"stop_step", trace.stop_step},
          {"stop_reason", to_string(trace.stop_reason)}, {"guard_failed_at", trace.guard_failed_at},
          {"steps", steps}});
}

// Hosts with at least one factor: the given file, or G(n,p) samples
// resampled until Phi > 0.
std::vector<std::pair<std::uint64_t, HostGraph>> battery(const RunConfig& c, const PatternGraph& pattern) {
  std::vector<std::pair<std::uint64_t, HostGraph>> hosts;
  if (!c.host.empty()) {
    hosts.emplace_back(0, load_host(c.host, pattern));
    return hosts;
  }
  const int n = need(c.n, "--n (or --host)");
  const double p = need(c.p, "--p");
  for (int t = 0; t < c.trials; ++t) {
    bool found = false;
    for (std::uint64_t attempt = 0; attempt < 1000 && !found; ++attempt) {
      const auto s = derive_seed(derive_seed(c.seed, t), attempt);
      auto host = sample_gnp(pattern.arity(), n, p, s);
      if (has_factor(pattern, host)) {
        hosts.emplace_back(s, std::move(host));
        found = true;
      }
    }
    if (!found) throw Error("no host with a factor after 1000 samples; raise --p");
  }
  return hosts;
}

bool cmd_martingale(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const auto hosts = battery(c, pattern);
  bool all_ok = true;
  Json rows = Json::array();
  std::vector<std::vector<std::string>> csv_rows;
  for (std::size_t t = 0; t < hosts.size(); ++t) {
    const auto& [s, host] = hosts[t];
    const auto [average, predicted] = verify_martingale_step(pattern, host);
    const auto sum = edge_fraction_sum(pattern, host);
    const Rational expected_sum(pattern.edge_count() * host.vertex_count(), pattern.vertex_count());
    const bool ok = average == predicted && sum == expected_sum;
    all_ok = all_ok && ok;
    csv_rows.push_back({std::to_string(t), std::to_string(s), std::to_string(host.edge_count()), num(average),
                        den(average), num(predicted), den(predicted), num(sum), den(sum), ok ? "1" : "0"});
    rows.push_back({{"trial", t}, {"seed", s}, {"edges", host.edge_count()}, {"average_xi", to_string(average)},
                    {"predicted", to_string(predicted)}, {"edge_sum", to_string(sum)},
                    {"expected_sum", to_string(expected_sum)}, {"ok", ok}});
  }
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"trial", "seed", "edges", "avg_num", "avg_den", "pred_num", "pred_den", "sum_num", "sum_den", "ok"});
    for (const auto& r : csv_rows) csv.row(r);
  } else {
    o.json({{"command", "martingale-check"}, {"pattern", pattern.name()}, {"all_ok", all_ok}, {"hosts", rows}});
  }
  return all_ok;
}

bool cmd_shearer(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const auto hosts = battery(c, pattern);
  bool all_ok = true;
  Json rows = Json::array();
  std::vector<std::vector<std::string>> csv_rows;
  for (std::size_t t = 0; t < hosts.size(); ++t) {
    const auto& [s, host] = hosts[t];
    const auto r = shearer_check(pattern, host);
    all_ok = all_ok && r.holds;
    csv_rows.push_back({std::to_string(t), std::to_string(s), real(r.log_phi), real(r.bound), real(r.slack),
                        r.holds ? "1" : "0"});
    rows.push_back({{"trial", t}, {"seed", s}, {"log_phi", r.log_phi}, {"bound", r.bound}, {"slack", r.slack},
                    {"holds", r.holds}, {"vertex_entropy", r.vertex_entropy}});
  }
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"trial", "seed", "log_phi", "bound", "slack", "holds"});
    for (const auto& r : csv_rows) csv.row(r);
  } else {
    o.json({{"command", "shearer"}, {"pattern", pattern.name()}, {"all_hold", all_ok}, {"hosts", rows}});
  }
  return all_ok;
}

void cmd_window(const RunConfig& c, const Output& o) {
  if (c.weights.empty()) throw Error("--weights is required for window");
  const auto family = parse_weight_family_csv(read_file(c.weights));
  const auto r = entropy_window(family);
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"size", "zero_weight_removed", "entropy", "k", "log_c", "a", "b", "window_size", "wj_ratio",
             "j_frac", "j_frac_floor", "guarantees_hold"});
    csv.row({std::to_string(r.size), std::to_string(r.zero_weight_removed), real(r.entropy), real(r.k),
             real(r.log_c), real(r.a), real(r.b), std::to_string(r.window.size()), real(r.wj_ratio),
             real(r.j_frac), real(r.j_frac_floor), r.guarantees_hold ? "1" : "0"});
    return;
  }
  Json members = Json::array();
  for (auto i : r.window) members.push_back(family.ids[i]);
  o.json({{"command", "window"}, {"size", r.size}, {"zero_weight_removed", r.zero_weight_removed},
          {"entropy", r.entropy}, {"k", r.k}, {"c", json_real(r.c)}, {"log_c", r.log_c}, {"a", r.a},
          {"b", json_real(r.b)}, {"window", members}, {"wj_ratio", r.wj_ratio}, {"j_frac", r.j_frac},
          {"j_frac_floor", r.j_frac_floor}, {"guarantees_hold", r.guarantees_hold}});
}

void cmd_weight_lemma(const RunConfig& c, const Output& o) {
  if (c.weights.empty()) throw Error("--weights is required for weight-lemma");
  const int n = need(c.n, "--n");
  const double bound = need(c.bound, "--B");
  const auto pattern = load_pattern(c.pattern);
  const auto weights = parse_subset_weights_csv(read_file(c.weights), n, pattern.vertex_count());
  const auto r = weight_lemma_check(weights, bound);
  auto set_str = [](const std::optional<std::vector<Vertex>>& s) { return s ? join_vertices(*s, ' ') : ""; };
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"hypothesis_holds", "conclusion_holds", "hypothesis_sets", "conclusion_sets",
             "hypothesis_counterexample", "counterexample", "i", "count", "required"});
    csv.row({r.hypothesis_holds ? "1" : "0", r.conclusion_holds ? "1" : "0",
             std::to_string(r.hypothesis_sets_checked), std::to_string(r.conclusion_sets_checked),
             set_str(r.hypothesis_counterexample), set_str(r.counterexample), std::to_string(r.counterexample_i),
             real(r.counterexample_count), real(r.counterexample_required)});
    return;
  }
  Json j = {{"command", "weight-lemma"}, {"n", n}, {"v", pattern.vertex_count()}, {"B", bound},
            {"hypothesis_holds", r.hypothesis_holds}, {"conclusion_holds", r.conclusion_holds},
            {"hypothesis_sets_checked", r.hypothesis_sets_checked},
            {"conclusion_sets_checked", r.conclusion_sets_checked}};
  j["hypothesis_counterexample"] = r.hypothesis_counterexample ? Json(*r.hypothesis_counterexample) : Json(nullptr);
  if (r.counterexample) {
    j["counterexample"] = {{"set", *r.counterexample}, {"i", r.counterexample_i},
                           {"count", r.counterexample_count}, {"required", r.counterexample_required}};
  } else {
    j["counterexample"] = nullptr;
  }
  o.json(j);
}

Json profile_json(const DerivativeProfile& p) {
  Json j = {{"degree", p.degree}, {"expectation", p.expectation}, {"e_j", p.e_j}, {"e_star", p.e_star},
            {"eprime_max", p.eprime_max}, {"distinct_sets", p.distinct_sets}};
  j["min_exponent"] = p.min_exponent ? Json(*p.min_exponent) : Json(nullptr);
  return j;
}

void cmd_poly(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const int n = need(c.n, "--n");
  const double p = need(c.p, "--p");
  CoefficientScale scale;
  if (c.scale == "normalized") {
    scale = CoefficientScale::Normalized;
  } else if (c.scale == "raw") {
    scale = CoefficientScale::Raw;
  } else {
    throw Error("--scale must be normalized or raw");
  }
  const auto anchor = c.pin < 0 ? ConstraintSpec::all_edges(pattern)
                                : ConstraintSpec::pinned_copy(pattern, c.pin, 0);
  const CopyPolynomial f(pattern, n, anchor, scale);
  Json j = {{"command", "poly"}, {"mode", c.mode}, {"pattern", pattern.name()}, {"n", n}, {"p", p},
            {"pin", c.pin}, {"scale", c.scale}, {"normalization", f.normalization().str()},
            {"injections", f.injection_count().str()}};
  std::vector<std::string> header, cells;
  if (c.mode == "profile") {
    const auto prof = derivative_profile(f, p);
    j["profile"] = profile_json(prof);
    header = {"degree", "expectation", "e_star", "eprime_max", "distinct_sets", "min_exponent"};
    cells = {std::to_string(prof.degree), real(prof.expectation), real(prof.e_star), real(prof.eprime_max),
             std::to_string(prof.distinct_sets), prof.min_exponent ? real(*prof.min_exponent) : ""};
    for (std::size_t k = 0; k < prof.e_j.size(); ++k) {
      header.push_back("e_" + std::to_string(k + 1));
      cells.push_back(real(prof.e_j[k]));
    }
  } else if (c.mode == "hypothesis") {
    HypothesisOptions options;
    options.omega_threshold = c.omega;
    options.a_bound = c.a_bound;
    options.q = c.q;
    const auto r = hypothesis_check(f, p, need(c.eps, "--eps"), parse_theorem(c.theorem), options);
    j["theorem"] = to_string(r.theorem);
    j["eps"] = r.eps;
    j["omega_threshold"] = r.omega_threshold;
    j["a_bound"] = r.a_bound;
    j["expectation_ok"] = r.expectation_ok;
    j["derivative_ok"] = r.derivative_ok;
    j["binding_ratio"] = json_real(r.binding_ratio);
    j["pass"] = r.pass;
    j["finitary_window_ok"] = r.finitary_window_ok ? Json(*r.finitary_window_ok) : Json(nullptr);
    j["profile"] = profile_json(r.profile);
    header = {"theorem", "eps", "expectation", "omega_threshold", "a_bound", "expectation_ok", "derivative_ok",
              "binding_ratio", "pass"};
    cells = {to_string(r.theorem), real(r.eps), real(r.profile.expectation), real(r.omega_threshold),
             real(r.a_bound), r.expectation_ok ? "1" : "0", r.derivative_ok ? "1" : "0", real(r.binding_ratio),
             r.pass ? "1" : "0"};
  } else if (c.mode == "concentration") {
    const double eps = c.eps.value_or(0.5);
    const auto r = concentration_trial(f, p, c.trials, eps, c.seed, workers_of(c));
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["eps"] = r.eps;
    j["expectation"] = r.expectation;
    j["mean"] = r.mean;
    j["stddev"] = r.stddev;
    j["standard_error"] = r.standard_error;
    j["z_score"] = json_real(r.z_score);
    j["exceed_fraction"] = r.exceed_fraction;
    j["values"] = r.values;
    header = {"trial", "seed", "value"};
    if (o.csv) {
      Csv csv(o.os, o.version_line);
      csv.row(header);
      for (int t = 0; t < r.trials; ++t) csv.row({std::to_string(t), std::to_string(c.seed), real(r.values[t])});
      return;
    }
  } else {
    throw Error("--mode must be profile, hypothesis or concentration");
  }
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row(header);
    csv.row(cells);
  } else {
    o.json(j);
  }
}

void cmd_models(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const auto r = compare_models(pattern, need(c.n, "--n"), need(c.p, "--p"), c.trials, c.seed, workers_of(c));
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"n", "p", "M", "trials", "seed", "p_gnp", "p_gnm", "se_gnp", "se_gnm", "difference", "combined_se"});
    csv.row({std::to_string(r.n), real(r.p), std::to_string(r.m_edges), std::to_string(r.trials),
             std::to_string(r.seed), real(r.p_gnp), real(r.p_gnm), real(r.se_gnp), real(r.se_gnm),
             real(r.difference), real(r.combined_se)});
    return;
  }
  o.json({{"command", "models"}, {"pattern", pattern.name()}, {"n", r.n}, {"p", r.p}, {"M", r.m_edges},
          {"trials", r.trials}, {"seed", r.seed}, {"p_gnp", r.p_gnp}, {"p_gnm", r.p_gnm}, {"se_gnp", r.se_gnp},
          {"se_gnm", r.se_gnm}, {"difference", r.difference}, {"combined_se", r.combined_se}});
}

void cmd_regularity(const RunConfig& c, const Output& o) {
  const auto pattern = load_pattern(c.pattern);
  const double p = need(c.p, "--p");
  const auto host = c.host.empty() ? sample_gnp(pattern.arity(), need(c.n, "--n (or --host)"), p, c.seed)
                                   : load_host(c.host, pattern);
  RegularityOptions options;
  options.part_a = !c.skip_part_a;
  options.seed = c.seed;
  const auto r = regularity_report(pattern, host, p, need(c.eps, "--eps"), c.beta, options);
  if (o.csv) {
    Csv csv(o.os, o.version_line);
    csv.row({"a", "eprime", "e_star", "regime", "threshold", "x_max", "psi_checked", "psi_exhaustive", "ok"});
    for (const auto& k : r.checks) {
      auto ints = [](const std::vector<int>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
        return s;
      };
      csv.row({ints(k.a), ints(k.eprime), real(k.e_star), k.small_regime ? "small" : "large", real(k.threshold),
               real(k.x_max), std::to_string(k.psi_checked), k.psi_exhaustive ? "1" : "0", k.ok ? "1" : "0"});
    }
    return;
  }
  Json checks = Json::array();
  for (const auto& k : r.checks) {
    checks.push_back({{"a", k.a}, {"eprime", k.eprime}, {"e_star", k.e_star},
                      {"regime", k.small_regime ? "small" : "large"}, {"threshold", k.threshold},
                      {"x_max", k.x_max}, {"worst_psi", k.worst_psi}, {"psi_checked", k.psi_checked},
                      {"psi_exhaustive", k.psi_exhaustive}, {"ok", k.ok}});
  }
  o.json({{"command", "regularity"}, {"pattern", pattern.name()}, {"n", r.n}, {"p", r.p}, {"eps", r.eps},
          {"beta", r.beta}, {"expected_degree", r.expected_degree}, {"min_degree", r.min_degree},
          {"max_degree", r.max_degree}, {"degree_deviation", json_real(r.degree_deviation)},
          {"part_b_ok", r.part_b_ok}, {"part_a_run", r.part_a_run}, {"family_regime", r.family_regime},
          {"part_a_ok", r.part_a_ok}, {"regular", r.regular}, {"checks", checks}});
}

bool default_csv(const std::string& command) { return command == "trace" || command == "scan"; }

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    static const std::vector<std::string> commands = {
        "analyze", "count", "scan", "trace", "martingale-check", "shearer", "window", "weight-lemma",
        "poly", "models", "regularity"};
    if (std::find(commands.begin(), commands.end(), config.command) == commands.end()) {
      throw Error("unknown command '" + config.command + "'");
    }
    if (config.trials < 1) throw Error("--trials must be at least 1");
    std::ofstream file;
    if (!config.out.empty()) {
      file.open(config.out, std::ios::binary);
      if (!file) throw Error("cannot write '" + config.out + "'");
    }
    std::ostream& os = config.out.empty() ? out : file;
    const bool csv = config.format == Format::Csv || (config.format == Format::Auto && default_csv(config.command));
    const Output o{os, csv, config.version_line};

    bool ok = true;
    const auto& cmd = config.command;
    if (cmd == "analyze") cmd_analyze(config, o);
    else if (cmd == "count") cmd_count(config, o);
    else if (cmd == "scan") cmd_scan(config, o);
    else if (cmd == "trace") cmd_trace(config, o);
    else if (cmd == "martingale-check") ok = cmd_martingale(config, o);
    else if (cmd == "shearer") ok = cmd_shearer(config, o);
    else if (cmd == "window") cmd_window(config, o);
    else if (cmd == "weight-lemma") cmd_weight_lemma(config, o);
    else if (cmd == "poly") cmd_poly(config, o);
    else if (cmd == "models") cmd_models(config, o);
    else if (cmd == "regularity") cmd_regularity(config, o);
    os.flush();
    if (!ok) {
      err << "invariant failure: " << cmd << " found a violated identity\n";
      return 2;
    }
    return 0;
  } catch (const InvariantViolation& e) {
    err << "invariant failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact H-factor counting and random-graph experiments", "hfactor"};
  app.set_config("--config", "", "Config file (TOML or INI); keys mirror flag names, flags win");

  std::optional<int> n;
  std::optional<double> p, eps, bound, omega, a_bound, q;
  std::optional<std::uint64_t> m_edges, t_max;
  std::string n_list, format = "auto";
  bool no_version_line = false;

  app.add_option("command", c.command,
                 "analyze | count | scan | trace | martingale-check | shearer | window | weight-lemma | "
                 "poly | models | regularity")
      ->required();
  app.add_option("--pattern", c.pattern, "Pattern file or built-in name (K3, C4, P4, E3, ...)");
  app.add_option("--host", c.host, "Host edge-list file");
  app.add_option("--n", n, "Number of host vertices");
  app.add_option("--n-list", n_list, "Comma-separated host sizes for scan");
  app.add_option("--p", p, "Edge probability");
  app.add_option("--M", m_edges, "Edge count for G(n,M)");
  app.add_option("--trials", c.trials, "Samples (per probe for scan)");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--t-max", t_max, "Maximum process steps");
  app.add_option("--eps", eps, "Tolerance parameter");
  app.add_option("--property", c.property, "Scan property")->check(CLI::IsMember({"factor", "coverage", "role"}));
  app.add_option("--out", c.out, "Output path (default stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--workers", c.workers, "Worker threads (0: available parallelism)");
  app.add_option("--weights", c.weights, "Weight CSV for window / weight-lemma");
  app.add_option("--B", bound, "Hypothesis level B for weight-lemma");
  app.add_option("--beta", c.beta, "beta for regularity");
  app.add_option("--mode", c.mode, "poly mode")->check(CLI::IsMember({"profile", "hypothesis", "concentration"}));
  app.add_option("--theorem", c.theorem, "Hypothesis set for poly --mode hypothesis");
  app.add_option("--pin", c.pin, "Pattern vertex pinned to host vertex 0 (-1: none)");
  app.add_option("--scale", c.scale, "Coefficient scale")->check(CLI::IsMember({"normalized", "raw"}));
  app.add_option("--omega", omega, "Stand-in for omega(log n) lower bounds");
  app.add_option("--a-bound", a_bound, "A in the upper-tail corollaries");
  app.add_option("--q", q, "Finitary window constant Q");
  app.add_option("--lambda", c.lambda, "Tail level");
  app.add_option("--b-level", c.b_level, "Guard level for maxr");
  app.add_option("--guard-eps", c.guard_eps, "Guard tolerance for degree deviation");
  app.add_flag("--no-guard", c.no_guard, "Disable the process guard");
  app.add_flag("--skip-part-a", c.skip_part_a, "regularity: only the degree part");
  app.add_flag("--no-version-line", no_version_line, "Omit the version comment in CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    c.n = n;
    c.p = p;
    c.eps = eps;
    c.bound = bound;
    c.omega = omega;
    c.a_bound = a_bound;
    c.q = q;
    c.m_edges = m_edges;
    c.t_max = t_max;
    c.version_line = !no_version_line;
    c.format = format == "csv" ? Format::Csv : format == "json" ? Format::Json : Format::Auto;
    if (!n_list.empty()) {
      std::stringstream ss(n_list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const int value = std::stoi(item, &used);
        if (used != item.size()) throw Error("bad --n-list entry '" + item + "'");
        c.n_list.push_back(value);
      }
    }
    if (!c.host.empty() && !std::filesystem::exists(c.host)) throw Error("host file '" + c.host + "' not found");
    if (!c.weights.empty() && !std::filesystem::exists(c.weights)) {
      throw Error("weights file '" + c.weights + "' not found");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return execute(c, out, err);
}

}  // namespace hfactor::cli
