#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hfactor::cli {

enum class Format { Auto, Csv, Json };

struct RunConfig {
  std::string command;
  std::string pattern;  // file path, or a built-in name such as K3, C4, P4, E3
  std::string host;
  std::optional<int> n;
  std::vector<int> n_list;
  std::optional<double> p;
  std::optional<std::uint64_t> m_edges;
  int trials = 1;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> t_max;
  std::optional<double> eps;
  std::string property = "factor";
  std::string out;
  Format format = Format::Auto;
  unsigned workers = 0;  // 0: available parallelism

  // Subcommand-specific extras.
  std::string weights;
  std::optional<double> bound;  // B for weight-lemma
  double beta = 1.0;
  std::string mode = "profile";  // poly: profile | hypothesis | concentration
  std::string theorem = "Combination";
  int pin = 0;                   // poly: pattern vertex pinned to host vertex 0; -1 for none
  std::string scale = "normalized";
  std::optional<double> omega;
  std::optional<double> a_bound;
  std::optional<double> q;
  double lambda = 1.0;
  double b_level = 10.0;
  double guard_eps = 0.5;
  bool no_guard = false;
  bool skip_part_a = false;
  bool version_line = true;  // "# hfactor <version>" before CSV headers
};

/// Runs one command. Reports go to `out` (or config.out); errors go to `err`.
/// Returns 0 on success, 1 on validation errors, 2 on invariant failures.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (flags, optional --config file) and calls execute.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hfactor::cli
