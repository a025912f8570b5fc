#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracflow/fbm_path.hpp"
#include "fracflow/partition.hpp"

namespace fracflow {

/// Uniform time grid start:end:cells (cells + 1 points).
struct GridSpec {
  double start = 0.25;
  double end = 2.0;
  std::size_t cells = 7;

  std::vector<double> times() const;
  std::string text() const;
  /// Throws ConfigInvalid.
  static GridSpec parse(const std::string& s);
  bool operator==(const GridSpec&) const = default;
};

std::string to_string(TauRule r);
TauRule tau_rule_from_string(const std::string& s);

/// Experiment configuration. File form, one `key = value` per line, `#`
/// comments, lists comma separated:
///
///   hurst = 0.3, 0.5, 0.7
///   methods = exact, kernel, mollified, poisson, gamma
///   grid = 0.25:2:7
///   partition.rule = midpoint
///   partition.cells = 1024
///   mc_n = 10000
///   seed = 42
///   tolerance.se_band = 3
///   tolerance.scale = 1
///   out = fracflow_out
///   checks = all
///
/// mc_n is the Monte Carlo size of the large runs; runs specified at a tenth
/// of it use mc_n / 10 (at least 100).
struct ExperimentConfig {
  std::vector<double> hurst{0.3, 0.5, 0.7};
  std::vector<Method> methods{Method::Exact, Method::Kernel, Method::Mollified, Method::Poisson,
                              Method::Gamma};
  GridSpec grid;
  TauRule partition_rule = TauRule::Midpoint;
  std::size_t partition_cells = 1024;
  std::size_t mc_n = 10000;
  std::uint64_t seed = 42;
  double se_band = 3.0;
  double tolerance_scale = 1.0;
  std::string out_dir = "fracflow_out";
  std::vector<std::string> checks;  ///< empty means all

  std::size_t mc_small() const;
  /// Throws ConfigInvalid.
  void validate() const;
  std::string text() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates. Unknown keys and malformed values throw ConfigInvalid.
ExperimentConfig parse_config(const std::string& text);
/// Throws Io when unreadable.
ExperimentConfig load_config(const std::string& file);
void save_config(const ExperimentConfig& c, const std::string& file);

}  // namespace fracflow
