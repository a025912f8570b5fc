#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracflow/config.hpp"
#include "fracflow/stats.hpp"

namespace fracflow {

struct CheckInfo {
  int criterion;
  std::string name;
  std::string title;
  double time_limit;  ///< seconds; 0 when unbounded
  bool statistical;   ///< eligible for the 4x N rerun
};

/// The acceptance checks in criterion order.
const std::vector<CheckInfo>& verify_checks();

struct CheckOutcome {
  CheckInfo info;
  std::vector<StatReport> reports;
  bool passed = false;
  bool rerun = false;
  double seconds = 0.0;  ///< wall clock, never serialized
  std::string error;     ///< set when the check threw
};

/// Runs the selected checks (config.checks, all when empty). A statistical
/// check with a failing report is rerun once with 4x its Monte Carlo sizes.
/// Results depend only on the config. Throws ConfigInvalid for unknown names.
std::vector<CheckOutcome> run_verify(const ExperimentConfig& config,
                                     const std::function<void(const CheckOutcome&)>& on_done = {});

bool suite_passed(const std::vector<CheckOutcome>& outcomes);

nlohmann::ordered_json to_json(const CheckOutcome& outcome);

/// Writes <out>/<check>.json per check and <out>/verify.json (summary).
/// Throws Io.
void write_verify_reports(const std::vector<CheckOutcome>& outcomes, const std::string& out_dir);

/// Riemann-sum test function for the rate check: a lacunary sine series with
/// decay 2^{-k H'} sampled on 2^level cells of [0, 1].
std::vector<double> lacunary_series(double hprime, int terms, int level);

}  // namespace fracflow
