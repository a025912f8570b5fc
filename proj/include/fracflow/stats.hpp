#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracflow {

enum class Verdict { Pass, Fail, ReportOnly };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Outcome of one numerical comparison. With a standard error the verdict is
/// pass iff |estimate - target| <= band * standard_error; without one,
/// a fixed tolerance (or a one-sided threshold, see relation) decides.
struct StatReport {
  std::string name;
  double estimate = 0.0;
  double target = 0.0;
  std::optional<double> standard_error;
  double tolerance = 0.0;  ///< absolute tolerance, or the band multiplier when SE is set
  std::size_t n = 0;
  Verdict verdict = Verdict::ReportOnly;
  std::map<std::string, std::string> metadata;

  bool failed() const { return verdict == Verdict::Fail; }
};

struct MeanSe {
  double mean;
  double se;
  std::size_t n;
};

/// Sample mean and its standard error (n - 1 in the variance).
MeanSe mean_se(const std::vector<double>& xs);

/// Pass iff |estimate - target| <= band * se.
StatReport band_check(std::string name, double estimate, double target, double se, std::size_t n,
                      double band = 3.0);

/// Pass iff |estimate - target| <= tolerance.
StatReport tolerance_check(std::string name, double estimate, double target, double tolerance,
                           std::size_t n = 0);

/// Pass iff estimate >= threshold (relation ">=") or estimate <= threshold ("<=").
StatReport threshold_check(std::string name, double estimate, double threshold, bool at_least,
                           std::size_t n = 0);

StatReport report_only(std::string name, double estimate, double target = 0.0, std::size_t n = 0);

struct LineFit {
  double slope;
  double intercept;
  double slope_se;  ///< 0 for two points
};

/// Ordinary least squares y = intercept + slope x. Throws InvalidArgument for
/// fewer than two points or constant x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Sample Pearson correlation.
double correlation(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::ordered_json to_json(const StatReport& r);
StatReport stat_report_from_json(const nlohmann::json& j);

}  // namespace fracflow
