#include "fracflow/stats.hpp"

#include <cmath>
#include <limits>

#include "fracflow/error.hpp"

namespace fracflow {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::ReportOnly: return "report-only";
  }
  return "report-only";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "report-only") return Verdict::ReportOnly;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + s + "'");
}

MeanSe mean_se(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {0.0, 0.0, 0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  if (n == 1) return {mean, 0.0, 1};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

StatReport band_check(std::string name, double estimate, double target, double se, std::size_t n,
                      double band) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = target;
  r.standard_error = se;
  r.tolerance = band;
  r.n = n;
  r.verdict = std::abs(estimate - target) <= band * se ? Verdict::Pass : Verdict::Fail;
  return r;
}

StatReport tolerance_check(std::string name, double estimate, double target, double tolerance,
                           std::size_t n) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = target;
  r.tolerance = tolerance;
  r.n = n;
  r.verdict = std::abs(estimate - target) <= tolerance ? Verdict::Pass : Verdict::Fail;
  return r;
}

StatReport threshold_check(std::string name, double estimate, double threshold, bool at_least,
                           std::size_t n) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = threshold;
  r.n = n;
  r.metadata["relation"] = at_least ? ">=" : "<=";
  const bool ok = at_least ? estimate >= threshold : estimate <= threshold;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

StatReport report_only(std::string name, double estimate, double target, std::size_t n) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = target;
  r.n = n;
  r.verdict = Verdict::ReportOnly;
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "constant abscissa");
  LineFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      rss += e * e;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "need two or more pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

nlohmann::ordered_json to_json(const StatReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["estimate"] = r.estimate;
  j["target"] = r.target;
  j["standard_error"] =
      r.standard_error ? nlohmann::ordered_json(*r.standard_error) : nlohmann::ordered_json(nullptr);
  j["tolerance"] = r.tolerance;
  j["n"] = r.n;
  j["verdict"] = to_string(r.verdict);
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

StatReport stat_report_from_json(const nlohmann::json& j) {
  // Non-finite numbers are written as null.
  auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  try {
    StatReport r;
    r.name = j.at("name").get<std::string>();
    r.estimate = num(j.at("estimate"));
    r.target = num(j.at("target"));
    if (j.contains("standard_error") && !j.at("standard_error").is_null()) {
      r.standard_error = num(j.at("standard_error"));
    }
    r.tolerance = j.contains("tolerance") ? num(j.at("tolerance")) : 0.0;
    r.n = j.value("n", std::size_t{0});
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    if (j.contains("metadata")) {
      for (const auto& [k, v] : j.at("metadata").items()) r.metadata[k] = v.get<std::string>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed report: ") + e.what());
  }
}

}  // namespace fracflow
