#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracflow/config.hpp"
#include "fracflow/error.hpp"
#include "fracflow/report.hpp"
#include "fracflow/stats.hpp"
#include "fracflow/verify.hpp"

using namespace fracflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fracflow_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("mean and standard error") {
  const auto m = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.n == 4);
}

TEST_CASE("line fit and correlation") {
  const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-12));
  const auto g = fit_line({0, 1, 2}, {0, 1, 0});
  CHECK(g.slope == doctest::Approx(0.0));
  CHECK(g.slope_se > 0.0);
  CHECK(correlation({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(correlation({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(code_of([] { fit_line({1.0}, {1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { fit_line({1.0, 1.0}, {1.0, 2.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("verdicts") {
  CHECK(band_check("a", 1.0, 1.2, 0.1, 10).verdict == Verdict::Pass);
  CHECK(band_check("a", 1.0, 1.4, 0.1, 10).verdict == Verdict::Fail);
  CHECK(band_check("a", 1.0, 1.4, 0.1, 10, 5.0).verdict == Verdict::Pass);
  CHECK(tolerance_check("b", 1.0, 1.05, 0.1).verdict == Verdict::Pass);
  CHECK(tolerance_check("b", 1.0, 1.15, 0.1).failed());
  CHECK(threshold_check("c", 2.0, 1.0, true).verdict == Verdict::Pass);
  CHECK(threshold_check("c", 2.0, 1.0, false).verdict == Verdict::Fail);
  CHECK(threshold_check("c", 1.0, 1.0, false).verdict == Verdict::Pass);
  CHECK(report_only("d", 3.0).verdict == Verdict::ReportOnly);
  for (auto v : {Verdict::Pass, Verdict::Fail, Verdict::ReportOnly}) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
}

TEST_CASE("report json round trip") {
  auto r = band_check("entry", 0.123456789012345, 0.1, 0.01, 500);
  r.metadata["H"] = "0.3";
  const auto back = stat_report_from_json(to_json(r));
  CHECK(back.name == r.name);
  CHECK(back.estimate == r.estimate);
  CHECK(back.target == r.target);
  CHECK(back.standard_error == r.standard_error);
  CHECK(back.tolerance == r.tolerance);
  CHECK(back.n == r.n);
  CHECK(back.verdict == r.verdict);
  CHECK(back.metadata == r.metadata);
  const auto j = to_json(report_only("x", 1.0));
  CHECK(j["standard_error"].is_null());
  CHECK(j["estimate"].is_number());
  const auto nan = stat_report_from_json(to_json(report_only("y", std::nan(""))));
  CHECK(std::isnan(nan.estimate));
}

TEST_CASE("config text round trip") {
  ExperimentConfig c;
  c.hurst = {0.1, 1.0 / 3.0, 0.9};
  c.methods = {Method::Gamma, Method::Exact};
  c.grid = {0.1, 0.7, 12};
  c.partition_rule = TauRule::Left;
  c.partition_cells = 77;
  c.mc_n = 1234;
  c.seed = 18446744073709551615ull;
  c.se_band = 2.5;
  c.tolerance_scale = 0.1;
  c.out_dir = "some/where";
  c.checks = {"chen_identity", "mc_covariance"};
  const auto back = parse_config(c.text());
  CHECK(back == c);
  CHECK(back.text() == c.text());
  CHECK(parse_config(ExperimentConfig{}.text()) == ExperimentConfig{});
  CHECK(ExperimentConfig{}.mc_small() == 1000);
  ExperimentConfig small;
  small.mc_n = 150;
  CHECK(small.mc_small() == 100);
}

TEST_CASE("config parsing") {
  const auto c = parse_config("# comment\nhurst = 0.4\n\n  mc_n = 500  # trailing\ngrid = 0:1:4\n");
  CHECK(c.hurst == std::vector<double>{0.4});
  CHECK(c.mc_n == 500);
  CHECK(c.grid.times() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(c.methods == ExperimentConfig{}.methods);
  CHECK(code_of([] { parse_config("mc_n = 0"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("colour = blue"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("hurst = 1.5"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("hurst = abc"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("methods = exact, magic"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("just a line"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { GridSpec::parse("1:0:4"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { GridSpec::parse("0:1"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { load_config("/nonexistent/fracflow.conf"); }) == ErrorCode::Io);
  const auto dir = scratch("config");
  ExperimentConfig d;
  d.seed = 7;
  save_config(d, (dir / "c.conf").string());
  CHECK(load_config((dir / "c.conf").string()) == d);
  fs::remove_all(dir);
}

TEST_CASE("aggregating an empty directory gives only the header") {
  const auto in = scratch("report_in");
  const auto out = fs::temp_directory_path() / "fracflow_test_report_out";
  fs::remove_all(out);
  const auto s = aggregate_reports(in.string(), out.string());
  CHECK(s.files == 0);
  CHECK(s.reports == 0);
  CHECK(slurp(out / "summary.csv") == std::string(kSummaryHeader) + "\n");
  fs::remove_all(in);
  fs::remove_all(out);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("verify output is deterministic and aggregates") {
  ExperimentConfig c;
  c.mc_n = 1000;
  c.checks = {"covariance_closed_form", "chen_identity", "brownian_reduction"};
  const auto first = run_verify(c);
  const auto second = run_verify(c);
  REQUIRE(first.size() == 3);
  CHECK(suite_passed(first));
  CHECK(first[0].info.criterion == 1);
  const auto d1 = scratch("verify1"), d2 = scratch("verify2");
  write_verify_reports(first, d1.string());
  write_verify_reports(second, d2.string());
  for (const auto* name : {"verify.json", "covariance_closed_form.json", "chen_identity.json"}) {
    CAPTURE(name);
    CHECK(slurp(d1 / name) == slurp(d2 / name));
    CHECK_FALSE(slurp(d1 / name).empty());
  }
  CHECK(slurp(d1 / "verify.json").find("seconds") == std::string::npos);
  const auto out = fs::temp_directory_path() / "fracflow_test_verify_out";
  fs::remove_all(out);
  const auto s = aggregate_reports(d1.string(), out.string());
  CHECK(s.files == 3);
  CHECK(s.reports > 3);
  CHECK(s.failed == 0);
  const std::string csv = slurp(out / "summary.csv");
  CHECK(csv.rfind(kSummaryHeader, 0) == 0);
  CHECK(csv.find("chen_identity,") != std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
  fs::remove_all(out);
  ExperimentConfig bad;
  bad.checks = {"no_such_check"};
  CHECK(code_of([&] { run_verify(bad); }) == ErrorCode::ConfigInvalid);
  CHECK(verify_checks().size() == 13);
}
