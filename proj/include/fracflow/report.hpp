#pragma once

#include <cstddef>
#include <string>

namespace fracflow {

struct ReportSummary {
  std::size_t files = 0;
  std::size_t reports = 0;
  std::size_t series = 0;
  std::size_t failed = 0;
};

/// Header line of summary.csv.
inline constexpr const char* kSummaryHeader =
    "check,name,estimate,target,standard_error,tolerance,n,verdict";

/// Collects the StatReports of every *.json file in in_dir (files with a
/// "reports" array, in file-name order) into out_dir/summary.csv, and writes
/// out_dir/series/<check>__<k>.csv (x,y) for each report carrying a series.
/// An empty or report-free directory gives a header-only summary. Throws Io.
ReportSummary aggregate_reports(const std::string& in_dir, const std::string& out_dir);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace fracflow
