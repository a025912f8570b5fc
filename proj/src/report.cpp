#include "fracflow/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "fracflow/error.hpp"
#include "fracflow/fbm_path.hpp"
#include "fracflow/stats.hpp"

namespace fracflow {

namespace fs = std::filesystem;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::string num(double v) { return format_double(v); }

}  // namespace

ReportSummary aggregate_reports(const std::string& in_dir, const std::string& out_dir) {
  std::error_code ec;
  if (!fs::is_directory(in_dir, ec)) throw Error(ErrorCode::Io, "not a directory: " + in_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + in_dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());

  ReportSummary summary;
  std::ostringstream csv;
  csv << kSummaryHeader << "\n";
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Io, file.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("reports") || !j["reports"].is_array()) continue;
    ++summary.files;
    const std::string check = j.value("check", file.stem().string());
    std::size_t k = 0;
    for (const auto& rj : j["reports"]) {
      const StatReport r = stat_report_from_json(rj);
      ++summary.reports;
      if (r.failed()) ++summary.failed;
      csv << csv_field(check) << "," << csv_field(r.name) << "," << num(r.estimate) << ","
          << num(r.target) << "," << (r.standard_error ? num(*r.standard_error) : "") << ","
          << num(r.tolerance) << "," << r.n << "," << to_string(r.verdict) << "\n";
      const auto sx = r.metadata.find("series_x");
      const auto sy = r.metadata.find("series_y");
      if (sx != r.metadata.end() && sy != r.metadata.end()) {
        const auto xs = split_list(sx->second);
        const auto ys = split_list(sy->second);
        fs::create_directories(fs::path(out_dir) / "series", ec);
        const auto target = fs::path(out_dir) / "series" / (check + "__" + std::to_string(k) + ".csv");
        std::ofstream out(target);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + target.string());
        out << "# " << r.name << "\nx,y\n";
        for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
          out << xs[i] << "," << ys[i] << "\n";
        }
        ++summary.series;
      }
      ++k;
    }
  }
  const auto target = fs::path(out_dir) / "summary.csv";
  std::ofstream out(target);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + target.string());
  out << csv.str();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + target.string());
  return summary;
}

}  // namespace fracflow
