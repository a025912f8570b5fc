#include "fracflow/fbm_path.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracflow/error.hpp"

namespace fracflow {

std::string to_string(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Kernel: return "kernel";
    case Method::Mollified: return "mollified";
    case Method::Poisson: return "poisson";
    case Method::Gamma: return "gamma";
    case Method::PiecewiseLinear: return "piecewise_linear";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::Exact, Method::Kernel, Method::Mollified, Method::Poisson, Method::Gamma,
                   Method::PiecewiseLinear}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

std::string MethodTag::describe() const {
  if (method == Method::Exact || method == Method::PiecewiseLinear) return to_string(method);
  return to_string(method) + "(" + format_double(parameter) + ")";
}

std::optional<std::size_t> FbmPath::find(double t) const {
  // Grid times built by different formulas may differ in the last bits.
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it == times.end() || std::abs(*it - t) > tol) return std::nullopt;
  return static_cast<std::size_t>(it - times.begin());
}

std::size_t FbmPath::index_of(double t) const {
  const auto k = find(t);
  if (!k) throw Error(ErrorCode::MissingSample, "time " + format_double(t) + " not on the path grid");
  return *k;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string path_csv(const FbmPath& path) {
  std::string out = "time";
  for (Eigen::Index j = 0; j < path.dimension(); ++j) out += ",dim" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < path.size(); ++i) {
    out += format_double(path.times[i]);
    for (Eigen::Index j = 0; j < path.dimension(); ++j) {
      out += ',';
      out += format_double(path.values(j, static_cast<Eigen::Index>(i)));
    }
    out += '\n';
  }
  return out;
}

void write_path_csv(const FbmPath& path, const std::string& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + file);
  os << path_csv(path);
  if (!os) throw Error(ErrorCode::Io, "write failed: " + file);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Io, "bad number in path csv: " + std::string(s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

FbmPath read_path_csv(const std::string& file, double hurst) {
  std::ifstream is(file);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + file);
  std::string line;
  if (!std::getline(is, line) || line.rfind("time", 0) != 0) {
    throw Error(ErrorCode::Io, "path csv must start with a time,dim0,... header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::size_t d = split(line).size() - 1;
  if (d == 0) throw Error(ErrorCode::Io, "path csv has no value columns");
  std::vector<double> times;
  std::vector<double> flat;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != d + 1) throw Error(ErrorCode::Io, "ragged row in path csv");
    times.push_back(parse_double(cols[0]));
    for (std::size_t j = 1; j <= d; ++j) flat.push_back(parse_double(cols[j]));
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::Io, "path times must increase");
  }
  FbmPath p;
  p.params = HurstParams(hurst);
  p.times = std::move(times);
  p.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>>(
      flat.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(p.times.size()));
  return p;
}

}  // namespace fracflow
