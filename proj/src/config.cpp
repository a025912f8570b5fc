#include "fracflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracflow/error.hpp"

namespace fracflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

double to_double(const std::string& s, const std::string& key) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) invalid(key + ": bad number '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    invalid(key + ": bad unsigned integer '" + s + "'");
  }
  return v;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out;
}

}  // namespace

std::vector<double> GridSpec::times() const {
  std::vector<double> t(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    t[i] = start + (end - start) * static_cast<double>(i) / static_cast<double>(cells);
  }
  t.back() = end;
  return t;
}

std::string GridSpec::text() const {
  return format_double(start) + ":" + format_double(end) + ":" + std::to_string(cells);
}

GridSpec GridSpec::parse(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) invalid("grid must be start:end:cells, got '" + s + "'");
  GridSpec g{to_double(parts[0], "grid"), to_double(parts[1], "grid"),
             static_cast<std::size_t>(to_uint(parts[2], "grid"))};
  if (!(g.end > g.start) || g.cells == 0) invalid("grid needs end > start and cells >= 1");
  return g;
}

std::string to_string(TauRule r) {
  switch (r) {
    case TauRule::Left: return "left";
    case TauRule::Midpoint: return "midpoint";
    case TauRule::Right: return "right";
    case TauRule::Custom: return "custom";
  }
  return "midpoint";
}

TauRule tau_rule_from_string(const std::string& s) {
  if (s == "left") return TauRule::Left;
  if (s == "midpoint") return TauRule::Midpoint;
  if (s == "right") return TauRule::Right;
  invalid("partition.rule must be left, midpoint or right, got '" + s + "'");
}

std::size_t ExperimentConfig::mc_small() const { return std::max<std::size_t>(100, mc_n / 10); }

void ExperimentConfig::validate() const {
  if (hurst.empty()) invalid("hurst list is empty");
  for (double h : hurst) {
    if (!(h > 0.0 && h < 1.0)) invalid("hurst values must lie in (0, 1)");
  }
  if (methods.empty()) invalid("methods list is empty");
  if (!(grid.end > grid.start) || grid.cells == 0) invalid("grid needs end > start and cells >= 1");
  if (partition_cells == 0) invalid("partition.cells must be positive");
  if (mc_n < 100) invalid("mc_n must be at least 100");
  if (!(se_band > 0.0) || !std::isfinite(se_band)) invalid("tolerance.se_band must be positive");
  if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale)) {
    invalid("tolerance.scale must be positive");
  }
  if (out_dir.empty()) invalid("out must not be empty");
}

std::string ExperimentConfig::text() const {
  std::ostringstream o;
  o << "hurst = " << join(hurst, format_double) << "\n";
  o << "methods = " << join(methods, [](Method m) { return to_string(m); }) << "\n";
  o << "grid = " << grid.text() << "\n";
  o << "partition.rule = " << to_string(partition_rule) << "\n";
  o << "partition.cells = " << partition_cells << "\n";
  o << "mc_n = " << mc_n << "\n";
  o << "seed = " << seed << "\n";
  o << "tolerance.se_band = " << format_double(se_band) << "\n";
  o << "tolerance.scale = " << format_double(tolerance_scale) << "\n";
  o << "out = " << out_dir << "\n";
  o << "checks = " << (checks.empty() ? std::string("all") : join(checks, [](const std::string& c) { return c; }))
    << "\n";
  return o.str();
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) invalid("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "hurst") {
      c.hurst.clear();
      for (const auto& v : split(value, ',')) c.hurst.push_back(to_double(v, key));
    } else if (key == "methods") {
      c.methods.clear();
      for (const auto& v : split(value, ',')) {
        try {
          c.methods.push_back(method_from_string(v));
        } catch (const Error& e) {
          invalid(e.what());
        }
      }
    } else if (key == "grid") {
      c.grid = GridSpec::parse(value);
    } else if (key == "partition.rule") {
      c.partition_rule = tau_rule_from_string(value);
    } else if (key == "partition.cells") {
      c.partition_cells = static_cast<std::size_t>(to_uint(value, key));
    } else if (key == "mc_n") {
      c.mc_n = static_cast<std::size_t>(to_uint(value, key));
    } else if (key == "seed") {
      c.seed = to_uint(value, key);
    } else if (key == "tolerance.se_band") {
      c.se_band = to_double(value, key);
    } else if (key == "tolerance.scale") {
      c.tolerance_scale = to_double(value, key);
    } else if (key == "out") {
      c.out_dir = value;
    } else if (key == "checks") {
      c.checks.clear();
      if (value != "all") c.checks = split(value, ',');
    } else {
      invalid("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void save_config(const ExperimentConfig& c, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file);
  out << c.text();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + file);
}

}  // namespace fracflow
