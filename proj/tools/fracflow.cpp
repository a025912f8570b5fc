#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "fracflow/config.hpp"
#include "fracflow/error.hpp"
#include "fracflow/exact_sampler.hpp"
#include "fracflow/gamma_kernel.hpp"
#include "fracflow/integrals.hpp"
#include "fracflow/inversion.hpp"
#include "fracflow/kernel_synthesis.hpp"
#include "fracflow/noise_field.hpp"
#include "fracflow/polynomial.hpp"
#include "fracflow/report.hpp"
#include "fracflow/rough_path.hpp"
#include "fracflow/synthesis.hpp"
#include "fracflow/verify.hpp"

namespace fs = std::filesystem;
using namespace fracflow;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Shared flags; unset ones fall back to --config, then to the defaults.
struct Common {
  std::string config_file;
  std::optional<double> hurst;
  std::optional<std::string> method;
  std::optional<std::string> grid;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tolerance_scale;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "experiment config file (key = value)");
    app->add_option("--H", hurst, "Hurst exponent in (0, 1)");
    app->add_option("--method", method, "exact | kernel | mollified | poisson | gamma");
    app->add_option("--grid", grid, "time grid start:end:cells");
    app->add_option("--n", n, "number of paths / Monte Carlo size");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--out", out, "output file or directory");
    app->add_option("--tolerance-scale", tolerance_scale, "multiplier on fixed tolerances");
  }

  ExperimentConfig config() const {
    ExperimentConfig c = config_file.empty() ? ExperimentConfig{} : load_config(config_file);
    if (hurst) c.hurst = {*hurst};
    if (method) c.methods = {method_from_string(*method)};
    if (grid) c.grid = GridSpec::parse(*grid);
    if (n) c.mc_n = *n;
    if (seed) c.seed = *seed;
    if (out) c.out_dir = *out;
    if (tolerance_scale) c.tolerance_scale = *tolerance_scale;
    return c;
  }
};

void write_json(const nlohmann::ordered_json& j, const std::string& file) {
  if (file.empty() || file == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (fs::path(file).has_parent_path()) fs::create_directories(fs::path(file).parent_path());
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file);
  out << j.dump(2) << "\n";
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---- synth
struct SynthArgs {
  Common common;
  int dim = 1;
  double parameter = 0.0;
};

int run_synth(const SynthArgs& a) {
  const ExperimentConfig c = a.common.config();
  const HurstParams p(c.hurst.front());
  const Method m = c.methods.front();
  const auto times = c.grid.times();
  const std::size_t n = a.common.n.value_or(1);
  if (n == 0) throw Error(ErrorCode::ConfigInvalid, "--n must be positive");
  const std::string out = a.common.out.value_or("fracflow_out");
  const bool single = n == 1 && fs::path(out).extension() == ".csv";
  if (!single) fs::create_directories(out);

  std::function<FbmPath(std::size_t)> draw;
  std::optional<KernelPlan> plan;
  KernelGeometry geom{};
  switch (m) {
    case Method::Exact:
      draw = [&](std::size_t i) { return synth_exact(times, p, a.dim, c.seed, i); };
      break;
    case Method::Gamma: {
      const double lambda = a.parameter > 0 ? a.parameter : 1e-4;
      draw = [&, lambda](std::size_t i) { return synth_gamma(times, p, lambda, a.dim, c.seed, i); };
      break;
    }
    case Method::Kernel:
    case Method::Mollified:
    case Method::Poisson: {
      geom = calibrate_kernel_geometry(times, p);
      KernelFamily fam = kernel_family(p);
      if (m == Method::Mollified) {
        fam = mollified_family(p, {Mollifier::Shape::Triangle, a.parameter > 0 ? a.parameter : 0.01});
      } else if (m == Method::Poisson) {
        if (a.dim != 1) throw Error(ErrorCode::InvalidArgument, "poisson synthesis is one-dimensional");
        fam = poisson_family(p, a.parameter > 0 ? a.parameter : 0.01);
      }
      plan.emplace(times, p, std::move(fam), geom.radius, geom.leaf_level);
      draw = [&](std::size_t i) {
        FbmPath path = plan->path(NoiseField(c.seed, geom.radius, geom.leaf_level, a.dim, i));
        return path;
      };
      break;
    }
    case Method::PiecewiseLinear:
      throw Error(ErrorCode::InvalidArgument, "piecewise_linear is an interpolation, not a sampler");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string file = single ? out : (fs::path(out) / ("path_" + std::to_string(i) + ".csv")).string();
    write_path_csv(draw(i), file);
  }
  std::fprintf(stderr, "wrote %zu path(s) of %zu samples\n", n, times.size());
  return 0;
}

// ---- integrate
struct IntegrateArgs {
  Common common;
  std::string path_file;
  std::string kind = "stratonovich";
  std::vector<double> poly{0.0, 1.0};
  std::size_t cells = 0;
  std::string rule = "midpoint";
  std::optional<double> a, b;
};

// Chain-rule reference G(X_b) - G(X_a) with G' = F for univariate F.
double antiderivative_at(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k] / static_cast<double>(k + 1);
  return acc * x;
}

int run_integrate(const IntegrateArgs& a) {
  const ExperimentConfig c = a.common.config();
  const double h = c.hurst.front();
  FbmPath path = read_path_csv(a.path_file, h);
  const HurstParams p(h);
  const double lo = a.a.value_or(path.times.front());
  const double hi = a.b.value_or(path.times.back());
  std::size_t cells = a.cells;
  if (cells == 0) {
    cells = (path.index_of(hi) - path.index_of(lo)) / 2;
    if (cells == 0) throw Error(ErrorCode::InvalidArgument, "path too short for a midpoint partition");
  }
  const auto part = PartitionSpec::uniform(lo, hi, cells, tau_rule_from_string(a.rule));
  const int d = static_cast<int>(path.dimension());
  const Polynomial f = d == 1 ? Polynomial::univariate(a.poly) : Polynomial::identity(d);
  Eigen::MatrixXd value, correction;
  if (a.kind == "stratonovich") {
    value = stratonovich_integral(f, path, part, p).value;
  } else if (a.kind == "skorohod") {
    const auto r = skorohod_integral(f, path, part, p);
    value = r.value;
    correction = r.correction;
  } else if (a.kind == "riemann") {
    value = riemann_sum(f, path, part);
  } else if (a.kind == "young_pl") {
    value = young_pl_integral(f, path, part);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --kind '" + a.kind + "'");
  }
  nlohmann::ordered_json j;
  j["kind"] = a.kind;
  j["H"] = h;
  j["interval"] = {lo, hi};
  j["cells"] = cells;
  j["rule"] = a.rule;
  j["value"] = matrix_json(value);
  if (correction.size() > 0) j["correction"] = matrix_json(correction);
  if (d == 1 && (a.kind == "stratonovich" || a.kind == "young_pl")) {
    const double xa = path.values(0, static_cast<Eigen::Index>(path.index_of(lo)));
    const double xb = path.values(0, static_cast<Eigen::Index>(path.index_of(hi)));
    const double ref = antiderivative_at(a.poly, xb) - antiderivative_at(a.poly, xa);
    // Midpoint sums of F(X) dX deviate from the chain rule by about the
    // quadratic variation term, of size mesh^(2H) per cell.
    double tol = 0.0;
    for (std::size_t k = 1; k < a.poly.size(); ++k) {
      tol += std::abs(static_cast<double>(k) * a.poly[k]) *
             std::pow(std::max(std::abs(xa), std::abs(xb)) + 1.0, static_cast<double>(k - 1));
    }
    tol *= 3.0 * std::sqrt(static_cast<double>(cells)) * std::pow(part.mesh(), 2.0 * h) * c.tolerance_scale;
    j["chain_rule_reference"] = ref;
    j["difference"] = value(0, 0) - ref;
    j["tolerance"] = tol;
    j["within_tolerance"] = std::abs(value(0, 0) - ref) <= tol;
  }
  write_json(j, a.common.out.value_or("-"));
  return 0;
}

// ---- roughpath
struct RoughArgs {
  Common common;
  std::string path_file;
  double a = 0.0, b = 1.0;
  int level = 2;
  std::string flavor = "strat";
  bool conventional = false;
};

int run_roughpath(const RoughArgs& a) {
  const ExperimentConfig c = a.common.config();
  const double h = c.hurst.front();
  const FbmPath path = read_path_csv(a.path_file, h);
  const HurstParams p(h);
  nlohmann::ordered_json j;
  j["a"] = a.a;
  j["b"] = a.b;
  j["level"] = a.level;
  j["flavor"] = a.flavor;
  const Flavor fl = a.flavor == "skorohod" ? Flavor::Skorohod : Flavor::Strat;
  if (a.flavor != "strat" && a.flavor != "skorohod") {
    throw Error(ErrorCode::InvalidArgument, "--flavor must be strat or skorohod");
  }
  if (a.level == 2) {
    const auto t = fl == Flavor::Strat ? level2(path, a.a, a.b) : level2_skorohod(path, a.a, a.b, p);
    Eigen::MatrixXd v = t.value;
    if (a.conventional) v.transposeInPlace();
    j["value"] = matrix_json(v);
  } else if (a.level == 3) {
    const auto t = level3(path, a.a, a.b, fl);
    auto arr = nlohmann::ordered_json::array();
    for (int i = 0; i < t.d; ++i) {
      for (int k = 0; k < t.d; ++k) {
        for (int l = 0; l < t.d; ++l) {
          arr.push_back(a.conventional ? t(l, k, i) : t(i, k, l));
        }
      }
    }
    j["dimension"] = t.d;
    j["value"] = arr;
    j["norm"] = t.norm();
  } else {
    throw Error(ErrorCode::InvalidArgument, "--level must be 2 or 3");
  }
  j["index_order"] = a.conventional ? "signature" : "outer increment first";
  write_json(j, a.common.out.value_or("-"));
  return 0;
}

// ---- invert
struct InvertArgs {
  Common common;
  std::string path_file;
  double radius = 0.0;
  std::string report;
};

int run_invert(const InvertArgs& a) {
  const ExperimentConfig c = a.common.config();
  const double h = c.hurst.front();
  const FbmPath path = read_path_csv(a.path_file, h);
  const HurstParams p(h);
  const double radius = a.radius > 0 ? a.radius : std::min(-path.times.front(), path.times.back());
  const auto i0 = path.find(-radius);
  const auto i1 = path.find(radius);
  if (!i0 || !i1) throw Error(ErrorCode::DomainTooSmall, "path must have nodes at -R and R");
  const long cells = static_cast<long>(*i1 - *i0);
  const long kmax = cells / 2;
  const auto bhat = recover_bm_grid(path, p, radius, kmax);
  FbmPath out;
  out.params = p;
  out.values.resize(1, 2 * kmax + 1);
  for (long k = -kmax; k <= kmax; ++k) {
    out.times.push_back(path.times[*i0 + static_cast<std::size_t>(k + kmax)]);
    out.values(0, k + kmax) = bhat[static_cast<std::size_t>(k + kmax)];
  }
  const std::string dest = a.common.out.value_or("recovered_bm.csv");
  write_path_csv(out, dest);
  // Forward leg from the recovered increments back to X on |t| <= R/4.
  std::vector<double> db(static_cast<std::size_t>(2 * kmax));
  for (long k = 0; k < 2 * kmax; ++k) db[static_cast<std::size_t>(k)] = bhat[static_cast<std::size_t>(k + 1)] - bhat[static_cast<std::size_t>(k)];
  const long kq = kmax / 4;
  const auto xhat = grid_kernel_apply(p, db.data(), 2 * kmax, radius, -kq, kq);
  double err = 0.0, norm = 0.0;
  const auto x0 = path.values(0, static_cast<Eigen::Index>(*i0 + static_cast<std::size_t>(kmax)));
  for (long k = -kq; k <= kq; ++k) {
    const double x = path.values(0, static_cast<Eigen::Index>(*i0 + static_cast<std::size_t>(k + kmax))) - x0;
    err += std::pow(xhat[static_cast<std::size_t>(k + kq)] - x, 2);
    norm += x * x;
  }
  nlohmann::ordered_json j;
  j["H"] = h;
  j["radius"] = radius;
  j["cells"] = cells;
  j["recovered"] = dest;
  j["fbm_relative_l2_error"] = norm > 0 ? std::sqrt(err / norm) : 0.0;
  j["fbm_error_window"] = {-radius / 4, radius / 4};
  write_json(j, a.report.empty() ? "-" : a.report);
  return 0;
}

// ---- report
int run_report(const std::string& in, const std::string& out) {
  const auto s = aggregate_reports(in, out.empty() ? in : out);
  std::fprintf(stderr, "%zu report(s) from %zu file(s), %zu series, %zu failed\n", s.reports, s.files,
               s.series, s.failed);
  return 0;
}

// ---- verify
int run_verify_cmd(const Common& common, const std::vector<std::string>& checks) {
  ExperimentConfig c = common.config();
  if (!checks.empty()) c.checks = checks;
  c.validate();
  const auto outcomes = run_verify(c, [](const CheckOutcome& o) {
    std::printf("%s %2d %s%s\n", o.passed ? "PASS" : "FAIL", o.info.criterion, o.info.name.c_str(),
                o.rerun ? " (rerun at 4x N)" : "");
    std::fflush(stdout);
  });
  write_verify_reports(outcomes, c.out_dir);
  return suite_passed(outcomes) ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracflow: fractional Brownian motion by convolution kernels"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "synthesize fBm paths to CSV");
  synth.common.attach(s);
  s->add_option("--dim", synth.dim, "path dimension")->check(CLI::PositiveNumber);
  s->add_option("--param", synth.parameter, "mollifier width, Poisson y or Gamma lambda");

  IntegrateArgs integ;
  auto* i = app.add_subcommand("integrate", "stochastic integral of a polynomial along a path");
  integ.common.attach(i);
  i->add_option("--path", integ.path_file, "path CSV")->required();
  i->add_option("--kind", integ.kind, "stratonovich | skorohod | riemann | young_pl");
  i->add_option("--poly", integ.poly, "coefficients c0 c1 ... of F (one-dimensional paths)");
  i->add_option("--cells", integ.cells, "partition cells (default: every other sample)");
  i->add_option("--rule", integ.rule, "left | midpoint | right");
  i->add_option("--a", integ.a, "interval start");
  i->add_option("--b", integ.b, "interval end");

  RoughArgs rough;
  auto* r = app.add_subcommand("roughpath", "level 2 or 3 iterated integrals");
  rough.common.attach(r);
  r->add_option("--path", rough.path_file, "path CSV")->required();
  r->add_option("--a", rough.a, "interval start");
  r->add_option("--b", rough.b, "interval end");
  r->add_option("--level", rough.level, "2 or 3");
  r->add_option("--flavor", rough.flavor, "strat | skorohod");
  r->add_flag("--conventional", rough.conventional, "usual signature index order");

  InvertArgs inv;
  auto* v = app.add_subcommand("invert", "recover the driving Brownian motion");
  inv.common.attach(v);
  v->add_option("--path", inv.path_file, "fBm path CSV on a uniform grid over [-R, R]")->required();
  v->add_option("--radius", inv.radius, "truncation radius R (default: largest that fits)");
  v->add_option("--report", inv.report, "JSON error report file (default: stdout)");

  std::string report_in, report_out;
  auto* rep = app.add_subcommand("report", "aggregate JSON reports into CSV");
  rep->add_option("--in", report_in, "directory of JSON reports")->required();
  rep->add_option("--out", report_out, "output directory (default: --in)");

  Common vcommon;
  std::vector<std::string> checks;
  auto* ver = app.add_subcommand("verify", "run the acceptance checks");
  vcommon.attach(ver);
  ver->add_option("--check", checks, "run only these checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    if (*s) return run_synth(synth);
    if (*i) return run_integrate(integ);
    if (*r) return run_roughpath(rough);
    if (*v) return run_invert(inv);
    if (*rep) return run_report(report_in, report_out);
    if (*ver) return run_verify_cmd(vcommon, checks);
  } catch (const Error& e) {
    std::fprintf(stderr, "fracflow: %s\n", e.what());
    switch (e.code()) {
      case ErrorCode::ConfigInvalid:
      case ErrorCode::InvalidArgument:
      case ErrorCode::Io:
        return kExitUsage;
      default:
        return kExitFail;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fracflow: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
