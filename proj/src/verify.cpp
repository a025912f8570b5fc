#include "fracflow/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fracflow/error.hpp"
#include "fracflow/exact_sampler.hpp"
#include "fracflow/gamma_kernel.hpp"
#include "fracflow/holder.hpp"
#include "fracflow/integrals.hpp"
#include "fracflow/inversion.hpp"
#include "fracflow/kernel_synthesis.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/noise_field.hpp"
#include "fracflow/parallel.hpp"
#include "fracflow/polynomial.hpp"
#include "fracflow/quadrature.hpp"
#include "fracflow/rng.hpp"
#include "fracflow/rough_path.hpp"
#include "fracflow/synthesis.hpp"

namespace fracflow {

namespace {

struct Ctx {
  const ExperimentConfig& cfg;
  std::size_t scale;  // 1, or 4 on the rerun

  std::size_t big() const { return cfg.mc_n * scale; }
  std::size_t small() const { return cfg.mc_small() * scale; }
  double band() const { return cfg.se_band; }
  double tol(double base) const { return base * cfg.tolerance_scale; }
  std::uint64_t seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return splitmix64(splitmix64(splitmix64(cfg.seed ^ (a << 40)) ^ b) ^ (c << 20));
  }
};

std::string fmt(double v) { return format_double(v); }

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

void series(StatReport& r, const std::vector<double>& x, const std::vector<double>& y) {
  r.metadata["series_x"] = join(x);
  r.metadata["series_y"] = join(y);
}

std::vector<double> uniform_times(double a, double b, std::size_t cells) {
  std::vector<double> t(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  t.back() = b;
  return t;
}

FbmPath make_path(const std::vector<double>& times, const HurstParams& p, Eigen::MatrixXd values) {
  FbmPath path;
  path.times = times;
  path.values = std::move(values);
  path.params = p;
  return path;
}

std::string hlabel(double h) { return "H=" + fmt(h); }

// Draws n exact paths on a uniform grid and applies f(path_index, path).
void exact_paths(const std::vector<double>& times, const HurstParams& p, int d, std::uint64_t seed,
                 std::size_t n, const std::function<void(std::size_t, const FbmPath&)>& f) {
  const CirculantSampler sampler(times, fbm_variogram(p));
  parallel_for(n, [&](std::size_t i) { f(i, make_path(times, p, sampler.sample(seed, i, d))); });
}

// 1. Quadrature of int S_t S_s against the closed covariance.
std::vector<StatReport> check_covariance_closed_form(const Ctx& c) {
  std::vector<StatReport> out;
  for (double h : {0.3, 0.5, 0.7}) {
    const HurstParams p(h);
    for (double t : {0.5, 1.0, 2.0}) {
      for (double s : {-1.0, 0.75, 2.0}) {
        const auto q = quad::st_inner_product(t, s, p);
        const double closed = covariance_closed(t, s, p);
        // Relative to sqrt(C(t,t) C(s,s)) so that zero covariances are covered.
        const double scale = std::sqrt(covariance_closed(t, t, p) * covariance_closed(s, s, p));
        auto r = tolerance_check(hlabel(h) + " t=" + fmt(t) + " s=" + fmt(s), q.value, closed,
                                 c.tol(1e-3) * scale);
        r.metadata["truncation_radius"] = fmt(q.radius);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

// Second-moment checks of two increments: Var I1, Var I2 against targets, E[I1 I2] against 0.
void increment_moments(const Ctx& c, const std::string& label, const std::vector<double>& i1,
                       const std::vector<double>& i2, double v1, double v2,
                       std::vector<StatReport>& out) {
  const std::size_t n = i1.size();
  std::vector<double> a(n), b(n), ab(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = i1[k] * i1[k];
    b[k] = i2[k] * i2[k];
    ab[k] = i1[k] * i2[k];
  }
  const auto ma = mean_se(a), mb = mean_se(b), mab = mean_se(ab);
  out.push_back(band_check(label + " var(X1-X0)", ma.mean, v1, ma.se, n, c.band()));
  out.push_back(band_check(label + " var(X2-X1)", mb.mean, v2, mb.se, n, c.band()));
  out.push_back(band_check(label + " E[(X1-X0)(X2-X1)]", mab.mean, 0.0, mab.se, n, c.band()));
}

// 2. H = 1/2 gives Brownian motion.
std::vector<StatReport> check_brownian_reduction(const Ctx& c) {
  std::vector<StatReport> out;
  const HurstParams p(0.5);
  const std::vector<std::pair<double, double>> pairs{
      {0.5, 2.0}, {1.0, 1.0}, {2.0, 0.7}, {-1.0, -0.3}, {-2.0, -2.0}, {3.0, 0.25}};
  for (auto [t, s] : pairs) {
    const double m = std::min(std::abs(t), std::abs(s));
    out.push_back(tolerance_check("closed form t=" + fmt(t) + " s=" + fmt(s),
                                  covariance_closed(t, s, p), m, c.tol(1e-12) * std::max(1.0, m)));
  }
  const std::vector<double> times{0.0, 1.0, 2.0};
  const std::size_t n = c.big();
  std::vector<double> i1(n), i2(n);
  const auto geom = calibrate_kernel_geometry(times, p);
  const KernelPlan plan(times, p, kernel_family(p), geom.radius, geom.leaf_level);
  const auto seed = c.seed(2, 1);
  parallel_for(n, [&](std::size_t k) {
    const NoiseField noise(seed, geom.radius, geom.leaf_level, 1, k);
    const Eigen::MatrixXd x = plan.evaluate(noise);
    i1[k] = x(0, 1) - x(0, 0);
    i2[k] = x(0, 2) - x(0, 1);
  });
  increment_moments(c, "kernel", i1, i2, 1.0, 1.0, out);
  const IncrementSampler exact(times, fbm_variogram(p));
  const auto seed2 = c.seed(2, 2);
  parallel_for(n, [&](std::size_t k) {
    const Eigen::MatrixXd x = exact.sample(seed2, k, 1);
    i1[k] = x(0, 1) - x(0, 0);
    i2[k] = x(0, 2) - x(0, 1);
  });
  increment_moments(c, "exact", i1, i2, 1.0, 1.0, out);
  return out;
}

// Sampler of one 1-d path on fixed times for the covariance check.
using Draw = std::function<Eigen::MatrixXd(std::size_t)>;

Draw method_draw(Method m, const std::vector<double>& times, const HurstParams& p,
                 std::uint64_t seed) {
  const auto plan_draw = [&](KernelFamily family) -> Draw {
    const auto geom = calibrate_kernel_geometry(times, p);
    auto plan = std::make_shared<KernelPlan>(times, p, std::move(family), geom.radius, geom.leaf_level);
    return [plan, geom, seed](std::size_t k) {
      return plan->evaluate(NoiseField(seed, geom.radius, geom.leaf_level, 1, k));
    };
  };
  switch (m) {
    case Method::Exact: {
      auto s = std::make_shared<IncrementSampler>(times, fbm_variogram(p));
      return [s, seed](std::size_t k) { return s->sample(seed, k, 1); };
    }
    case Method::Kernel: return plan_draw(kernel_family(p));
    case Method::Mollified:
      return plan_draw(mollified_family(p, {Mollifier::Shape::Triangle, 1e-5}));
    case Method::Poisson: return plan_draw(poisson_family(p, 1e-5));
    case Method::Gamma: {
      auto s = std::make_shared<IncrementSampler>(gamma_sampler(times, GammaKernel(p, 1e-14)));
      return [s, seed](std::size_t k) { return s->sample(seed, k, 1); };
    }
    case Method::PiecewiseLinear: break;
  }
  return {};
}

// 3. Entrywise Monte Carlo covariance for every method and H.
std::vector<StatReport> check_mc_covariance(const Ctx& c) {
  std::vector<StatReport> out;
  const std::vector<double> times = c.cfg.grid.times();
  const auto nt = static_cast<Eigen::Index>(times.size());
  const std::size_t n = c.big();
  for (std::size_t mi = 0; mi < c.cfg.methods.size(); ++mi) {
    const Method m = c.cfg.methods[mi];
    for (std::size_t hi = 0; hi < c.cfg.hurst.size(); ++hi) {
      const HurstParams p(c.cfg.hurst[hi]);
      const std::string label = to_string(m) + " " + hlabel(p.hurst());
      if (m == Method::PiecewiseLinear) {
        auto r = report_only(label, 0.0);
        r.metadata["note"] = "interpolation, not a sampler; covered by pl_interpolation";
        out.push_back(std::move(r));
        continue;
      }
      const Draw draw = method_draw(m, times, p, c.seed(3, mi, hi));
      Eigen::MatrixXd xs(static_cast<Eigen::Index>(n), nt);
      parallel_for(n, [&](std::size_t k) { xs.row(static_cast<Eigen::Index>(k)) = draw(k).row(0); });
      double worst_z = -1.0;
      StatReport worst;
      std::vector<double> prod(n);
      for (Eigen::Index i = 0; i < nt; ++i) {
        for (Eigen::Index j = i; j < nt; ++j) {
          for (std::size_t k = 0; k < n; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            prod[k] = xs(kk, i) * xs(kk, j);
          }
          const auto ms = mean_se(prod);
          const double target = covariance_closed(times[static_cast<std::size_t>(i)],
                                                  times[static_cast<std::size_t>(j)], p);
          const double z = ms.se > 0 ? std::abs(ms.mean - target) / ms.se : 0.0;
          if (z > worst_z) {
            worst_z = z;
            worst = band_check(label, ms.mean, target, ms.se, n, c.band());
            worst.metadata["entry"] = "(" + fmt(times[static_cast<std::size_t>(i)]) + ", " +
                                      fmt(times[static_cast<std::size_t>(j)]) + ")";
          }
        }
      }
      worst.metadata["entries"] = std::to_string(nt * (nt + 1) / 2);
      worst.metadata["reported"] = "entry with the largest |z|";
      out.push_back(std::move(worst));
    }
  }
  return out;
}

// 4. Dyadic Cauchy decay of midpoint sums with phi = path.
std::vector<StatReport> check_riemann_convergence(const Ctx& c) {
  const HurstParams p(0.6);
  const std::vector<std::size_t> cells{16, 32, 64, 128, 256};
  const auto times = uniform_times(0.0, 1.0, 2 * cells.back());
  const std::size_t n = c.small();
  std::vector<std::vector<double>> sums(n, std::vector<double>(cells.size()));
  exact_paths(times, p, 1, c.seed(4), n, [&](std::size_t k, const FbmPath& path) {
    const HolderFunction phi(times, path.values.transpose(), 0.5);
    for (std::size_t l = 0; l < cells.size(); ++l) {
      sums[k][l] = riemann_sum(phi, path, PartitionSpec::uniform(0.0, 1.0, cells[l], TauRule::Midpoint))(0, 0);
    }
  });
  std::vector<double> ms(cells.size() - 1, 0.0);
  for (const auto& s : sums) {
    for (std::size_t l = 0; l + 1 < cells.size(); ++l) ms[l] += (s[l + 1] - s[l]) * (s[l + 1] - s[l]);
  }
  for (double& v : ms) v /= static_cast<double>(n);
  std::vector<StatReport> out;
  std::vector<double> xs;
  for (std::size_t l = 0; l + 1 < cells.size(); ++l) xs.push_back(static_cast<double>(cells[l]));
  for (std::size_t l = 0; l + 1 < ms.size(); ++l) {
    auto r = threshold_check("E[(S_2n - S_n)^2] ratio n=" + std::to_string(cells[l]) + "->" +
                                 std::to_string(cells[l + 1]),
                             ms[l] / ms[l + 1], 2.0, true, n);
    series(r, xs, ms);
    out.push_back(std::move(r));
  }
  return out;
}

// 5. Rate of the kernel-space discrepancy of Riemann sums.
std::vector<StatReport> check_discrepancy_rate(const Ctx& c) {
  std::vector<StatReport> out;
  for (auto [h, hp] : std::vector<std::pair<double, double>>{{0.6, 0.4}, {0.4, 0.3}}) {
    const HurstParams p(h);
    const auto phi = lacunary_series(hp, 14, 14);
    std::vector<double> lx, ly, deltas, norms;
    for (int e = 3; e <= 9; ++e) {
      const double n2 = riemann_l2_discrepancy(phi, 0.0, 1.0, std::size_t{1} << e, p);
      deltas.push_back(std::ldexp(1.0, -e));
      norms.push_back(n2);
      lx.push_back(std::log(deltas.back()));
      ly.push_back(std::log(n2));
    }
    const auto fit = fit_line(lx, ly);
    const double rate = std::min(hp, h + hp - 0.5);
    auto r = threshold_check(hlabel(h) + " H'=" + fmt(hp) + " slope", fit.slope,
                             rate - c.tol(0.1), true);
    r.metadata["predicted_rate"] = fmt(rate);
    r.metadata["slope_se"] = fmt(fit.slope_se);
    series(r, deltas, norms);
    out.push_back(std::move(r));
  }
  (void)c;
  return out;
}

// 6. Midpoint sums of int X dX against (X_b^2 - X_a^2)/2.
std::vector<StatReport> check_stratonovich_self_integral(const Ctx& c) {
  const HurstParams p(0.4);
  const std::size_t cells = 4096;
  const auto times = uniform_times(0.0, 2.0, 4 * cells);
  const std::size_t n = c.small();
  const Polynomial id = Polynomial::identity(1);
  struct Acc {
    double err2, tgt2;
  };
  std::vector<std::array<Acc, 2>> acc(n);
  exact_paths(times, p, 1, c.seed(6), n, [&](std::size_t k, const FbmPath& path) {
    int slot = 0;
    for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{0.0, 1.0}}) {
      const auto part = PartitionSpec::uniform(a, b, cells, TauRule::Midpoint);
      const double v = stratonovich_integral(id, path, part, p).value(0, 0);
      const double xa = path.values(0, static_cast<Eigen::Index>(path.index_of(a)));
      const double xb = path.values(0, static_cast<Eigen::Index>(path.index_of(b)));
      const double target = 0.5 * (xb * xb - xa * xa);
      acc[k][static_cast<std::size_t>(slot++)] = {(v - target) * (v - target), target * target};
    }
  });
  std::vector<StatReport> out;
  for (int slot = 0; slot < 2; ++slot) {
    double e = 0.0, t = 0.0;
    for (const auto& a : acc) {
      e += a[static_cast<std::size_t>(slot)].err2;
      t += a[static_cast<std::size_t>(slot)].tgt2;
    }
    const double rel = std::sqrt(e / t);
    if (slot == 0) {
      out.push_back(threshold_check("relative L2 error on [1, 2]", rel, c.tol(0.05), false, n));
    } else {
      auto r = report_only("relative L2 error on [0, 1]", rel, 0.05, n);
      r.metadata["note"] = "X_0 = 0 makes the target small relative to the error";
      out.push_back(std::move(r));
    }
  }
  return out;
}

// 7. H = 1/2 Skorohod integral of x is the Ito integral X_1^2/2 - 1/2.
std::vector<StatReport> check_ito_consistency(const Ctx& c) {
  const HurstParams p(0.5);
  const std::size_t cells = c.cfg.partition_cells;
  const auto times = uniform_times(0.0, 1.0, 2 * cells);
  const auto part = PartitionSpec::uniform(0.0, 1.0, cells, TauRule::Midpoint);
  const std::size_t n = c.small();
  std::vector<double> err2(n);
  const Polynomial id = Polynomial::identity(1);
  exact_paths(times, p, 1, c.seed(7), n, [&](std::size_t k, const FbmPath& path) {
    const double v = skorohod_integral(id, path, part, p).value(0, 0);
    const double x1 = path.values(0, path.values.cols() - 1);
    const double ito = 0.5 * x1 * x1 - 0.5;
    err2[k] = (v - ito) * (v - ito);
  });
  double s = 0.0;
  for (double e : err2) s += e;
  auto r = threshold_check("L2 distance to X_1^2/2 - 1/2", std::sqrt(s / static_cast<double>(n)),
                           c.tol(0.05), false, n);
  r.metadata["cells"] = std::to_string(cells);
  return {r};
}

// 8. The Skorohod integral of x^2 has mean zero.
std::vector<StatReport> check_skorohod_zero_mean(const Ctx& c) {
  std::vector<StatReport> out;
  const std::size_t cells = 256;
  const auto times = uniform_times(0.0, 1.0, 2 * cells);
  const auto part = PartitionSpec::uniform(0.0, 1.0, cells, TauRule::Midpoint);
  const Polynomial sq = Polynomial::univariate({0.0, 0.0, 1.0});
  const std::size_t n = c.big();
  for (double h : {0.4, 0.6}) {
    const HurstParams p(h);
    std::vector<double> v(n);
    exact_paths(times, p, 1, c.seed(8, static_cast<std::uint64_t>(h * 10)), n,
                [&](std::size_t k, const FbmPath& path) {
                  v[k] = skorohod_integral(sq, path, part, p).value(0, 0);
                });
    const auto ms = mean_se(v);
    out.push_back(band_check(hlabel(h) + " E[int X^2 dX]", ms.mean, 0.0, ms.se, n, c.band()));
  }
  return out;
}

// 9. Chen's relation for level 2.
std::vector<StatReport> check_chen_identity(const Ctx& c) {
  std::vector<StatReport> out;
  const std::size_t cells = 256;
  const auto times = uniform_times(0.0, 1.0, cells);
  const std::size_t paths = 100, triples = 20;
  for (double h : {0.3, 0.7}) {
    const HurstParams p(h);
    const auto seed = c.seed(9, static_cast<std::uint64_t>(h * 10));
    std::vector<std::array<double, 2>> worst(paths, {0.0, 0.0});
    exact_paths(times, p, 2, seed, paths, [&](std::size_t k, const FbmPath& path) {
      const NormalStream u(seed, k, 99);
      for (std::size_t q = 0; q < triples; ++q) {
        std::array<std::size_t, 3> idx;
        for (std::size_t j = 0; j < 3; ++j) {
          idx[j] = static_cast<std::size_t>(u.uniform(3 * q + j, 4) * static_cast<double>(cells + 1));
          idx[j] = std::min(idx[j], cells);
        }
        std::sort(idx.begin(), idx.end());
        const double a = times[idx[0]], cc = times[idx[1]], b = times[idx[2]];
        const Eigen::VectorXd xa = path.values.col(static_cast<Eigen::Index>(idx[0]));
        const Eigen::VectorXd xc = path.values.col(static_cast<Eigen::Index>(idx[1]));
        const Eigen::VectorXd xb = path.values.col(static_cast<Eigen::Index>(idx[2]));
        const double scale = std::max({level2(path, a, b).value.cwiseAbs().maxCoeff(),
                                       (xb - xa).squaredNorm(), (xc - xa).norm() * (xb - xc).norm(),
                                       1e-300});
        for (int conv = 0; conv < 2; ++conv) {
          const double res = chen_check(path, a, cc, b, conv == 1).cwiseAbs().maxCoeff() / scale;
          worst[k][static_cast<std::size_t>(conv)] = std::max(worst[k][static_cast<std::size_t>(conv)], res);
        }
      }
    });
    for (int conv = 0; conv < 2; ++conv) {
      double w = 0.0;
      for (const auto& x : worst) w = std::max(w, x[static_cast<std::size_t>(conv)]);
      auto r = threshold_check(hlabel(h) + (conv ? " conventional order" : " stated order") +
                                   " max relative residual",
                               w, c.tol(1e-10), false, paths * triples);
      out.push_back(std::move(r));
    }
  }
  return out;
}

// 10. Scaling of E|level 2|^2 and E|level 3|^2 with the interval length.
std::vector<StatReport> check_scaling_norms(const Ctx& c) {
  std::vector<StatReport> out;
  const std::size_t cells = 1024;
  const auto times = uniform_times(0.0, 1.0, cells);
  const std::size_t n = c.small();
  const int levels = 7;
  for (double h : {0.35, 0.5, 0.75}) {
    const HurstParams p(h);
    std::vector<std::vector<double>> l2(n, std::vector<double>(levels)), l3 = l2;
    exact_paths(times, p, 2, c.seed(10, static_cast<std::uint64_t>(h * 100)), n,
                [&](std::size_t k, const FbmPath& path) {
                  for (int e = 0; e < levels; ++e) {
                    const double b = std::ldexp(1.0, -e);
                    l2[k][static_cast<std::size_t>(e)] = level2(path, 0.0, b).value.squaredNorm();
                    const double n3 = level3(path, 0.0, b).norm();
                    l3[k][static_cast<std::size_t>(e)] = n3 * n3;
                  }
                });
    std::vector<double> lens, m2(levels, 0.0), m3(levels, 0.0), lx, y2, y3;
    for (int e = 0; e < levels; ++e) {
      for (std::size_t k = 0; k < n; ++k) {
        m2[static_cast<std::size_t>(e)] += l2[k][static_cast<std::size_t>(e)];
        m3[static_cast<std::size_t>(e)] += l3[k][static_cast<std::size_t>(e)];
      }
      m2[static_cast<std::size_t>(e)] /= static_cast<double>(n);
      m3[static_cast<std::size_t>(e)] /= static_cast<double>(n);
      lens.push_back(std::ldexp(1.0, -e));
      lx.push_back(std::log(lens.back()));
      y2.push_back(std::log(m2[static_cast<std::size_t>(e)]));
      y3.push_back(std::log(m3[static_cast<std::size_t>(e)]));
    }
    const auto f2 = fit_line(lx, y2), f3 = fit_line(lx, y3);
    auto r2 = tolerance_check(hlabel(h) + " level 2 slope", f2.slope, 4.0 * h, c.tol(0.5), n);
    series(r2, lens, m2);
    auto r3 = tolerance_check(hlabel(h) + " level 3 slope", f3.slope, 6.0 * h, c.tol(0.5), n);
    series(r3, lens, m3);
    out.push_back(std::move(r2));
    out.push_back(std::move(r3));
  }
  return out;
}

StatReport decreasing(const std::string& name, const std::vector<double>& params,
                      const std::vector<double>& dist) {
  double worst = 0.0;
  for (std::size_t i = 1; i < dist.size(); ++i) worst = std::max(worst, dist[i] / dist[i - 1]);
  // Strict decrease: every ratio below one.
  auto r = threshold_check(name + " max successive ratio", worst,
                           std::nextafter(1.0, 0.0), false);
  series(r, params, dist);
  return r;
}

// 11. Approximation families approach the kernel path.
std::vector<StatReport> check_approximation_families(const Ctx& c) {
  std::vector<StatReport> out;
  const auto times = c.cfg.grid.times();
  for (double h : {0.3, 0.7}) {
    const HurstParams p(h);
    const auto geom = calibrate_kernel_geometry(times, p);
    const KernelPlan base(times, p, kernel_family(p), geom.radius, geom.leaf_level);
    double var = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) var += base.discrete_variance(i);
    auto coupled = [&](KernelFamily fam) {
      const KernelPlan other(times, p, std::move(fam), geom.radius, geom.leaf_level);
      double d = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) d += base.coupled_distance(other, i);
      return std::sqrt(d / var);
    };
    std::vector<double> widths{0.4, 0.2, 0.1}, ys{2.0, 1.0, 0.5}, lambdas{1.0, 0.1, 0.01};
    std::vector<double> dm, dp, dg;
    for (double w : widths) dm.push_back(coupled(mollified_family(p, {Mollifier::Shape::Triangle, w})));
    for (double y : ys) dp.push_back(coupled(poisson_family(p, y)));
    double scale = 0.0;
    for (double t : times) scale = std::max(scale, covariance_closed(t, t, p));
    for (double l : lambdas) {
      const GammaKernel g(p, l);
      double worst = 0.0;
      for (double t : times) {
        for (double s : times) {
          const double cov = g.variogram(t) + g.variogram(s) - g.variogram(t - s);
          worst = std::max(worst, std::abs(cov - covariance_closed(t, s, p)));
        }
      }
      dg.push_back(worst / scale);
    }
    out.push_back(decreasing(hlabel(h) + " mollifier coupled L2", widths, dm));
    out.push_back(decreasing(hlabel(h) + " Poisson coupled L2", ys, dp));
    out.push_back(decreasing(hlabel(h) + " Gamma covariance distance", lambdas, dg));
  }
  return out;
}

// 12. Convolution identity and Brownian recovery.
std::vector<StatReport> check_inversion_identity(const Ctx& c) {
  std::vector<StatReport> out;
  for (double h : {0.3, 0.7}) {
    const HurstParams p(h);
    std::vector<double> steps, errs;
    for (int e = 10; e <= 12; ++e) {
      steps.push_back(std::ldexp(1.0, -e));
      errs.push_back(convolution_identity_check(1.0, p, steps.back(), 8.0).max_error);
    }
    auto r = threshold_check(hlabel(h) + " identity error at h=2^-10", errs[0], c.tol(0.05), false);
    series(r, steps, errs);
    out.push_back(std::move(r));
    out.push_back(decreasing(hlabel(h) + " identity error under halving", steps, errs));
    const std::size_t draws = c.small();
    const auto rt = round_trip_fbm(c.seed(12, static_cast<std::uint64_t>(h * 10)), p, 16.0,
                                   1.0 / 64.0, {1.0}, draws);
    out.push_back(threshold_check(hlabel(h) + " recovered B_1 correlation", rt.bm_correlation[0],
                                  0.95, true, draws));
    out.push_back(report_only(hlabel(h) + " B relative L2 error", rt.bm_rel_error[0], 0.0, draws));
    out.push_back(report_only(hlabel(h) + " X relative L2 error", rt.fbm_rel_error[0], 0.0, draws));
  }
  return out;
}

// 13. Piecewise-linear interpolation against the Skorohod and Stratonovich integrals.
std::vector<StatReport> check_pl_interpolation(const Ctx& c) {
  std::vector<StatReport> out;
  const HurstParams p(0.6);
  const std::size_t fine = 1024;
  const std::vector<std::size_t> coarse{16, 64, 256};
  const auto times = uniform_times(0.0, 1.0, 2 * fine);
  const auto fine_part = PartitionSpec::uniform(0.0, 1.0, fine, TauRule::Midpoint);
  const std::size_t n = c.small();
  struct Case {
    std::string label;
    int d;
    Polynomial f;
  };
  const std::vector<Case> cases{
      {"F=x^2", 1, Polynomial::univariate({0.0, 0.0, 1.0})},
      {"F=x1 x2", 2, Polynomial(2, {{Polynomial::Term{1.0, {1, 1}}}})},
  };
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& cs = cases[ci];
    // per path, per coarse level, per entry: skorohod and stratonovich differences
    const auto entries = static_cast<std::size_t>(cs.d);
    std::vector<std::vector<double>> dsk(n, std::vector<double>(coarse.size() * entries));
    auto dst = dsk;
    exact_paths(times, p, cs.d, c.seed(13, ci), n, [&](std::size_t k, const FbmPath& path) {
      const Eigen::MatrixXd sko = skorohod_integral(cs.f, path, fine_part, p).value;
      const Eigen::MatrixXd str = stratonovich_integral(cs.f, path, fine_part, p).value;
      for (std::size_t l = 0; l < coarse.size(); ++l) {
        const auto part = PartitionSpec::uniform(0.0, 1.0, coarse[l], TauRule::Midpoint);
        const Eigen::MatrixXd y = young_pl_integral(cs.f, path, part);
        const Eigen::MatrixXd corr = correction_discrete(cs.f, path, part, p);
        for (std::size_t e = 0; e < entries; ++e) {
          const auto j = static_cast<Eigen::Index>(e);
          dsk[k][l * entries + e] = y(0, j) - corr(0, j) - sko(0, j);
          dst[k][l * entries + e] = y(0, j) - str(0, j);
        }
      }
    });
    for (int kind = 0; kind < 2; ++kind) {
      const auto& diff = kind == 0 ? dsk : dst;
      const std::string what = kind == 0 ? "young_pl - correction vs skorohod"
                                         : "young_pl vs stratonovich";
      std::vector<double> rms(coarse.size(), 0.0), meshes;
      for (std::size_t l = 0; l < coarse.size(); ++l) {
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t e = 0; e < entries; ++e) rms[l] += diff[k][l * entries + e] * diff[k][l * entries + e];
        }
        rms[l] = std::sqrt(rms[l] / static_cast<double>(n * entries));
        meshes.push_back(1.0 / static_cast<double>(coarse[l]));
      }
      auto trend = decreasing(cs.label + " " + what + " L2", meshes, rms);
      if (cs.d == 1 && kind == 1) {
        // One-dimensional gradients: the interpolant integral telescopes to
        // the exact value, so the distance is the fine reference's own error.
        trend.verdict = Verdict::ReportOnly;
        trend.metadata["note"] = "young_pl is exact for d = 1; distance is constant in n";
      }
      out.push_back(std::move(trend));
      const std::size_t last = coarse.size() - 1;
      for (std::size_t e = 0; e < entries; ++e) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = diff[k][last * entries + e];
        const auto ms = mean_se(v);
        out.push_back(band_check(cs.label + " " + what + " mean, entry " + std::to_string(e) +
                                     ", n=" + std::to_string(coarse[last]),
                                 ms.mean, 0.0, ms.se, n, c.band()));
      }
    }
  }
  return out;
}

using CheckFn = std::vector<StatReport> (*)(const Ctx&);

struct Entry {
  CheckInfo info;
  CheckFn fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {{1, "covariance_closed_form", "quadrature of the kernel inner product matches the closed covariance", 30.0, false},
       check_covariance_closed_form},
      {{2, "brownian_reduction", "H = 1/2 reduces to Brownian motion", 60.0, true},
       check_brownian_reduction},
      {{3, "mc_covariance", "Monte Carlo covariance of every synthesis method", 180.0, true},
       check_mc_covariance},
      {{4, "riemann_convergence", "Cauchy decay of midpoint sums", 0.0, true},
       check_riemann_convergence},
      {{5, "discrepancy_rate", "rate of the Riemann-sum discrepancy", 0.0, false}, check_discrepancy_rate},
      {{6, "stratonovich_self_integral", "midpoint sums of X dX", 0.0, true},
       check_stratonovich_self_integral},
      {{7, "ito_consistency", "H = 1/2 Skorohod integral is the Ito integral", 0.0, true},
       check_ito_consistency},
      {{8, "skorohod_zero_mean", "Skorohod integrals are centred", 0.0, true},
       check_skorohod_zero_mean},
      {{9, "chen_identity", "Chen relation for level 2", 0.0, false}, check_chen_identity},
      {{10, "scaling_norms", "scaling of level 2 and level 3 norms", 0.0, true},
       check_scaling_norms},
      {{11, "approximation_families", "regularized families converge", 0.0, false},
       check_approximation_families},
      {{12, "inversion_identity", "convolution identity and Brownian recovery", 0.0, true},
       check_inversion_identity},
      {{13, "pl_interpolation", "integrals along piecewise-linear interpolants", 0.0, true},
       check_pl_interpolation},
  };
  return r;
}

bool any_failed(const std::vector<StatReport>& rs) {
  for (const auto& r : rs) {
    if (r.failed()) return true;
  }
  return false;
}

}  // namespace

std::vector<double> lacunary_series(double hprime, int terms, int level) {
  const std::size_t m = std::size_t{1} << level;
  std::vector<double> phi(m + 1, 0.0);
  for (std::size_t i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(m);
    for (int k = 0; k < terms; ++k) {
      phi[i] += std::pow(2.0, -k * hprime) *
                std::sin(2.0 * std::numbers::pi * std::ldexp(1.0, k) * s + k);
    }
  }
  return phi;
}

const std::vector<CheckInfo>& verify_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

std::vector<CheckOutcome> run_verify(const ExperimentConfig& config,
                                     const std::function<void(const CheckOutcome&)>& on_done) {
  config.validate();
  for (const auto& name : config.checks) {
    bool known = false;
    for (const auto& e : registry()) known = known || e.info.name == name;
    if (!known) throw Error(ErrorCode::ConfigInvalid, "unknown check '" + name + "'");
  }
  std::vector<CheckOutcome> outcomes;
  for (const auto& e : registry()) {
    if (!config.checks.empty() &&
        std::find(config.checks.begin(), config.checks.end(), e.info.name) == config.checks.end()) {
      continue;
    }
    CheckOutcome o;
    o.info = e.info;
    const auto start = std::chrono::steady_clock::now();
    try {
      o.reports = e.fn(Ctx{config, 1});
      if (e.info.statistical && any_failed(o.reports)) {
        o.rerun = true;
        o.reports = e.fn(Ctx{config, 4});
        for (auto& r : o.reports) r.metadata["rerun"] = "4x N";
      }
    } catch (const std::exception& ex) {
      o.error = ex.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.passed = o.error.empty() && !any_failed(o.reports) &&
               (e.info.time_limit <= 0.0 || o.seconds <= e.info.time_limit);
    if (on_done) on_done(o);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

bool suite_passed(const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (!o.passed) return false;
  }
  return true;
}

nlohmann::ordered_json to_json(const CheckOutcome& o) {
  nlohmann::ordered_json j;
  j["criterion"] = o.info.criterion;
  j["check"] = o.info.name;
  j["title"] = o.info.title;
  j["passed"] = o.passed;
  j["rerun"] = o.rerun;
  if (!o.error.empty()) j["error"] = o.error;
  auto reports = nlohmann::ordered_json::array();
  for (const auto& r : o.reports) reports.push_back(to_json(r));
  j["reports"] = reports;
  return j;
}

void write_verify_reports(const std::vector<CheckOutcome>& outcomes, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
  auto write = [](const std::filesystem::path& file, const nlohmann::ordered_json& j) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
    out << j.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::Io, "write failed: " + file.string());
  };
  auto summary = nlohmann::ordered_json::array();
  for (const auto& o : outcomes) {
    write(std::filesystem::path(out_dir) / (o.info.name + ".json"), to_json(o));
    nlohmann::ordered_json s;
    s["criterion"] = o.info.criterion;
    s["check"] = o.info.name;
    s["passed"] = o.passed;
    s["rerun"] = o.rerun;
    summary.push_back(s);
  }
  nlohmann::ordered_json top;
  top["passed"] = suite_passed(outcomes);
  top["checks"] = summary;
  write(std::filesystem::path(out_dir) / "verify.json", top);
}

}  // namespace fracflow
