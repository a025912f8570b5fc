#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "fracflow/error.hpp"
#include "fracflow/gamma_kernel.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/synthesis.hpp"

using namespace fracflow;

namespace {

struct Moments {
  Eigen::MatrixXd cov;
  Eigen::MatrixXd se;
};

// Sample covariance of the columns of draws (n x k) with zero mean known,
// and the standard error of each entry.
Moments moments(const Eigen::MatrixXd& draws) {
  const double n = static_cast<double>(draws.rows());
  const auto k = draws.cols();
  Moments m{Eigen::MatrixXd(k, k), Eigen::MatrixXd(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::ArrayXd prod = draws.col(i).array() * draws.col(j).array();
      const double mean = prod.mean();
      m.cov(i, j) = mean;
      m.se(i, j) = std::sqrt((prod - mean).square().sum() / (n - 1) / n);
    }
  }
  return m;
}

void check_covariance(const Eigen::MatrixXd& draws, const std::vector<double>& times,
                      const std::function<double(double, double)>& target) {
  const Moments m = moments(draws);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      CAPTURE(times[i]);
      CAPTURE(times[j]);
      CHECK(std::abs(m.cov(a, b) - target(times[i], times[j])) <= 4.0 * m.se(a, b) + 1e-12);
    }
  }
}

// Gauss-Legendre on panels refined geometrically toward both ends of each
// interval between breakpoints, for integrands with weak singularities there.
template <class F>
double graded(F f, std::vector<double> br) {
  using boost::math::quadrature::gauss;
  std::sort(br.begin(), br.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double lo = br[i], hi = br[i + 1], d = 0.5 * (hi - lo);
    if (d <= 0.0) continue;
    for (int k = 0; k < 50; ++k) {
      const double a = std::ldexp(d, -k - 1), b = std::ldexp(d, -k);
      s += gauss<double, 20>::integrate(f, lo + a, lo + b) + gauss<double, 20>::integrate(f, hi - b, hi - a);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("calibrated kernel plan reproduces the variance") {
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0};
  for (double h : {0.3, 0.5, 0.7}) {
    const HurstParams p(h);
    const auto g = calibrate_kernel_geometry(times, p);
    CHECK(g.radius == 100.0);
    const KernelPlan plan(times, p, kernel_family(p), g.radius, g.leaf_level);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(plan.discrete_variance(i) ==
            doctest::Approx(covariance_closed(times[i], times[i], p)).epsilon(5e-3));
    }
  }
}

TEST_CASE("kernel synthesis covariance by Monte Carlo") {
  const std::vector<double> times{-0.5, 0.5, 1.0};
  const HurstParams p(0.3);
  const auto g = calibrate_kernel_geometry(times, p);
  const KernelPlan plan(times, p, kernel_family(p), g.radius, g.leaf_level);
  const int n = 3000;
  Eigen::MatrixXd draws(n, 3);
  for (int k = 0; k < n; ++k) {
    const NoiseField noise(17, g.radius, g.leaf_level, 1, static_cast<std::uint64_t>(k));
    draws.row(k) = plan.evaluate(noise).row(0);
  }
  check_covariance(draws, times, [&](double t, double s) { return covariance_closed(t, s, p); });
}

TEST_CASE("kernel plan errors") {
  const HurstParams p(0.4);
  CHECK_THROWS_AS(KernelPlan({3.0}, p, kernel_family(p), 4.0, 6), Error);
  const KernelPlan plan({1.0}, p, kernel_family(p), 4.0, 6);
  const NoiseField wrong_radius(1, 8.0, 6, 1);
  const NoiseField too_coarse(1, 4.0, 5, 1);
  CHECK_THROWS_AS(plan.evaluate(wrong_radius), Error);
  CHECK_THROWS_AS(plan.evaluate(too_coarse), Error);
  const KernelPlan other({1.0}, p, kernel_family(p), 8.0, 6);
  CHECK_THROWS_AS(plan.coupled_distance(other, 0), Error);
}

TEST_CASE("grid synthesis equals the direct cell sum") {
  NoiseField noise(8, 2.0, 6, 1);
  noise.materialize();
  const double h = noise.step();
  for (double hu : {0.3, 0.5, 0.8}) {
    const HurstParams p(hu);
    const auto x = grid_kernel_apply(p, noise.increments(0), 64, 2.0, -8, 8);
    for (long k = -8; k <= 8; ++k) {
      double ref = 0.0;
      if (k != 0) {
        for (std::uint64_t j = 0; j < 64; ++j) {
          const double u0 = noise.cell_lo(j);
          ref += kernel_detail::st_cell_integral(static_cast<double>(k) * h, u0, u0 + h, p) / h *
                 noise.increments(0)[j];
        }
      }
      CHECK(x[static_cast<std::size_t>(k + 8)] == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
    // With every block at the leaf level the plan is the same discretization.
    std::vector<double> times;
    for (long k = -16; k <= 16; ++k) times.push_back(static_cast<double>(k) * h);
    const KernelPlan full(times, p, kernel_family(p), 2.0, 6, 1e9);
    CHECK(full.blocks().size() == 64);
    const auto a = full.evaluate(noise);
    const auto b = synth_kernel_grid(p, noise, -16, 16);
    CHECK((a - b.values).cwiseAbs().maxCoeff() < 1e-10);
  }
  const HurstParams p(0.5);
  CHECK_THROWS_AS(synth_kernel_grid(p, noise, -17, 0), Error);
  CHECK_THROWS_AS(synth_kernel_grid(p, NoiseField(8, 2.0, 6, 1), -1, 1), Error);
  CHECK_THROWS_AS(grid_kernel_apply(p, noise.increments(0), 64, 2.0, 1, 3), Error);
}

TEST_CASE("exact increment sampler covariance") {
  const std::vector<double> times{-1.0, 0.5, 1.5};
  for (double h : {0.2, 0.8}) {
    const HurstParams p(h);
    const IncrementSampler s(times, fbm_variogram(p));
    const int n = 4000;
    Eigen::MatrixXd draws(n, 3);
    for (int k = 0; k < n; ++k) draws.row(k) = s.sample(5, static_cast<std::uint64_t>(k), 1).row(0);
    check_covariance(draws, times, [&](double t, double u) { return covariance_closed(t, u, p); });
  }
}

TEST_CASE("circulant sampler covariance") {
  std::vector<double> times;
  for (int k = 0; k <= 256; ++k) times.push_back(k / 128.0);
  REQUIRE(CirculantSampler::applicable(times));
  CHECK_FALSE(CirculantSampler::applicable({0.0, 0.1, 0.3}));
  const std::vector<std::size_t> pick{1, 64, 128, 200, 256};
  std::vector<double> picked;
  for (auto i : pick) picked.push_back(times[i]);
  for (double h : {0.25, 0.75}) {
    const HurstParams p(h);
    const CirculantSampler s(times, fbm_variogram(p));
    CHECK(s.embedding_size() >= 512);
    const int n = 4000;
    Eigen::MatrixXd draws(n, static_cast<Eigen::Index>(pick.size()));
    for (int k = 0; k < n; ++k) {
      const auto x = s.sample(9, static_cast<std::uint64_t>(k), 1);
      CHECK(x(0, 0) == 0.0);
      for (std::size_t i = 0; i < pick.size(); ++i) {
        draws(k, static_cast<Eigen::Index>(i)) = x(0, static_cast<Eigen::Index>(pick[i]));
      }
    }
    check_covariance(draws, picked, [&](double t, double u) { return covariance_closed(t, u, p); });
  }
  CHECK_THROWS_AS(CirculantSampler({0.0, 0.1, 0.3}, fbm_variogram(HurstParams(0.5))), Error);
}

TEST_CASE("exact synthesis is deterministic") {
  std::vector<double> times;
  for (int k = 1; k <= 200; ++k) times.push_back(k / 100.0);
  const HurstParams p(0.6);
  const auto a = synth_exact(times, p, 2, 42, 3);
  const auto b = synth_exact(times, p, 2, 42, 3);
  const auto c = synth_exact(times, p, 2, 42, 4);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.values.rows() == 2);
  CHECK(a.values.row(0) != a.values.row(1));
}

TEST_CASE("Gamma kernel against the Matern closed form") {
  // (lambda + xi^2/2)^-alpha 2^-alpha = (a^2 + xi^2)^-alpha with a^2 = 2 lambda.
  for (double h : {0.3, 0.5, 0.7}) {
    const HurstParams p(h);
    for (double lambda : {0.5, 2.0}) {
      const GammaKernel g(p, lambda);
      const double a = std::sqrt(2.0 * lambda);
      const double ga = boost::math::tgamma(p.alpha());
      const double var = std::pow(a, -2.0 * h) * boost::math::tgamma(h) /
                         (2.0 * std::sqrt(std::numbers::pi) * ga);
      CHECK(g.variance() == doctest::Approx(var).epsilon(1e-8));
      for (double lag : {0.05, 0.5, 1.0, 4.0}) {
        const double cov = std::pow(lag / (2.0 * a), h) * boost::math::cyl_bessel_k(h, a * lag) /
                           (std::sqrt(std::numbers::pi) * ga);
        CHECK(g.covariance(lag) == doctest::Approx(cov).epsilon(1e-7).scale(var));
        CHECK(g.variogram(lag) == doctest::Approx(var - cov).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("Gamma variogram approaches fBm as lambda vanishes") {
  for (double h : {0.3, 0.7}) {
    const HurstParams p(h);
    const GammaKernel g(p, 1e-12);
    for (double lag : {0.1, 1.0, 2.0}) {
      CHECK(2.0 * g.variogram(lag) == doctest::Approx(covariance_closed(lag, lag, p)).epsilon(1e-3));
    }
  }
  CHECK_THROWS_AS(GammaKernel(HurstParams(0.5), 0.0), Error);
  CHECK_THROWS_AS(synth_gamma({1.0}, HurstParams(0.5), -1.0, 1, 1), Error);
}

TEST_CASE("Gamma synthesis variance by Monte Carlo") {
  const HurstParams p(0.4);
  const GammaKernel g(p, 0.3);
  const std::vector<double> times{0.5, 1.0, 3.0};
  const auto s = gamma_sampler(times, g);
  const int n = 4000;
  Eigen::MatrixXd draws(n, 3);
  for (int k = 0; k < n; ++k) draws.row(k) = s.sample(3, static_cast<std::uint64_t>(k), 1).row(0);
  check_covariance(draws, times, [&](double t, double u) {
    return g.variogram(t) + g.variogram(u) - g.variogram(std::abs(t - u));
  });
}

TEST_CASE("mollified cells match smoothing by quadrature") {
  for (double h : {0.3, 0.7}) {
    const HurstParams p(h);
    for (auto shape : {Mollifier::Shape::Triangle, Mollifier::Shape::Gaussian}) {
      const double w = 0.01;
      const auto fam = mollified_family(p, {shape, w});
      const double t = 1.0;
      const auto rho = [&](double s) {
        if (shape == Mollifier::Shape::Triangle) return std::abs(s) < w ? (w - std::abs(s)) / (w * w) : 0.0;
        return std::exp(-0.5 * s * s / (w * w)) / (w * std::sqrt(2.0 * std::numbers::pi));
      };
      const double reach = shape == Mollifier::Shape::Triangle ? w : 12.0 * w;
      for (auto cell : {std::pair{-0.004, 0.003}, std::pair{0.99, 1.02}, std::pair{0.3, 0.31},
                        std::pair{2.5, 2.6}, std::pair{-7.0, -6.0}}) {
        const auto f = [&](double s) {
          return rho(s) * kernel_detail::st_cell_integral(t, cell.first - s, cell.second - s, p);
        };
        std::vector<double> br{-reach, reach};
        for (int i = -12; i < 12; ++i) br.push_back(reach * i / 12.0);
        for (double c : {cell.first, cell.second, cell.first - t, cell.second - t}) {
          if (std::abs(c) < reach) br.push_back(c);
        }
        const double ref = graded(f, br);
        CAPTURE(cell.first);
        CAPTURE(h);
        CAPTURE(static_cast<int>(shape));
        CHECK(fam.cell(t, cell.first, cell.second) == doctest::Approx(ref).epsilon(1e-6));
      }
    }
  }
  CHECK_THROWS_AS(mollified_family(HurstParams(0.3), {Mollifier::Shape::Triangle, 0.0}), Error);
}

TEST_CASE("Poisson weight is the smoothed kernel") {
  using boost::math::quadrature::tanh_sinh;
  for (double h : {0.3, 0.5, 0.7}) {
    const HurstParams p(h);
    const double t = 1.0, y = 0.2;
    for (double u : {-0.7, 0.4, 2.5}) {
      const auto f = [&](double s) {
        if (s == u || s == u - t) return 0.0;
        const double rho = y / (std::numbers::pi * (s * s + y * y));
        return rho * kernel_St(t, u - s, p);
      };
      const double s1 = std::min(u, u - t), s2 = std::max(u, u - t);
      tanh_sinh<double> ts;
      const double inf = std::numeric_limits<double>::infinity();
      const double ref = ts.integrate(f, -inf, s1 - 1.0) + graded(f, {s1 - 1.0, s1, s2, s2 + 1.0}) +
                         ts.integrate(f, s2 + 1.0, inf);
      CAPTURE(u);
      CHECK(poisson_weight(t, u, y, p) == doctest::Approx(ref).epsilon(1e-6));
    }
    // Harmonic in (u, y).
    const double e = 1e-3, u = 0.3, yy = 0.5;
    const double lap = poisson_weight(t, u + e, yy, p) + poisson_weight(t, u - e, yy, p) +
                       poisson_weight(t, u, yy + e, p) + poisson_weight(t, u, yy - e, p) -
                       4.0 * poisson_weight(t, u, yy, p);
    CHECK(std::abs(lap / (e * e)) < 1e-4);
  }
  CHECK_THROWS_AS(poisson_weight(1.0, 0.5, 0.0, HurstParams(0.3)), Error);
  CHECK_THROWS_AS(poisson_family(HurstParams(0.3), -1.0), Error);
  CHECK_THROWS_AS(synth_poisson({1.0}, HurstParams(0.3), NoiseField(1, 4.0, 5, 2), 0.1), Error);
}

TEST_CASE("regularized kernels converge in the coupled distance") {
  const std::vector<double> times{0.5, 1.0};
  const HurstParams p(0.3);
  const auto g = calibrate_kernel_geometry(times, p);
  const KernelPlan base(times, p, kernel_family(p), g.radius, g.leaf_level);
  double prev_m = std::numeric_limits<double>::infinity();
  double prev_p = prev_m;
  for (double w : {0.2, 0.1, 0.05, 0.025}) {
    const KernelPlan m(times, p, mollified_family(p, {Mollifier::Shape::Triangle, w}), g.radius,
                       g.leaf_level);
    const KernelPlan q(times, p, poisson_family(p, w), g.radius, g.leaf_level);
    const double dm = m.coupled_distance(base, 1);
    const double dq = q.coupled_distance(base, 1);
    CHECK(dm < prev_m);
    CHECK(dq < prev_p);
    prev_m = dm;
    prev_p = dq;
  }
}

TEST_CASE("piecewise linear interpolation") {
  std::vector<double> times;
  for (int k = 0; k <= 16; ++k) times.push_back(k / 8.0);
  const auto path = synth_exact(times, HurstParams(0.4), 2, 1);
  const auto part = PartitionSpec::uniform(0.0, 2.0, 4, TauRule::Left);
  const auto pl = piecewise_linear(path, part);
  CHECK(pl.method.method == Method::PiecewiseLinear);
  for (double node : part.nodes()) {
    const auto i = path.index_of(node);
    CHECK(pl.values.col(static_cast<Eigen::Index>(i)) == path.values.col(static_cast<Eigen::Index>(i)));
  }
  const Eigen::VectorXd expect = 0.75 * path.values.col(0) + 0.25 * path.values.col(4);
  CHECK((pl.values.col(1) - expect).norm() < 1e-14);
  CHECK_THROWS_AS(piecewise_linear(path, PartitionSpec({0.0, 0.3, 2.0}, TauRule::Left)), Error);
}
