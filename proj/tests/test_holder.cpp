#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "fracflow/error.hpp"
#include "fracflow/holder.hpp"
#include "fracflow/kernels.hpp"

using namespace fracflow;

namespace {

HolderFunction sampled(double a, double b, int n, double hprime, double (*f)(double)) {
  std::vector<double> t;
  Eigen::MatrixXd v(n + 1, 1);
  for (int i = 0; i <= n; ++i) {
    t.push_back(a + (b - a) * i / n);
    v(i, 0) = f(t.back());
  }
  return HolderFunction(t, v, hprime);
}

double spow(double x, double a) { return std::copysign(std::pow(std::abs(x), a), x) / a; }

}  // namespace

TEST_CASE("seminorm of simple functions") {
  const auto lin = sampled(0, 1, 50, 1.0, [](double t) { return 3.0 * t; });
  CHECK(lin.seminorm_estimate() == doctest::Approx(3.0));
  const auto root = sampled(0, 1, 200, 0.5, [](double t) { return std::sqrt(t); });
  CHECK(root.seminorm_estimate() == doctest::Approx(1.0));
  CHECK(holder_seminorm_adjacent(root.times(), root.values(), 0.5) <= root.seminorm_estimate());
  CHECK(lin.sup_norm() == doctest::Approx(3.0));
  CHECK(lin(0.25)(0) == doctest::Approx(0.75));
}

TEST_CASE("adjacent estimate is a lower bound") {
  std::vector<double> t;
  Eigen::MatrixXd v(300, 2);
  for (int i = 0; i < 300; ++i) {
    t.push_back(i / 299.0);
    v(i, 0) = std::sin(40 * t.back()) + std::sqrt(t.back());
    v(i, 1) = std::cos(7 * t.back());
  }
  for (double hp : {0.3, 0.6, 1.0}) {
    const double exact = holder_seminorm(t, v, hp);
    CHECK(holder_seminorm_adjacent(t, v, hp) <= exact + 1e-12);
    CHECK(exact > 0.0);
  }
}

TEST_CASE("holder argument errors") {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(HolderFunction({0.0}, one, 0.5), Error);
  Eigen::MatrixXd two(2, 1);
  two << 1.0, 2.0;
  CHECK_THROWS_AS(HolderFunction({0.0, 1.0}, two, 0.0), Error);
  CHECK_THROWS_AS(HolderFunction({0.0, 1.0}, two, 1.5), Error);
  CHECK_THROWS_AS(HolderFunction({1.0, 0.0}, two, 0.5), Error);
  try {
    HolderFunction({0.0}, one, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSamples);
  }
}

TEST_CASE("pv convolution of a linear function") {
  // For phi(t) = c + d t, integrating by parts against T = S' gives
  //   phi(a) S(u-a) - phi(b) S(u-b) + d int_a^b S(u-t) dt.
  const double a = 0.5, b = 1.5, c = 0.7, d = -1.3;
  Eigen::MatrixXd v(2, 1);
  v << c + d * a, c + d * b;
  const HolderFunction phi({a, b}, v, 1.0);
  for (double h : {0.3, 0.7, 0.9}) {
    const HurstParams p(h);
    const double k = *p.k_alpha();
    const double al = p.alpha();
    for (double u : {-1.0, 0.2, 0.6, 1.0, 1.37, 1.9, 4.0}) {
      const double ref = (c + d * a) * kernel_S(u - a, p) - (c + d * b) * kernel_S(u - b, p) +
                         d * k * (spow(u - a, al) - spow(u - b, al));
      CHECK(pv_convolve(phi, u, p)(0) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("pv convolution outside the interval matches quadrature") {
  const auto phi = sampled(0.0, 1.0, 40, 1.0, [](double t) { return std::exp(t) * std::cos(5 * t); });
  for (double h : {0.2, 0.5, 0.8}) {
    const HurstParams p(h);
    for (double u : {-0.5, -0.05, 1.1, 3.0}) {
      const auto f = [&](double t) { return phi(t)(0) * kernel_T(u - t, p); };
      double ref = 0.0;
      for (int i = 0; i < 40; ++i) {
        ref += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, i / 40.0, (i + 1) / 40.0,
                                                                          0, 1e-13);
      }
      CHECK(pv_convolve(phi, u, p)(0) == doctest::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("pv convolution errors") {
  const auto phi = sampled(0.0, 1.0, 4, 0.1, [](double t) { return t; });
  const HurstParams p(0.3);
  CHECK_THROWS_AS(pv_convolve(phi, 0.0, p), Error);
  CHECK_THROWS_AS(pv_convolve(phi, 1.0, p), Error);
  try {
    pv_convolve(phi, 0.5, p);
    FAIL("expected ExponentGate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExponentGate);
  }
}

TEST_CASE("L2 norm of the pv convolution respects the bound") {
  using boost::math::quadrature::tanh_sinh;
  const auto phi = sampled(0.0, 1.0, 64, 1.0, [](double t) { return std::sin(3 * t) + 0.5; });
  for (double h : {0.3, 0.5, 0.8}) {
    const HurstParams p(h);
    const auto f2 = [&](double u) {
      const double v = pv_convolve(phi, u, p)(0);
      return v * v;
    };
    tanh_sinh<double> ts;
    // Endpoint singularities are integrable; stay 1e-12 away from them.
    const double e = 1e-12;
    double norm2 = ts.integrate(f2, e, 1.0 - e);
    // Outside [0, 1] the convolution decays like |u|^(alpha - 2).
    const double cuts[] = {e, 1.0, 4.0, 20.0, 100.0, 1e4};
    for (int i = 0; i + 1 < 6; ++i) {
      norm2 += ts.integrate(f2, 1.0 + cuts[i], 1.0 + cuts[i + 1]);
      norm2 += ts.integrate(f2, -cuts[i + 1], -cuts[i]);
    }
    const double norm = std::sqrt(norm2);
    CHECK(norm > 0.0);
    CHECK(norm <= pv_l2_bound(phi, p));
  }
}
