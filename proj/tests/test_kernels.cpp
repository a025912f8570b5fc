#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "fracflow/error.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/quadrature.hpp"

using namespace fracflow;
using std::numbers::pi;

namespace {

// Independent constant: K(alpha) = 1 / (2 Gamma(alpha) cos(pi alpha / 2)).
double k_alpha(double a) { return 1.0 / (2.0 * std::tgamma(a) * std::cos(pi * a / 2.0)); }

}  // namespace

TEST_CASE("constants match their gamma-function definitions") {
  for (double h : {0.1, 0.3, 0.45, 0.55, 0.7, 0.9}) {
    const HurstParams p(h);
    CHECK(p.alpha() == doctest::Approx(h + 0.5));
    REQUIRE(p.k_alpha().has_value());
    CHECK(*p.k_alpha() == doctest::Approx(k_alpha(h + 0.5)).epsilon(1e-13));
    // The covariance constant is 1 / (2 Gamma(2H + 1) sin(pi H)); the K(alpha)
    // expression continued to 2 alpha has the opposite sign.
    CHECK(p.k_2alpha() == doctest::Approx(-k_alpha(2 * h + 1)).epsilon(1e-12));
    CHECK(p.k_2alpha() ==
          doctest::Approx(1.0 / (2.0 * std::tgamma(2 * h + 1) * std::sin(pi * h))).epsilon(1e-12));
  }
  const HurstParams half(0.5);
  CHECK(half.log_branch());
  CHECK(half.k_T() == doctest::Approx(-1.0 / pi));
  CHECK(half.k_2alpha() == doctest::Approx(0.5));
}

TEST_CASE("HurstParams rejects exponents outside (0, 1)") {
  for (double h : {0.0, 1.0, -0.2, 1.3}) CHECK_THROWS_AS(HurstParams{h}, Error);
}

TEST_CASE("conjugate exponent is an involution") {
  for (double h : {0.2, 0.5, 0.8}) {
    const HurstParams p(h);
    CHECK(p.conjugate().conjugate().hurst() == doctest::Approx(h).epsilon(1e-15));
    CHECK(conjugate_alpha(conjugate_alpha(p.alpha())) == doctest::Approx(p.alpha()).epsilon(1e-15));
    CHECK(p.conjugate().alpha() == doctest::Approx(2.0 - p.alpha()));
  }
}

TEST_CASE("T is the derivative of S") {
  for (double h : {0.25, 0.7}) {
    const HurstParams p(h);
    for (double t : {-2.0, -0.3, 0.4, 1.7}) {
      const double e = 1e-6;
      const double fd = (kernel_S(t + e, p) - kernel_S(t - e, p)) / (2 * e);
      CHECK(kernel_T(t, p) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("kernel symmetries and errors") {
  const HurstParams p(0.3);
  CHECK(kernel_S(1.3, p) == doctest::Approx(kernel_S(-1.3, p)));
  CHECK(kernel_T(0.8, p) == doctest::Approx(-kernel_T(-0.8, p)));
  CHECK_THROWS_AS(kernel_T(0.0, p), Error);
  CHECK_THROWS_AS(kernel_S(0.0, p), Error);
  CHECK_THROWS_AS(kernel_S(1.0, HurstParams(0.5)), Error);
  CHECK_THROWS_AS(kernel_St(1.0, 1.0, p), Error);
  CHECK(kernel_St(0.0, 0.7, p) == 0.0);
}

TEST_CASE("S_t is continuous through the logarithmic branch") {
  const double t = 1.0, u = 0.37;
  const double at_one = kernel_St(t, u, HurstParams(0.5));
  CHECK(at_one == doctest::Approx(std::log(std::abs(1.0 - t / u)) / pi));
  for (double d : {1e-4, 1e-6, 1e-8}) {
    CHECK(kernel_St(t, u, HurstParams(0.5 + d)) == doctest::Approx(at_one).epsilon(50 * d));
    CHECK(kernel_St(t, u, HurstParams(0.5 - d)) == doctest::Approx(at_one).epsilon(50 * d));
  }
}

TEST_CASE("covariance closed form") {
  SUBCASE("Brownian case is min(|t|, |s|) for equal signs") {
    const HurstParams p(0.5);
    CHECK(covariance_closed(0.7, 2.0, p) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(covariance_closed(-1.5, -0.2, p) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(covariance_closed(-1.0, 1.0, p) == doctest::Approx(0.0));
  }
  SUBCASE("matches the quadrature of S_t S_s") {
    for (double h : {0.2, 0.5, 0.85}) {
      const HurstParams p(h);
      for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{0.5, -2.0}, std::pair{3.0, 1.2}}) {
        const auto q = quad::st_inner_product(t, s, p);
        CHECK(q.value == doctest::Approx(covariance_closed(t, s, p)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("Plancherel: Fourier side of the covariance") {
  // int S_t S_s du = (1 / 2 pi) int conj(S_t^) S_s^ dxi, the integrand even in xi.
  const HurstParams p(0.7);
  const double t = 1.0, s = 0.6;
  auto f = [&](double xi) {
    if (xi == 0.0) return 0.0;
    return std::real(std::conj(st_fourier(xi, t, p)) * st_fourier(xi, s, p));
  };
  double acc = 0.0;
  for (double lo = 0.0; lo < 4000.0; lo += 2.0) {
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, lo + 2.0);
  }
  // |integrand| <= 4 xi^(-2 alpha) beyond the cut
  const double tail = 4.0 * std::pow(4000.0, 1.0 - 2.0 * p.alpha()) / (2.0 * p.alpha() - 1.0);
  const double fourier = acc / pi;
  CHECK(fourier == doctest::Approx(covariance_closed(t, s, p)).epsilon(2 * tail + 1e-6));
}

TEST_CASE("cell integrals agree with direct quadrature") {
  for (double h : {0.3, 0.5, 0.8}) {
    const HurstParams p(h);
    const double t = 1.0;
    for (auto [u0, u1] : {std::pair{-3.0, -2.5}, std::pair{0.2, 0.3}, std::pair{1.5, 4.0}}) {
      auto f = [&](double u) { return kernel_St(t, u, p); };
      const double direct =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, u0, u1, 10, 1e-13);
      CHECK(kernel_detail::st_cell_integral(t, u0, u1, p) == doctest::Approx(direct).epsilon(1e-10));
    }
    // Cells touching the singular points.
    auto f = [&](double u) { return kernel_St(t, u, p); };
    const double touching =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 0.25, 25, 1e-12);
    CHECK(kernel_detail::st_cell_integral(t, 0.0, 0.25, p) == doctest::Approx(touching).epsilon(1e-7));
  }
}

TEST_CASE("graded panels refine toward singular ends") {
  const auto panels = quad::graded_panels(0.0, 1.0, true, false);
  REQUIRE(panels.size() > 10);
  CHECK(panels.front().lo == 0.0);
  CHECK(panels.back().hi == 1.0);
  CHECK(panels.front().hi - panels.front().lo <= quad::kMinCell * 2.0);
  const double v = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, panels);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-5));
}
