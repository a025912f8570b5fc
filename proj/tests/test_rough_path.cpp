#include <doctest.h>

#include <cmath>

#include "fracflow/error.hpp"
#include "fracflow/exact_sampler.hpp"
#include "fracflow/rough_path.hpp"

using namespace fracflow;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(a + (b - a) * i / n);
  return t;
}

// Conventional signature levels of a piecewise-linear path from its
// increments: S2(i,j) = sum_{p<q} D_p^i D_q^j + 1/2 sum_p D_p^i D_p^j, and
// the analogous level 3.
struct Signature {
  Eigen::MatrixXd s2;
  std::vector<double> s3;
};

Signature signature(const Eigen::MatrixXd& inc) {
  const auto d = inc.rows();
  const auto n = inc.cols();
  Signature s{Eigen::MatrixXd::Zero(d, d), std::vector<double>(static_cast<std::size_t>(d * d * d), 0.0)};
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k) {
        double v = 0;
        for (Eigen::Index a = 0; a < n; ++a) {
          v += inc(i, a) * inc(j, a) * inc(k, a) / 6.0;
          for (Eigen::Index b = a + 1; b < n; ++b) {
            v += 0.5 * (inc(i, a) * inc(j, a) * inc(k, b) + inc(i, a) * inc(j, b) * inc(k, b));
            for (Eigen::Index c = b + 1; c < n; ++c) v += inc(i, a) * inc(j, b) * inc(k, c);
          }
        }
        s.s3[static_cast<std::size_t>((i * d + j) * d + k)] = v;
      }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double v = 0;
      for (Eigen::Index a = 0; a < n; ++a) {
        v += 0.5 * inc(i, a) * inc(j, a);
        for (Eigen::Index b = a + 1; b < n; ++b) v += inc(i, a) * inc(j, b);
      }
      s.s2(i, j) = v;
    }
  return s;
}

}  // namespace

TEST_CASE("one-dimensional levels are powers of the increment") {
  const auto path = synth_exact(grid(0.0, 1.0, 40), HurstParams(0.3), 1, 2);
  const double dx = path.values(0, 30) - path.values(0, 5);
  const auto l2 = level2(path, 0.125, 0.75);
  const auto l3 = level3(path, 0.125, 0.75);
  CHECK(l2.value(0, 0) == doctest::Approx(dx * dx / 2).epsilon(1e-12));
  CHECK(l3(0, 0, 0) == doctest::Approx(dx * dx * dx / 6).epsilon(1e-12));
  CHECK(l3.norm() == doctest::Approx(std::abs(dx * dx * dx / 6)).epsilon(1e-12));
}

TEST_CASE("levels are transposes of the conventional signature") {
  const auto path = synth_exact(grid(0.0, 1.0, 10), HurstParams(0.6), 3, 3);
  Eigen::MatrixXd inc(3, 6);
  for (int c = 0; c < 6; ++c) inc.col(c) = path.values.col(c + 3) - path.values.col(c + 2);
  const auto sig = signature(inc);
  const auto l2 = level2(path, 0.2, 0.8);
  const auto l3 = level3(path, 0.2, 0.8);
  CHECK((l2.value - sig.s2.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        CHECK(l3(i, j, k) == doctest::Approx(sig.s3[static_cast<std::size_t>((k * 3 + j) * 3 + i)]).epsilon(1e-12));
      }
  const Eigen::VectorXd dx = path.values.col(8) - path.values.col(2);
  const Eigen::MatrixXd sym = 0.5 * (l2.value + l2.value.transpose());
  CHECK((sym - 0.5 * dx * dx.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("chen identity in both orders") {
  const auto path = synth_exact(grid(0.0, 2.0, 64), HurstParams(0.7), 2, 6);
  for (auto flavor : {Flavor::Strat, Flavor::Skorohod}) {
    CHECK(chen_check(path, 0.25, 1.0, 1.75, false, flavor).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(chen_check(path, 0.25, 1.0, 1.75, true, flavor).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(chen_check(path, 0.5, 0.5, 1.0, false, flavor).cwiseAbs().maxCoeff() < 1e-12);
  }
  // The wrong order fails for a genuinely two-dimensional path.
  const auto l2ab = level2(path, 0.25, 1.75), l2ac = level2(path, 0.25, 1.0), l2cb = level2(path, 1.0, 1.75);
  const Eigen::VectorXd x_ca = path.values.col(32) - path.values.col(8);
  const Eigen::VectorXd x_bc = path.values.col(56) - path.values.col(32);
  const Eigen::MatrixXd wrong = l2ab.value - l2ac.value - l2cb.value - x_ca * x_bc.transpose();
  CHECK(wrong.cwiseAbs().maxCoeff() > 1e-6);
  CHECK_THROWS_AS(chen_check(path, 1.0, 0.5, 1.5), Error);
}

TEST_CASE("skorohod renormalization") {
  const HurstParams p(0.35);
  const auto path = synth_exact(grid(0.0, 2.0, 32), p, 2, 7);
  const double a = 0.5, b = 1.5;
  const auto strat = level2(path, a, b);
  const auto sko = level2_skorohod(path, a, b, p);
  const double shift = p.k_2alpha() * std::pow(b - a, 2 * 0.35);
  const Eigen::MatrixXd diff = strat.value - sko.value;
  CHECK(diff(0, 0) == doctest::Approx(shift).epsilon(1e-12));
  CHECK(diff(1, 1) == doctest::Approx(shift).epsilon(1e-12));
  CHECK(std::abs(diff(0, 1)) < 1e-14);
  CHECK(sko.flavor == Flavor::Skorohod);
  // One dimension: level 3 is the third Hermite polynomial of the increment.
  const auto p1 = synth_exact(grid(0.0, 2.0, 32), p, 1, 7);
  const double dx = p1.values(0, 24) - p1.values(0, 8);
  const double var = 2.0 * shift;
  const auto l3 = level3(p1, a, b, Flavor::Skorohod);
  CHECK(l3(0, 0, 0) == doctest::Approx((dx * dx * dx - 3 * var * dx) / 6).epsilon(1e-10));
  CHECK_THROWS_AS(level2_skorohod(path, -0.5, 1.0, p), Error);
}

TEST_CASE("rough path argument errors") {
  const auto path = synth_exact(grid(0.0, 1.0, 8), HurstParams(0.5), 1, 1);
  CHECK_THROWS_AS(level2(path, 0.5, 0.25), Error);
  CHECK_THROWS_AS(level2(path, 0.1, 0.5), Error);
  try {
    level3(path, 0.75, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Ordering);
  }
}
