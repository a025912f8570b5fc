#include "fracflow/gamma_kernel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fracflow/error.hpp"

namespace fracflow {

namespace {

namespace bq = boost::math::quadrature;

constexpr double kPeriods = 4.0;

bq::ooura_fourier_cos<double>& ooura() {
  thread_local bq::ooura_fourier_cos<double> integrator;
  return integrator;
}

// J(b) = int_0^inf (1 - cos s) (s^2 + b^2)^-alpha ds, split at X = 2 pi m so
// the oscillatory remainder int_X^inf cos(s) f(s) ds starts at a full period.
double defect_integral(double b, double alpha) {
  const double x_split = 2.0 * std::numbers::pi * kPeriods;
  auto f = [b, alpha](double s) { return std::pow(s * s + b * b, -alpha); };
  bq::tanh_sinh<double> ts;
  auto body = [&](double s) {
    const double h = std::sin(0.5 * s);
    return 2.0 * h * h * f(s);
  };
  const double near = ts.integrate(body, 0.0, 1.0) + ts.integrate(body, 1.0, x_split);
  bq::exp_sinh<double> es;
  const double plain = es.integrate(f, x_split, std::numeric_limits<double>::infinity());
  const auto [osc, err] = ooura().integrate([&](double r) { return f(x_split + r); }, 1.0);
  (void)err;
  return near + plain - osc;
}

}  // namespace

GammaKernel::GammaKernel(const HurstParams& p, double lambda) : params_(p), lambda_(lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonpositiveLambda, "lambda must be positive");
}

double GammaKernel::variance() const {
  // 2^-alpha (lambda + xi^2/2)^-alpha = (xi^2 + a^2)^-alpha with a^2 = 2 lambda.
  const double a = std::sqrt(2.0 * lambda_);
  const double alpha = params_.alpha();
  bq::exp_sinh<double> es;
  const double unit = es.integrate([alpha](double s) { return std::pow(s * s + 1.0, -alpha); }, 0.0,
                                   std::numeric_limits<double>::infinity());
  return std::pow(a, 1.0 - 2.0 * alpha) * unit / std::numbers::pi;
}

double GammaKernel::variogram(double h) const {
  if (h == 0.0) return 0.0;
  const double ah = std::abs(h);
  const double a = std::sqrt(2.0 * lambda_);
  return std::pow(ah, 2.0 * params_.hurst()) * defect_integral(a * ah, params_.alpha()) /
         std::numbers::pi;
}

IncrementSampler gamma_sampler(const std::vector<double>& times, const GammaKernel& g) {
  auto cache = std::make_shared<std::map<double, double>>();
  auto gamma = [g, cache](double h) {
    const double key = std::abs(h);
    const auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    const double v = g.variogram(key);
    cache->emplace(key, v);
    return v;
  };
  return IncrementSampler(times, gamma, IncrementSampler::kExactLane + 1);
}

FbmPath synth_gamma(const std::vector<double>& times, const HurstParams& p, double lambda, int d,
                    std::uint64_t seed, std::uint64_t path_index) {
  const GammaKernel g(p, lambda);
  const IncrementSampler sampler = gamma_sampler(times, g);
  FbmPath path;
  path.times = times;
  path.values = sampler.sample(seed, path_index, d);
  path.params = p;
  path.method = {Method::Gamma, lambda};
  path.noise_seed = seed;
  return path;
}

}  // namespace fracflow
