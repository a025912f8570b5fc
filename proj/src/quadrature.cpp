#include "fracflow/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fracflow/kernels.hpp"

namespace fracflow::quad {

std::vector<Panel> graded_panels(double lo, double hi, bool singular_lo, bool singular_hi) {
  std::vector<Panel> out;
  if (!(hi > lo)) return out;
  if (singular_lo && singular_hi) {
    const double mid = 0.5 * (lo + hi);
    auto left = graded_panels(lo, mid, true, false);
    auto right = graded_panels(mid, hi, false, true);
    left.insert(left.end(), right.begin(), right.end());
    return left;
  }
  if (!singular_lo && !singular_hi) return {{lo, hi}};
  // Geometric cells toward the singular end.
  std::vector<double> cuts;
  const double len = hi - lo;
  double w = len * kGradingRatio;
  while (w > kMinCell) {
    cuts.push_back(w);
    w *= kGradingRatio;
  }
  if (singular_lo) {
    double prev = lo;
    for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) {
      out.push_back({prev, lo + *it});
      prev = lo + *it;
    }
    out.push_back({prev, hi});
  } else {
    double prev = lo;
    for (double c : cuts) {
      out.push_back({prev, hi - c});
      prev = hi - c;
    }
    out.push_back({prev, hi});
  }
  return out;
}

double integrate(const std::function<double(double)>& f, const std::vector<Panel>& panels) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  double sum = 0.0;
  for (const auto& pn : panels) {
    sum += GL::integrate(f, pn.lo, pn.hi);
  }
  return sum;
}

TruncatedIntegral st_inner_product(double t, double s, const HurstParams& p, double rel_tol) {
  if (t == 0.0 || s == 0.0) return {0.0, 0.0, 0.0};
  auto f = [&](double u) {
    if (u == 0.0 || u == t || u == s) return 0.0;
    return kernel_St(t, u, p) * kernel_St(s, u, p);
  };
  std::vector<double> bps{0.0, t, s};
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  double radius = 50.0 * std::max({std::abs(t), std::abs(s), 1.0});
  std::vector<Panel> panels;
  auto add = [&panels](std::vector<Panel> more) {
    panels.insert(panels.end(), more.begin(), more.end());
  };
  add(graded_panels(-radius, bps.front(), false, true));
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) add(graded_panels(bps[i], bps[i + 1], true, true));
  add(graded_panels(bps.back(), radius, true, false));
  double value = integrate(f, panels);

  // Far field: S_t(u) S_s(u) ~ k_T^2 t s |u|^(2 alpha - 4) on each side.
  const double expo = 2.0 * p.alpha() - 3.0;
  auto tail = [&](double r) {
    return 2.0 * p.k_T() * p.k_T() * t * s * std::pow(r, expo) / (-expo);
  };
  while (std::abs(tail(radius)) > rel_tol * std::abs(value)) {
    const double next = 2.0 * radius;
    value += integrate(f, {{-next, -radius}, {radius, next}});
    radius = next;
    if (radius > 1e300) break;
  }
  const double est = tail(radius);
  return {value + est, radius, est};
}

}  // namespace fracflow::quad
