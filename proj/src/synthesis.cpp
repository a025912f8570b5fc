#include "fracflow/synthesis.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "fracflow/error.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/quadrature.hpp"

namespace fracflow {

namespace {

using ld = long double;
constexpr double kFarWidths = 20.0;

// Antiderivative of the profile vanishing at 0, and its second antiderivative.
ld prim1(ld x, const HurstParams& p) {
  if (x == 0.0L) return 0.0L;
  const ld ax = std::fabs(x);
  ld v;
  if (p.log_branch()) {
    v = -(ax * std::log(ax) - ax) / std::numbers::pi_v<ld>;
  } else {
    const ld a = p.alpha();
    v = static_cast<ld>(*p.k_alpha()) * std::pow(ax, a) / a;
  }
  return x > 0 ? v : -v;
}

ld prim3(ld x, const HurstParams& p) {
  if (x == 0.0L) return 0.0L;
  const ld ax = std::fabs(x);
  ld v;
  if (p.log_branch()) {
    v = -(ax * ax * ax * std::log(ax) / 6.0L - 11.0L * ax * ax * ax / 36.0L) / std::numbers::pi_v<ld>;
  } else {
    const ld a = p.alpha();
    v = static_cast<ld>(*p.k_alpha()) * std::pow(ax, a + 2.0L) / (a * (a + 1.0L) * (a + 2.0L));
  }
  return x > 0 ? v : -v;
}

// Derivatives of the profile: T and T''.
double dprofile(double x, const HurstParams& p) { return kernel_T(x, p); }

double d3profile(double x, const HurstParams& p) {
  const double a = p.alpha();
  return (a - 2.0) * (a - 3.0) * kernel_T(x, p) / (x * x);
}

// D(x) = (rho * A)(x) - A(x), A the profile antiderivative. The cell
// integral of rho * S_t is that of S_t plus D differences.
double triangle_defect(double x, double w, const HurstParams& p) {
  if (std::abs(x) > kFarWidths * w) {
    return w * w / 12.0 * dprofile(x, p) + std::pow(w, 4) / 360.0 * d3profile(x, p);
  }
  const ld lx = x, lw = w;
  const ld second = prim3(lx + lw, p) - 2.0L * prim3(lx, p) + prim3(lx - lw, p);
  return static_cast<double>(second / (lw * lw) - prim1(lx, p));
}

double gaussian_defect(double x, double s, const HurstParams& p) {
  if (std::abs(x) > kFarWidths * s) {
    return s * s / 2.0 * dprofile(x, p) + std::pow(s, 4) / 8.0 * d3profile(x, p);
  }
  const ld base = prim1(x, p);
  auto f = [&](double v) {
    const double z = v / s;
    return std::exp(-0.5 * z * z) * static_cast<double>(prim1(static_cast<ld>(x) - v, p) - base);
  };
  const double lim = 10.0 * s;
  std::vector<quad::Panel> panels;
  if (x > -lim && x < lim) {
    panels = quad::graded_panels(-lim, x, false, true);
    const auto right = quad::graded_panels(x, lim, true, false);
    panels.insert(panels.end(), right.begin(), right.end());
  } else {
    panels = quad::graded_panels(-lim, lim, false, false);
  }
  return quad::integrate(f, panels) / (s * std::sqrt(2.0 * std::numbers::pi));
}

// Antiderivative in x of the Poisson extension of the profile.
ld poisson_prim(ld x, ld y, const HurstParams& p) {
  if (p.log_branch()) {
    return -(x * 0.5L * std::log(x * x + y * y) - x + y * std::atan(x / y)) /
           std::numbers::pi_v<ld>;
  }
  const ld a = p.alpha();
  const std::complex<ld> z = std::pow(std::complex<ld>(y, -x), a);
  const ld s = std::sin(std::numbers::pi_v<ld> * a / 2.0L);
  return -static_cast<ld>(*p.k_alpha()) * z.imag() / (a * s);
}

}  // namespace

KernelFamily mollified_family(const HurstParams& p, Mollifier rho) {
  if (!(rho.width > 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier width must be positive");
  const bool tri = rho.shape == Mollifier::Shape::Triangle;
  const double w = rho.width;
  auto defect = [p, w, tri](double x) {
    return tri ? triangle_defect(x, w, p) : gaussian_defect(x, w, p);
  };
  return {{Method::Mollified, w}, [p, defect](double t, double u0, double u1) {
            if (t == 0.0) return 0.0;
            return kernel_detail::st_cell_integral(t, u0, u1, p) + (defect(u1) - defect(u0)) -
                   (defect(u1 - t) - defect(u0 - t));
          }};
}

KernelFamily poisson_family(const HurstParams& p, double y) {
  if (!(y > 0.0)) throw Error(ErrorCode::NonpositiveY, "Poisson parameter y must be positive");
  return {{Method::Poisson, y}, [p, y](double t, double u0, double u1) {
            if (t == 0.0) return 0.0;
            const ld ly = y, lt = t;
            const ld r = (poisson_prim(u1, ly, p) - poisson_prim(u0, ly, p)) -
                         (poisson_prim(u1 - lt, ly, p) - poisson_prim(u0 - lt, ly, p));
            return static_cast<double>(r);
          }};
}

double poisson_weight(double t, double u, double y, const HurstParams& p) {
  if (!(y > 0.0)) throw Error(ErrorCode::NonpositiveY, "Poisson parameter y must be positive");
  auto ext = [&](double x) {
    if (p.log_branch()) return -0.5 * std::log(x * x + y * y) / std::numbers::pi;
    const double a = p.alpha();
    return *p.k_alpha() * std::pow(std::complex<double>(y, -x), a - 1.0).real() /
           std::sin(std::numbers::pi * a / 2.0);
  };
  return ext(u) - ext(u - t);
}

FbmPath synth_mollified(const std::vector<double>& times, const HurstParams& p,
                        const NoiseField& noise, Mollifier rho) {
  const KernelPlan plan(times, p, mollified_family(p, rho), noise.radius(), noise.level());
  return plan.path(noise);
}

FbmPath synth_poisson(const std::vector<double>& times, const HurstParams& p,
                      const NoiseField& noise, double y) {
  if (noise.dimension() != 1) {
    throw Error(ErrorCode::InvalidArgument, "Poisson extension is one-dimensional");
  }
  const KernelPlan plan(times, p, poisson_family(p, y), noise.radius(), noise.level());
  return plan.path(noise);
}

FbmPath piecewise_linear(const FbmPath& path, const PartitionSpec& part) {
  std::vector<std::size_t> idx;
  for (double t : part.nodes()) {
    const auto k = path.find(t);
    if (!k) throw Error(ErrorCode::NodeMismatch, "partition node not on the path grid");
    idx.push_back(*k);
  }
  FbmPath out = path;
  out.method = {Method::PiecewiseLinear, 0.0};
  for (std::size_t c = 0; c + 1 < idx.size(); ++c) {
    const auto i0 = static_cast<Eigen::Index>(idx[c]);
    const auto i1 = static_cast<Eigen::Index>(idx[c + 1]);
    const double t0 = path.times[idx[c]];
    const double t1 = path.times[idx[c + 1]];
    for (Eigen::Index k = i0 + 1; k < i1; ++k) {
      const double w = (path.times[static_cast<std::size_t>(k)] - t0) / (t1 - t0);
      out.values.col(k) = (1.0 - w) * path.values.col(i0) + w * path.values.col(i1);
    }
  }
  return out;
}

}  // namespace fracflow
