#include "fracflow/inversion.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fracflow/error.hpp"
#include "fracflow/kernel_synthesis.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/noise_field.hpp"
#include "fracflow/parallel.hpp"
#include "fft.hpp"

namespace fracflow {

namespace {

double identity_target(double v, double t) {
  if (t > 0.0 && v > 0.0 && v < t) return -1.0;
  if (t < 0.0 && v < 0.0 && v > t) return 1.0;
  return 0.0;
}

}  // namespace

InverseKernelSpec::InverseKernelSpec(const HurstParams& p, double radius_, double t_)
    : params(p), conjugate_alpha(fracflow::conjugate_alpha(p.alpha())), radius(radius_), t(t_) {
  if (!(radius_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
}

double inverse_kernel(double u, const InverseKernelSpec& spec) {
  if (std::abs(u) > spec.radius) return 0.0;
  return kernel_St(spec.t, u, spec.conjugate());
}

IdentityCheck convolution_identity_check(double t, const HurstParams& p, double h,
                                         double half_width) {
  if (!(h > 0.0) || (t != 0.0 && 10.0 * h >= std::abs(t))) {
    throw Error(ErrorCode::GridTooCoarse, "step must be below |t|/10");
  }
  if (half_width < 2.0 * std::abs(t) + 1.0) {
    throw Error(ErrorCode::GridTooCoarse, "grid must cover [-2|t| - 1, 2|t| + 1]");
  }
  const long kv = static_cast<long>(std::floor(2.0 * std::abs(t) / h));
  if (t == 0.0) return {0.0, h, half_width, static_cast<std::size_t>(2 * kv + 1)};
  const HurstParams conj = p.conjugate();
  const long jmax = static_cast<long>(std::floor(half_width / h));
  // g_j: average of S_t^(2-alpha) over [jh - h/2, jh + h/2], |j| <= jmax.
  std::vector<double> g(static_cast<std::size_t>(2 * jmax + 1));
  for (long j = -jmax; j <= jmax; ++j) {
    const double c = static_cast<double>(j) * h;
    g[static_cast<std::size_t>(j + jmax)] =
        kernel_detail::st_cell_integral(t, c - 0.5 * h, c + 0.5 * h, conj) / h;
  }
  // D_m = int over cell m of T^alpha = P((m + 1/2) h) - P((m - 1/2) h), |m| <= kv + jmax.
  const long mmax = kv + jmax;
  std::vector<double> dk(static_cast<std::size_t>(2 * mmax + 1));
  for (long m = -mmax; m <= mmax; ++m) {
    dk[static_cast<std::size_t>(m + mmax)] = kernel_detail::profile_diff(
        (static_cast<double>(m) + 0.5) * h, (static_cast<double>(m) - 0.5) * h, p);
  }
  const std::vector<double> conv = fft::linear_convolve(g, dk);
  // conv[i] = sum_j g[j + jmax] dk[i - j - jmax], so v = k h sits at i = k + jmax + mmax.
  const double edge = (static_cast<double>(jmax) + 0.5) * h;
  using GL = boost::math::quadrature::gauss<double, 30>;
  auto tail = [&](double v) {
    // u = +-edge / s, s in (0, 1]
    auto integrand = [&](double s, double sign) {
      if (s == 0.0) return 0.0;
      const double u = sign * edge / s;
      return kernel_T(v - u, p) * kernel_St(t, u, conj) * edge / (s * s);
    };
    auto side = [&](double sign) {
      auto f = [&](double s) { return integrand(s, sign); };
      return GL::integrate(f, 0.0, 0.5) + GL::integrate(f, 0.5, 1.0);
    };
    return side(1.0) + side(-1.0);
  };
  double worst = 0.0;
  std::size_t count = 0;
  for (long k = -kv; k <= kv; ++k) {
    const double v = static_cast<double>(k) * h;
    if (std::abs(v) <= 5.0 * h || std::abs(v - t) <= 5.0 * h) continue;
    const double value = conv[static_cast<std::size_t>(k + jmax + mmax)] + tail(v);
    worst = std::max(worst, std::abs(value - identity_target(v, t)));
    ++count;
  }
  return {worst, h, half_width, count};
}

double recover_bm(const FbmPath& path, double t, const HurstParams& p, double radius) {
  if (std::abs(t) > 0.25 * radius) throw Error(ErrorCode::DomainTooSmall, "need |t| <= R/4");
  const auto i0 = path.find(-radius);
  const auto i1 = path.find(radius);
  if (!i0 || !i1 || path.dimension() < 1) {
    throw Error(ErrorCode::DomainTooSmall, "path grid must have nodes at -R and R");
  }
  if (t == 0.0) return 0.0;
  const HurstParams conj = p.conjugate();
  double acc = 0.0;
  for (std::size_t k = *i0; k < *i1; ++k) {
    const double u0 = path.times[k];
    const double u1 = path.times[k + 1];
    const double avg = kernel_detail::st_cell_integral(t, u0, u1, conj) / (u1 - u0);
    acc += avg * (path.values(0, static_cast<Eigen::Index>(k + 1)) -
                  path.values(0, static_cast<Eigen::Index>(k)));
  }
  return -acc;
}

std::vector<double> recover_bm_grid(const FbmPath& path, const HurstParams& p, double radius,
                                    long k_max) {
  const auto i0 = path.find(-radius);
  const auto i1 = path.find(radius);
  if (!i0 || !i1) throw Error(ErrorCode::DomainTooSmall, "path grid must have nodes at -R and R");
  const long cells = static_cast<long>(*i1 - *i0);
  if (cells % 2 != 0 || k_max > cells / 2) {
    throw Error(ErrorCode::DomainTooSmall, "uniform grid with 0 at a node required");
  }
  std::vector<double> dx(static_cast<std::size_t>(cells));
  for (long k = 0; k < cells; ++k) {
    dx[static_cast<std::size_t>(k)] = path.values(0, static_cast<Eigen::Index>(*i0) + k + 1) -
                                      path.values(0, static_cast<Eigen::Index>(*i0) + k);
  }
  std::vector<double> b = grid_kernel_apply(p.conjugate(), dx.data(), cells, radius, -k_max, k_max);
  for (double& v : b) v = -v;
  return b;
}

RoundTripReport round_trip_fbm(std::uint64_t seed, const HurstParams& p, double radius, double h,
                               const std::vector<double>& times, std::size_t draws) {
  const int level = NoiseField::level_for_step(2.0 * radius, h);
  if (std::ldexp(4.0 * radius, -level) != h) {
    throw Error(ErrorCode::GridMismatch, "4R/h must be a power of two");
  }
  const long kmax = static_cast<long>(std::llround(radius / h));
  std::vector<long> idx;
  for (double t : times) {
    const double k = t / h;
    if (std::abs(t) > 0.25 * radius || k != std::round(k)) {
      throw Error(ErrorCode::DomainTooSmall, "report times must be grid nodes within R/4");
    }
    idx.push_back(static_cast<long>(k));
  }
  const std::size_t nt = times.size();
  // Per draw: B, X, B^, X^ at the report times.
  std::vector<std::array<std::vector<double>, 4>> rows(draws);
  parallel_for(draws, [&](std::size_t draw) {
    NoiseField noise(seed, 2.0 * radius, level, 1, draw);
    noise.materialize();
    const FbmPath x = synth_kernel_grid(p, noise, -kmax, kmax);
    const std::vector<double> bhat = recover_bm_grid(x, p, radius, kmax);
    std::vector<double> dbhat(static_cast<std::size_t>(2 * kmax));
    for (long k = 0; k < 2 * kmax; ++k) {
      dbhat[static_cast<std::size_t>(k)] = bhat[static_cast<std::size_t>(k + 1)] - bhat[static_cast<std::size_t>(k)];
    }
    const std::vector<double> xhat =
        grid_kernel_apply(p, dbhat.data(), 2 * kmax, radius, -kmax / 2, kmax / 2);
    const double* inc = noise.increments(0);
    const long zero = static_cast<long>(noise.cells() / 2);
    auto& row = rows[draw];
    for (auto& r : row) r.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      const long k = idx[i];
      double b = 0.0;
      if (k > 0) {
        for (long j = zero; j < zero + k; ++j) b += inc[j];
      } else {
        for (long j = zero + k; j < zero; ++j) b -= inc[j];
      }
      row[0][i] = b;
      row[1][i] = x.values(0, k + kmax);
      row[2][i] = bhat[static_cast<std::size_t>(k + kmax)];
      row[3][i] = xhat[static_cast<std::size_t>(k + kmax / 2)];
    }
  });
  RoundTripReport rep{times, std::vector<double>(nt, 0.0), std::vector<double>(nt, 0.0),
                      std::vector<double>(nt, 0.0), draws};
  for (std::size_t i = 0; i < nt; ++i) {
    double eb = 0, nb = 0, ex = 0, nx = 0, sbb = 0, shh = 0, sbh = 0, mb = 0, mh = 0;
    for (const auto& row : rows) {
      eb += std::pow(row[2][i] - row[0][i], 2);
      nb += row[0][i] * row[0][i];
      ex += std::pow(row[3][i] - row[1][i], 2);
      nx += row[1][i] * row[1][i];
      mb += row[0][i];
      mh += row[2][i];
    }
    const double n = static_cast<double>(draws);
    mb /= n;
    mh /= n;
    for (const auto& row : rows) {
      sbb += (row[0][i] - mb) * (row[0][i] - mb);
      shh += (row[2][i] - mh) * (row[2][i] - mh);
      sbh += (row[0][i] - mb) * (row[2][i] - mh);
    }
    rep.bm_rel_error[i] = nb > 0 ? std::sqrt(eb / nb) : 0.0;
    rep.fbm_rel_error[i] = nx > 0 ? std::sqrt(ex / nx) : 0.0;
    rep.bm_correlation[i] = sbb > 0 && shh > 0 ? sbh / std::sqrt(sbb * shh) : 1.0;
  }
  return rep;
}

}  // namespace fracflow
