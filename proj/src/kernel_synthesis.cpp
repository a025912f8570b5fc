#include "fracflow/kernel_synthesis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "fracflow/error.hpp"
#include "fracflow/kernels.hpp"
#include "fft.hpp"

namespace fracflow {

namespace {

double distance_to(const std::vector<double>& sorted, double lo, double hi) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), lo);
  double best = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) best = std::max(0.0, *it - hi);
  if (it != sorted.begin()) best = std::min(best, lo - *(it - 1));
  return best;
}

void split(std::vector<DyadicBlock>& out, const std::vector<double>& pts, int level,
           std::uint64_t index, double lo, double hi, int leaf_level, double kappa) {
  const double width = hi - lo;
  if (level < leaf_level && distance_to(pts, lo, hi) < kappa * width) {
    const double mid = 0.5 * (lo + hi);
    split(out, pts, level + 1, 2 * index, lo, mid, leaf_level, kappa);
    split(out, pts, level + 1, 2 * index + 1, mid, hi, leaf_level, kappa);
    return;
  }
  out.push_back({level, index, lo, hi});
}

}  // namespace

KernelFamily kernel_family(const HurstParams& p) {
  return {{Method::Kernel, 0.0}, [p](double t, double u0, double u1) {
            return kernel_detail::st_cell_integral(t, u0, u1, p);
          }};
}

std::vector<DyadicBlock> adaptive_partition(double radius, int leaf_level,
                                            const std::vector<double>& singular, double kappa) {
  std::vector<double> pts = singular;
  std::sort(pts.begin(), pts.end());
  std::vector<DyadicBlock> out;
  split(out, pts, 0, 0, -radius, radius, leaf_level, kappa);
  return out;
}

double tail_sigma(double radius, const HurstParams& p) {
  const double e = 3.0 - 2.0 * p.alpha();
  return std::abs(p.k_T()) * std::sqrt(std::pow(radius, -e) / e);
}

KernelPlan::KernelPlan(std::vector<double> times, const HurstParams& p, KernelFamily family,
                       double radius, int leaf_level, double kappa)
    : times_(std::move(times)),
      params_(p),
      family_(std::move(family)),
      radius_(radius),
      leaf_level_(leaf_level),
      tail_sd_(tail_sigma(radius, p)) {
  for (double t : times_) {
    if (std::abs(t) > 0.5 * radius) {
      throw Error(ErrorCode::TruncationTooSmall, "times must lie within [-R/2, R/2]");
    }
  }
  std::vector<double> singular = times_;
  singular.push_back(0.0);
  blocks_ = adaptive_partition(radius, leaf_level, singular, kappa);
  const auto n = static_cast<Eigen::Index>(times_.size());
  const auto nb = static_cast<Eigen::Index>(blocks_.size());
  weights_.resize(n, nb);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = times_[static_cast<std::size_t>(i)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      const DyadicBlock& blk = blocks_[static_cast<std::size_t>(b)];
      weights_(i, b) = t == 0.0 ? 0.0 : family_.cell(t, blk.lo, blk.hi) / (blk.hi - blk.lo);
    }
  }
}

double KernelPlan::discrete_variance(std::size_t i) const {
  double v = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const double w = weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
    v += (blocks_[b].hi - blocks_[b].lo) * w * w;
  }
  const double t = times_[i];
  return v + 2.0 * t * t * tail_sd_ * tail_sd_;
}

double KernelPlan::coupled_distance(const KernelPlan& other, std::size_t i) const {
  if (other.blocks_.size() != blocks_.size() || other.radius_ != radius_ ||
      other.times_[i] != times_[i]) {
    throw Error(ErrorCode::GridMismatch, "plans do not share a noise geometry");
  }
  double v = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const double w = weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) -
                     other.weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
    v += (blocks_[b].hi - blocks_[b].lo) * w * w;
  }
  return v;
}

Eigen::MatrixXd KernelPlan::evaluate(const NoiseField& noise) const {
  if (noise.radius() != radius_ || noise.level() < leaf_level_) {
    throw Error(ErrorCode::GridMismatch, "noise geometry does not match the kernel plan");
  }
  const auto n = static_cast<Eigen::Index>(times_.size());
  Eigen::MatrixXd out(noise.dimension(), n);
  Eigen::VectorXd sums(static_cast<Eigen::Index>(blocks_.size()));
  Eigen::Map<const Eigen::VectorXd> t(times_.data(), n);
  for (int d = 0; d < noise.dimension(); ++d) {
    noise.block_sums(d, blocks_, sums.data());
    const double tail = tail_sd_ * (noise.tail_normal(d, 1) - noise.tail_normal(d, 0));
    out.row(d) = (weights_ * sums + tail * t).transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (times_[static_cast<std::size_t>(i)] == 0.0) out(d, i) = 0.0;
    }
  }
  return out;
}

FbmPath KernelPlan::path(const NoiseField& noise) const {
  FbmPath p;
  p.times = times_;
  p.values = evaluate(noise);
  p.params = params_;
  p.method = family_.tag;
  p.method.parameter = family_.tag.method == Method::Kernel ? radius_ : family_.tag.parameter;
  p.noise_seed = noise.seed();
  return p;
}

KernelGeometry calibrate_kernel_geometry(const std::vector<double>& times, const HurstParams& p,
                                         double rel_tol) {
  double tmax = 0.0;
  double tmin = std::numeric_limits<double>::infinity();
  for (double t : times) {
    tmax = std::max(tmax, std::abs(t));
    if (t != 0.0) tmin = std::min(tmin, std::abs(t));
  }
  const double radius = 50.0 * std::max(tmax, 1.0);
  if (tmax == 0.0) return {radius, 1};
  int level = NoiseField::level_for_step(radius, tmin / 8.0);
  const KernelFamily fam = kernel_family(p);
  for (; level <= 36; ++level) {
    const KernelPlan plan(times, p, fam, radius, level);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] == 0.0) continue;
      const double target = covariance_closed(times[i], times[i], p);
      worst = std::max(worst, std::abs(plan.discrete_variance(i) / target - 1.0));
    }
    if (worst <= rel_tol) return {radius, level};
  }
  throw Error(ErrorCode::GridTooCoarse, "kernel calibration did not converge");
}

FbmPath synth_kernel(const std::vector<double>& times, const HurstParams& p,
                     const NoiseField& noise) {
  const KernelPlan plan(times, p, kernel_family(p), noise.radius(), noise.level());
  return plan.path(noise);
}

std::vector<double> grid_kernel_apply(const HurstParams& p, const double* weights, long n_cells,
                                      double radius, long k_lo, long k_hi) {
  if (k_lo > 0 || k_hi < 0 || k_lo > k_hi) {
    throw Error(ErrorCode::InvalidArgument, "grid index range must contain 0");
  }
  if (n_cells % 2 != 0) throw Error(ErrorCode::GridMismatch, "0 must be a grid node");
  const double h = 2.0 * radius / static_cast<double>(n_cells);
  // g[i] = int over cell (i - k_hi) of the profile; the answer at k is
  // sum_j (g[j + k_hi] - g[j + k_hi - k]) y_j / h, a cross-correlation.
  const long span = k_hi - k_lo;
  const long m = n_cells + span;
  long fft_n = 1;
  while (fft_n < m) fft_n *= 2;
  const long n_freq = fft_n / 2 + 1;
  std::vector<double> buf(static_cast<std::size_t>(fft_n), 0.0);
  double prev = kernel_detail::profile_antiderivative(-radius - static_cast<double>(k_hi) * h, p);
  for (long i = 0; i < m; ++i) {
    const double u = -radius + static_cast<double>(i + 1 - k_hi) * h;
    const double next = kernel_detail::profile_antiderivative(u, p);
    buf[static_cast<std::size_t>(i)] = next - prev;
    prev = next;
  }
  std::vector<std::complex<double>> gf(static_cast<std::size_t>(n_freq));
  std::vector<std::complex<double>> yf(static_cast<std::size_t>(n_freq));
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fft::planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(fft_n), buf.data(),
                               reinterpret_cast<fftw_complex*>(yf.data()), FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(fft_n), reinterpret_cast<fftw_complex*>(yf.data()),
                               buf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute_dft_r2c(fwd, buf.data(), reinterpret_cast<fftw_complex*>(gf.data()));
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(weights, weights + n_cells, buf.begin());
  fftw_execute_dft_r2c(fwd, buf.data(), reinterpret_cast<fftw_complex*>(yf.data()));
  for (long f = 0; f < n_freq; ++f) {
    yf[static_cast<std::size_t>(f)] = gf[static_cast<std::size_t>(f)] * std::conj(yf[static_cast<std::size_t>(f)]);
  }
  fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(yf.data()), buf.data());
  {
    std::lock_guard<std::mutex> lock(fft::planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  const double base = buf[static_cast<std::size_t>(k_hi)];
  const double scale = 1.0 / (static_cast<double>(fft_n) * h);
  std::vector<double> out(static_cast<std::size_t>(span + 1));
  for (long k = k_lo; k <= k_hi; ++k) {
    out[static_cast<std::size_t>(k - k_lo)] =
        k == 0 ? 0.0 : (base - buf[static_cast<std::size_t>(k_hi - k)]) * scale;
  }
  return out;
}

FbmPath synth_kernel_grid(const HurstParams& p, const NoiseField& noise, long k_lo, long k_hi) {
  if (!noise.dense()) throw Error(ErrorCode::GridMismatch, "grid synthesis needs dense noise");
  const auto n_cells = static_cast<long>(noise.cells());
  if (std::max(-k_lo, k_hi) > n_cells / 4) {
    throw Error(ErrorCode::TruncationTooSmall, "times must lie within [-R/2, R/2]");
  }
  const double h = noise.step();
  FbmPath path;
  for (long k = k_lo; k <= k_hi; ++k) path.times.push_back(static_cast<double>(k) * h);
  path.values.resize(noise.dimension(), k_hi - k_lo + 1);
  const double sd = tail_sigma(noise.radius(), p);
  for (int d = 0; d < noise.dimension(); ++d) {
    const auto x = grid_kernel_apply(p, noise.increments(d), n_cells, noise.radius(), k_lo, k_hi);
    const double tail = sd * (noise.tail_normal(d, 1) - noise.tail_normal(d, 0));
    for (long k = k_lo; k <= k_hi; ++k) {
      path.values(d, k - k_lo) = x[static_cast<std::size_t>(k - k_lo)] + static_cast<double>(k) * h * tail;
    }
  }
  path.params = p;
  path.method = {Method::Kernel, noise.radius()};
  path.noise_seed = noise.seed();
  return path;
}

}  // namespace fracflow
