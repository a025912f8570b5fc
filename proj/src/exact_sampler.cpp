#include "fracflow/exact_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fracflow/error.hpp"
#include "fracflow/rng.hpp"
#include "fft.hpp"

namespace fracflow {

IncrementSampler::IncrementSampler(std::vector<double> times, const Variogram& gamma,
                                   std::uint32_t lane)
    : times_(std::move(times)), lane_(lane) {
  if (times_.empty()) throw Error(ErrorCode::InvalidArgument, "empty time grid");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "times must be strictly increasing");
    }
  }
  std::vector<double> grid = times_;
  if (!std::binary_search(grid.begin(), grid.end(), 0.0)) {
    grid.insert(std::lower_bound(grid.begin(), grid.end(), 0.0), 0.0);
  }
  anchor_ = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), 0.0) - grid.begin());
  for (double t : times_) {
    out_index_.push_back(
        static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin()));
  }
  const auto m = static_cast<Eigen::Index>(grid.size()) - 1;
  if (m == 0) return;
  // Cov(X_b - X_a, X_d - X_c) = g(d-a) + g(c-b) - g(d-b) - g(c-a)
  Eigen::MatrixXd cov(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double a = grid[static_cast<std::size_t>(i)], b = grid[static_cast<std::size_t>(i) + 1];
      const double c = grid[static_cast<std::size_t>(j)], d = grid[static_cast<std::size_t>(j) + 1];
      const double v = gamma(d - a) + gamma(c - b) - gamma(d - b) - gamma(c - a);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  const double trace = cov.trace();
  for (double rel : {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
    Eigen::MatrixXd c = cov;
    c.diagonal().array() += rel * trace;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = rel * trace;
      return;
    }
  }
  throw Error(ErrorCode::FactorizationFailure, "increment covariance not positive definite");
}

Eigen::MatrixXd IncrementSampler::sample(std::uint64_t seed, std::uint64_t path_index, int d) const {
  const auto n = static_cast<Eigen::Index>(times_.size());
  const Eigen::Index m = factor_.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, n);
  if (m == 0) return out;
  Eigen::VectorXd z(m);
  Eigen::VectorXd level(m + 1);
  const auto anchor = static_cast<Eigen::Index>(anchor_);
  for (int dim = 0; dim < d; ++dim) {
    const NormalStream s(seed, path_index, static_cast<std::uint64_t>(dim));
    for (Eigen::Index k = 0; k < m; ++k) z(k) = s.normal(static_cast<std::uint64_t>(k), lane_);
    const Eigen::VectorXd inc = factor_.triangularView<Eigen::Lower>() * z;
    level(anchor) = 0.0;
    for (Eigen::Index k = anchor; k < m; ++k) level(k + 1) = level(k) + inc(k);
    for (Eigen::Index k = anchor; k > 0; --k) level(k - 1) = level(k) - inc(k - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      out(dim, i) = level(static_cast<Eigen::Index>(out_index_[static_cast<std::size_t>(i)]));
    }
  }
  return out;
}

namespace {

bool uniform_layout(const std::vector<double>& times, double& step, long& offset) {
  if (times.size() < 2) return false;
  step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(step > 0.0)) return false;
  const double scale = std::max({std::abs(times.front()), std::abs(times.back()), step});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expect = times.front() + static_cast<double>(i) * step;
    if (std::abs(times[i] - expect) > 1e-9 * scale) return false;
  }
  const double k = times.front() / step;
  if (std::abs(k - std::round(k)) > 1e-6) return false;
  offset = static_cast<long>(std::llround(k));
  return true;
}

}  // namespace

bool CirculantSampler::applicable(const std::vector<double>& times) {
  double step;
  long offset;
  return uniform_layout(times, step, offset);
}

CirculantSampler::CirculantSampler(std::vector<double> times, const Variogram& gamma,
                                   std::uint32_t lane)
    : times_(std::move(times)), lane_(lane) {
  double step;
  long first;
  if (!uniform_layout(times_, step, first)) {
    throw Error(ErrorCode::InvalidArgument, "circulant sampling needs a uniform grid through 0");
  }
  const long last = first + static_cast<long>(times_.size()) - 1;
  const long lo = std::min(first, 0L);
  const long hi = std::max(last, 0L);
  offset_ = first - lo;
  anchor_ = -lo;
  steps_ = hi - lo;
  // Autocovariance of unit-step increments.
  auto r = [&](long k) {
    const double dk = static_cast<double>(k);
    return gamma((dk + 1.0) * step) + gamma((dk - 1.0) * step) - 2.0 * gamma(dk * step);
  };
  std::size_t m = 1;
  while (m < 2 * static_cast<std::size_t>(steps_)) m *= 2;
  for (int attempt = 0; attempt < 6; ++attempt, m *= 2) {
    std::vector<std::complex<double>> c(m);
    for (std::size_t k = 0; k < m; ++k) c[k] = r(static_cast<long>(std::min(k, m - k)));
    fft::forward(c);
    double top = 0.0, bottom = 0.0;
    for (const auto& v : c) {
      top = std::max(top, v.real());
      bottom = std::min(bottom, v.real());
    }
    if (bottom < -1e-10 * top) continue;
    sqrt_eig_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      sqrt_eig_[k] = std::sqrt(std::max(c[k].real(), 0.0) / static_cast<double>(m));
    }
    plan_ = std::make_shared<const fft::ForwardPlan>(m);
    return;
  }
  throw Error(ErrorCode::FactorizationFailure, "no nonnegative circulant embedding found");
}

Eigen::MatrixXd CirculantSampler::sample(std::uint64_t seed, std::uint64_t path_index, int d) const {
  const auto n = static_cast<Eigen::Index>(times_.size());
  Eigen::MatrixXd out(d, n);
  const std::size_t m = sqrt_eig_.size();
  std::vector<std::complex<double>> w(m);
  std::vector<double> level(static_cast<std::size_t>(steps_) + 1);
  for (int dim = 0; dim < d; ++dim) {
    const NormalStream s(seed, path_index, static_cast<std::uint64_t>(dim));
    for (std::size_t k = 0; k < m; ++k) {
      const auto z = s.pair(k, lane_);
      w[k] = sqrt_eig_[k] * std::complex<double>(z[0], z[1]);
    }
    static_cast<const fft::ForwardPlan*>(plan_.get())->execute(w);
    const auto a = static_cast<std::size_t>(anchor_);
    level[a] = 0.0;
    for (std::size_t k = a; k < static_cast<std::size_t>(steps_); ++k) level[k + 1] = level[k] + w[k].real();
    for (std::size_t k = a; k > 0; --k) level[k - 1] = level[k] - w[k - 1].real();
    for (Eigen::Index i = 0; i < n; ++i) out(dim, i) = level[static_cast<std::size_t>(offset_ + i)];
  }
  return out;
}

Variogram fbm_variogram(const HurstParams& p) {
  const double k = p.k_2alpha();
  const double h2 = 2.0 * p.hurst();
  return [k, h2](double h) { return h == 0.0 ? 0.0 : k * std::pow(std::abs(h), h2); };
}

FbmPath synth_exact(const std::vector<double>& times, const HurstParams& p, int d,
                    std::uint64_t seed, std::uint64_t path_index) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  FbmPath path;
  path.times = times;
  if (times.size() >= kCirculantMinPoints && CirculantSampler::applicable(times)) {
    path.values = CirculantSampler(times, fbm_variogram(p)).sample(seed, path_index, d);
  } else {
    path.values = IncrementSampler(times, fbm_variogram(p)).sample(seed, path_index, d);
  }
  path.params = p;
  path.method = {Method::Exact, 0.0};
  path.noise_seed = seed;
  return path;
}

}  // namespace fracflow
