#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fracflow/fbm_path.hpp"

namespace fracflow {

/// gamma(h) = Var(X_{t+h} - X_t) / 2 of a process with stationary increments.
using Variogram = std::function<double(double)>;

/// Gaussian process with stationary increments and X_0 = 0, sampled on a
/// fixed grid. The increments between consecutive points of {0} u times are
/// factorized (better conditioned than the values themselves) and summed
/// outward from the anchor, so X_0 is exactly 0.
class IncrementSampler {
 public:
  /// Throws FactorizationFailure when the jitter ladder 0, 1e-14, ..., 1e-8
  /// (times the trace) is exhausted.
  IncrementSampler(std::vector<double> times, const Variogram& gamma,
                   std::uint32_t lane = kExactLane);

  static constexpr std::uint32_t kExactLane = 2;

  const std::vector<double>& times() const { return times_; }
  double jitter() const { return jitter_; }

  /// One path, d x n, from the stream (seed, path_index, dim).
  Eigen::MatrixXd sample(std::uint64_t seed, std::uint64_t path_index, int d) const;

 private:
  std::vector<double> times_;
  std::vector<std::size_t> out_index_;  // position of each time in the augmented grid
  std::size_t anchor_ = 0;
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
  std::uint32_t lane_;
};

/// Exact sampler for uniform grids containing 0 (or extendable to 0 by whole
/// steps) by circulant embedding of the stationary increment covariance.
/// Cost O(n log n) per draw against O(n^2) for IncrementSampler.
class CirculantSampler {
 public:
  /// Throws InvalidArgument when the grid is not uniform, FactorizationFailure
  /// when no embedding up to 64x the grid is nonnegative definite.
  CirculantSampler(std::vector<double> times, const Variogram& gamma,
                   std::uint32_t lane = IncrementSampler::kExactLane);

  static bool applicable(const std::vector<double>& times);

  const std::vector<double>& times() const { return times_; }
  std::size_t embedding_size() const { return sqrt_eig_.size(); }
  Eigen::MatrixXd sample(std::uint64_t seed, std::uint64_t path_index, int d) const;

 private:
  std::vector<double> times_;
  long offset_ = 0;  // grid index of times_[0]
  long anchor_ = 0;  // grid index of 0
  long steps_ = 0;
  std::vector<double> sqrt_eig_;
  std::uint32_t lane_;
  std::shared_ptr<const void> plan_;
};

/// Grids at least this long go through CirculantSampler in synth_exact.
inline constexpr std::size_t kCirculantMinPoints = 128;

/// Variogram K(2alpha) |h|^2H of fBm.
Variogram fbm_variogram(const HurstParams& p);

/// Exact fBm sample with covariance covariance_closed on every dimension.
FbmPath synth_exact(const std::vector<double>& times, const HurstParams& p, int d,
                    std::uint64_t seed, std::uint64_t path_index = 0);

}  // namespace fracflow
