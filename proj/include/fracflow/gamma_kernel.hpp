#pragma once

#include <cstdint>
#include <vector>

#include "fracflow/exact_sampler.hpp"

namespace fracflow {

/// Stationary process with spectral density 2^-alpha (lambda + xi^2/2)^-alpha,
/// i.e. covariance
///   G(h) = 2^-alpha / (2 pi) int cos(h xi) (lambda + xi^2/2)^-alpha dxi.
/// Both functions below integrate the cosine transform numerically
/// (double-exponential rules plus an Ooura oscillatory tail).
class GammaKernel {
 public:
  /// Throws NonpositiveLambda.
  GammaKernel(const HurstParams& p, double lambda);

  double lambda() const { return lambda_; }
  const HurstParams& params() const { return params_; }

  /// G(0) = Var(Y_t).
  double variance() const;
  /// G(0) - G(h) = Var(Y_{t+h} - Y_t) / 2, computed without forming G(0).
  double variogram(double h) const;
  /// G(h).
  double covariance(double h) const { return variance() - variogram(h); }

 private:
  HurstParams params_;
  double lambda_;
};

/// X_t = Y_t - Y_0 sampled by factorizing its increment covariance.
/// Throws NonpositiveLambda, FactorizationFailure.
FbmPath synth_gamma(const std::vector<double>& times, const HurstParams& p, double lambda, int d,
                    std::uint64_t seed, std::uint64_t path_index = 0);

/// Sampler for many Gamma paths on one grid (variogram cached).
IncrementSampler gamma_sampler(const std::vector<double>& times, const GammaKernel& g);

}  // namespace fracflow
