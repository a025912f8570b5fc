#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracflow/fbm_path.hpp"
#include "fracflow/noise_field.hpp"

namespace fracflow {

/// int_{u0}^{u1} k_t(u) du for a family of kernels indexed by time.
using CellIntegral = std::function<double(double t, double u0, double u1)>;

struct KernelFamily {
  MethodTag tag;
  CellIntegral cell;
};

/// S_t itself.
KernelFamily kernel_family(const HurstParams& p);

/// Dyadic partition of [-R, R]: a node is split while it is coarser than the
/// leaf level and lies within kappa widths of a singular point.
std::vector<DyadicBlock> adaptive_partition(double radius, int leaf_level,
                                            const std::vector<double>& singular, double kappa);

/// Standard deviation of int_{u>R} k_T u^(alpha-2) dB_u, the far-field part
/// of S_t per unit t on one side.
double tail_sigma(double radius, const HurstParams& p);

/// Block weights (cell averages of k_t) for fixed times on a fixed noise
/// geometry. X_t = sum_b w_b(t) B(b) + t tail_sigma (zeta_R - zeta_L).
class KernelPlan {
 public:
  static constexpr double kKappa = 8.0;

  /// Throws TruncationTooSmall when some |t| > R/2.
  KernelPlan(std::vector<double> times, const HurstParams& p, KernelFamily family, double radius,
             int leaf_level, double kappa = kKappa);

  const std::vector<double>& times() const { return times_; }
  const std::vector<DyadicBlock>& blocks() const { return blocks_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double radius() const { return radius_; }
  int leaf_level() const { return leaf_level_; }
  const KernelFamily& family() const { return family_; }

  /// Variance of the discrete X_t, including the tail closure.
  double discrete_variance(std::size_t i) const;
  /// E[(X_t - Y_t)^2] for two plans on the same noise geometry.
  double coupled_distance(const KernelPlan& other, std::size_t i) const;

  /// d x n sample. Throws GridMismatch unless the noise has the plan's radius
  /// and at least its leaf level.
  Eigen::MatrixXd evaluate(const NoiseField& noise) const;
  FbmPath path(const NoiseField& noise) const;

 private:
  std::vector<double> times_;
  HurstParams params_;
  KernelFamily family_;
  double radius_;
  int leaf_level_;
  std::vector<DyadicBlock> blocks_;
  Eigen::MatrixXd weights_;  // n x blocks
  double tail_sd_;
};

struct KernelGeometry {
  double radius;
  int leaf_level;
};

/// R = 50 max|t| (at least 1) and the coarsest leaf level whose discrete
/// variance is within rel_tol of 2K(2alpha)|t|^2H at every nonzero time.
KernelGeometry calibrate_kernel_geometry(const std::vector<double>& times, const HurstParams& p,
                                         double rel_tol = 5e-3);

/// Kernel synthesis against the given noise at its own resolution.
FbmPath synth_kernel(const std::vector<double>& times, const HurstParams& p,
                     const NoiseField& noise);

/// (1/h) sum_j [c_j - c_{j-k}] y_j for k in [k_lo, k_hi], where cell j of the
/// uniform grid on [-R, R] (n_cells even, so 0 is a node) carries weight y_j
/// and c_m is the integral of the profile of p over cell m. This is the
/// leaf-exact S_t pairing at t = k h, evaluated by FFT correlation.
std::vector<double> grid_kernel_apply(const HurstParams& p, const double* weights, long n_cells,
                                      double radius, long k_lo, long k_hi);

/// Kernel synthesis at every grid time k h, k in [k_lo, k_hi], by FFT
/// correlation of leaf-cell averages with the dense noise. Exact for the
/// leaf discretization (no block coarsening).
FbmPath synth_kernel_grid(const HurstParams& p, const NoiseField& noise, long k_lo, long k_hi);

}  // namespace fracflow
