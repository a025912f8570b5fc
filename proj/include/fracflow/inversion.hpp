#pragma once

#include <cstdint>
#include <vector>

#include "fracflow/fbm_path.hpp"

namespace fracflow {

/// phi_R(u) = [S^(2-alpha)(u) - S^(2-alpha)(u - t)] 1_[-R, R](u).
struct InverseKernelSpec {
  HurstParams params;      ///< of the forward kernel
  double conjugate_alpha;  ///< 2 - alpha
  double radius;
  double t;

  InverseKernelSpec(const HurstParams& p, double radius, double t);
  HurstParams conjugate() const { return params.conjugate(); }
};

/// phi_R(u); 0 outside [-R, R]. Throws Singularity at u in {0, t}.
double inverse_kernel(double u, const InverseKernelSpec& spec);

struct IdentityCheck {
  double max_error;   ///< over grid points at distance > 5h from {0, t}
  double h;
  double half_width;  ///< L
  std::size_t points;
};

/// Discrete (T^alpha * S_t^(2-alpha))(v) on v = k h in [-2|t|, 2|t|] against
/// -1_[0,t]. S_t^(2-alpha) is cell-averaged on [-L, L] and convolved by FFT
/// with the exactly integrated T over each cell; the part beyond L is added
/// by quadrature. Throws GridTooCoarse when 10 h >= |t| or L < 2|t| + 1.
IdentityCheck convolution_identity_check(double t, const HurstParams& p, double h,
                                         double half_width);

/// B_t = -int_{-R}^{R} phi_R(u) dX_u with phi_R averaged exactly over each
/// path cell. Throws DomainTooSmall unless the grid covers [-R, R] and
/// |t| <= R/4.
double recover_bm(const FbmPath& path, double t, const HurstParams& p, double radius);

/// recover_bm at every node k h, |k| <= k_max, of a uniform path on [-R, R]
/// (R/h an integer), by FFT correlation.
std::vector<double> recover_bm_grid(const FbmPath& path, const HurstParams& p, double radius,
                                    long k_max);

struct RoundTripReport {
  std::vector<double> times;
  std::vector<double> bm_rel_error;   ///< sqrt(E(B^_t - B_t)^2 / E B_t^2), per time; 0 at t = 0
  std::vector<double> fbm_rel_error;  ///< sqrt(E(X^_t - X_t)^2 / E X_t^2)
  std::vector<double> bm_correlation;
  std::size_t draws;
};

/// B -> X -> B^ -> X^ over Monte Carlo draws. B is dense noise of step h on
/// [-2R, 2R], X its kernel synthesis on [-R, R], B^ the recovery on [-R, R]
/// and X^ the kernel synthesis driven by B^. The times must be multiples of
/// h with |t| <= R/4.
RoundTripReport round_trip_fbm(std::uint64_t seed, const HurstParams& p, double radius, double h,
                               const std::vector<double>& times, std::size_t draws);

}  // namespace fracflow
