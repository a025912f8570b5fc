#pragma once

#include <optional>

namespace fracflow {

/// Hurst exponent together with the kernel exponent alpha = H + 1/2 and the
/// normalisation constants shared by every kernel in the library.
///
///   K(alpha)  = 1 / (2 Gamma(alpha) cos(pi alpha / 2))      (pole at alpha = 1)
///   K(2alpha) = 1 / (2 Gamma(2H + 1) sin(pi H))             (> 0 on (0, 1))
///   k_T       = 1 / (2 Gamma(alpha - 1) cos(pi alpha / 2))  (-> -1/pi at alpha = 1)
///
/// When |alpha - 1| < kLogBranchWidth the logarithmic branch is selected and
/// K(alpha) is reported as unavailable.
class HurstParams {
 public:
  static constexpr double kLogBranchWidth = 1e-9;

  /// Throws Error(InvalidArgument) unless 0 < H < 1.
  explicit HurstParams(double hurst);

  double hurst() const noexcept { return hurst_; }
  double alpha() const noexcept { return alpha_; }
  std::optional<double> k_alpha() const noexcept { return k_alpha_; }
  double k_2alpha() const noexcept { return k_2alpha_; }
  /// Constant of T = S'; finite for every alpha in (1/2, 3/2).
  double k_T() const noexcept { return k_T_; }
  bool log_branch() const noexcept { return !k_alpha_.has_value(); }

  /// Parameters of the kernel with exponent 2 - alpha (Hurst 1 - H).
  HurstParams conjugate() const { return HurstParams(1.0 - hurst_); }

 private:
  double hurst_;
  double alpha_;
  std::optional<double> k_alpha_;
  double k_2alpha_;
  double k_T_;
};

/// Exponent map alpha -> 2 - alpha used by the inverse transform.
constexpr double conjugate_alpha(double alpha) noexcept { return 2.0 - alpha; }

}  // namespace fracflow
