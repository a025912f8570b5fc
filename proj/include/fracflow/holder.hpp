#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fracflow/hurst.hpp"

namespace fracflow {

/// Sampled H'-Holder function on [a, b], possibly vector valued
/// (one column per component). Between samples it is read as its linear
/// interpolant.
class HolderFunction {
 public:
  /// Throws InsufficientSamples for fewer than 2 samples and
  /// InvalidArgument for non-increasing times or H' outside (0, 1].
  HolderFunction(std::vector<double> times, Eigen::MatrixXd values, double holder_exponent);

  double a() const { return times_.front(); }
  double b() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index dimension() const { return values_.cols(); }
  double holder_exponent() const { return holder_exponent_; }
  double seminorm_estimate() const { return seminorm_; }
  /// max_t |phi(t)| over the samples (Euclidean norm per sample).
  double sup_norm() const;

  /// Linear interpolant at t in [a, b].
  Eigen::VectorXd operator()(double t) const;

 private:
  std::vector<double> times_;
  Eigen::MatrixXd values_;
  double holder_exponent_;
  double seminorm_;
};

/// Pairs above which holder_seminorm switches from the exact O(n^2) scan to
/// the adjacent-pair estimate (a lower bound of the true seminorm).
inline constexpr std::size_t kExactSeminormLimit = 4096;

/// sup over sampled pairs of |phi(t) - phi(s)| / |t - s|^H'.
/// Throws InsufficientSamples (< 2 samples), InvalidArgument (bad H').
double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double hprime);

/// Adjacent-pair estimate; always a lower bound of holder_seminorm.
double holder_seminorm_adjacent(const std::vector<double>& times,
                                const Eigen::MatrixXd& values, double hprime);

/// Principal-value convolution f(u) = p.v. int_a^b phi(t) T(u - t) dt of the
/// linear interpolant of phi, computed cell by cell in closed form. Inside
/// (a, b) the integral is compensated at u:
///   phi(u)[S(u-a) - S(u-b)] + int_a^b [phi(t) - phi(u)] T(u - t) dt.
/// Throws Endpoint for u in {a, b} and ExponentGate when H + H' <= 1/2.
Eigen::VectorXd pv_convolve(const HolderFunction& phi, double u, const HurstParams& p);

/// Right-hand side of the L2 bound on pv_convolve:
///   [2K(2a)]^{1/2} |phi|_inf |b-a|^H + K(a,H') |phi|_H' |b-a|^{a+H'-1/2},
/// with K(a,H') = |K(a)| / (a + H' - 1), and 2/(pi H') at alpha = 1.
double pv_l2_bound(const HolderFunction& phi, const HurstParams& p);

}  // namespace fracflow
