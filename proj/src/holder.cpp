#include "fracflow/holder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracflow/error.hpp"
#include "fracflow/kernels.hpp"

namespace fracflow {

namespace {

void check_exponent(double hprime) {
  if (!(hprime > 0.0 && hprime <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Holder exponent must lie in (0, 1]");
  }
}

void check_samples(const std::vector<double>& times, const Eigen::MatrixXd& values) {
  if (times.size() < 2) throw Error(ErrorCode::InsufficientSamples, "need at least 2 samples");
  if (static_cast<Eigen::Index>(times.size()) != values.rows()) {
    throw Error(ErrorCode::InvalidArgument, "one value row per sample time required");
  }
}

}  // namespace

HolderFunction::HolderFunction(std::vector<double> times, Eigen::MatrixXd values,
                               double holder_exponent)
    : times_(std::move(times)), values_(std::move(values)), holder_exponent_(holder_exponent) {
  check_samples(times_, values_);
  check_exponent(holder_exponent_);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sample times must be strictly increasing");
    }
  }
  seminorm_ = holder_seminorm(times_, values_, holder_exponent_);
}

double HolderFunction::sup_norm() const { return values_.rowwise().norm().maxCoeff(); }

Eigen::VectorXd HolderFunction::operator()(double t) const {
  if (t <= times_.front()) return values_.row(0).transpose();
  if (t >= times_.back()) return values_.row(values_.rows() - 1).transpose();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<Eigen::Index>(it - times_.begin()) - 1;
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return ((1.0 - w) * values_.row(k) + w * values_.row(k + 1)).transpose();
}

double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double hprime) {
  check_samples(times, values);
  check_exponent(hprime);
  const std::size_t n = times.size();
  if (n > kExactSeminormLimit) return holder_seminorm_adjacent(times, values, hprime);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double num = (values.row(static_cast<Eigen::Index>(j)) -
                          values.row(static_cast<Eigen::Index>(i)))
                             .norm();
      best = std::max(best, num / std::pow(times[j] - times[i], hprime));
    }
  }
  return best;
}

double holder_seminorm_adjacent(const std::vector<double>& times,
                                const Eigen::MatrixXd& values, double hprime) {
  check_samples(times, values);
  check_exponent(hprime);
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double num = (values.row(k + 1) - values.row(k)).norm();
    best = std::max(best, num / std::pow(times[i + 1] - times[i], hprime));
  }
  return best;
}

Eigen::VectorXd pv_convolve(const HolderFunction& phi, double u, const HurstParams& p) {
  using kernel_detail::profile_diff;
  using kernel_detail::t_first_moment;
  if (p.hurst() + phi.holder_exponent() <= 0.5) {
    throw Error(ErrorCode::ExponentGate, "H + H' must exceed 1/2");
  }
  const double a = phi.a();
  const double b = phi.b();
  if (u == a || u == b) throw Error(ErrorCode::Endpoint, "p.v. convolution undefined at a, b");

  const auto& t = phi.times();
  const auto& v = phi.values();
  const bool inside = u > a && u < b;
  const Eigen::VectorXd centre = inside ? phi(u) : Eigen::VectorXd::Zero(v.cols());

  // On a cell phi(t) - c = (line(u) - c) - slope (u - t); with w = u - t,
  //   int [phi - c] T(u - t) dt = (line(u) - c)[S(u-t0) - S(u-t1)]
  //                               - slope int_{u-t1}^{u-t0} w T(w) dw.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.cols());
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double t0 = t[i];
    const double t1 = t[i + 1];
    const Eigen::VectorXd slope = (v.row(k + 1) - v.row(k)).transpose() / (t1 - t0);
    acc -= slope * t_first_moment(u - t1, u - t0, p);
    const bool holds_u = inside && t0 <= u && u <= t1;
    if (!holds_u) {
      const Eigen::VectorXd offset = v.row(k).transpose() + slope * (u - t0) - centre;
      acc += offset * profile_diff(u - t0, u - t1, p);
    }
  }
  if (inside) acc += centre * profile_diff(u - a, u - b, p);
  return acc;
}

double pv_l2_bound(const HolderFunction& phi, const HurstParams& p) {
  const double len = phi.b() - phi.a();
  const double hp = phi.holder_exponent();
  const double excess = p.alpha() + hp - 1.0;
  const double k_mixed = p.log_branch() ? 2.0 / (std::numbers::pi * hp)
                                        : std::abs(*p.k_alpha()) / excess;
  return std::sqrt(2.0 * p.k_2alpha()) * phi.sup_norm() * std::pow(len, p.hurst()) +
         k_mixed * phi.seminorm_estimate() * std::pow(len, excess + 0.5);
}

}  // namespace fracflow
