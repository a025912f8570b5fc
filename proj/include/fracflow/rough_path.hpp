#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fracflow/fbm_path.hpp"

namespace fracflow {

enum class Flavor { Strat, Skorohod };

/// Index order follows int_a^b dX_i(t) int_a^t dX_j(s): the outer (later)
/// increment comes first, i.e. the transpose of the usual signature order.
/// With that order Chen's cross term is (X_b - X_c) (x) (X_c - X_a).
struct Level2Tensor {
  double a = 0.0;
  double b = 0.0;
  Eigen::MatrixXd value;
  Flavor flavor = Flavor::Strat;
};

struct Level3Tensor {
  double a = 0.0;
  double b = 0.0;
  int d = 0;
  std::vector<double> value;  ///< d^3 entries, (i, j, k) at (i d + j) d + k
  Flavor flavor = Flavor::Strat;
  double operator()(int i, int j, int k) const {
    return value[static_cast<std::size_t>((i * d + j) * d + k)];
  }
  double norm() const;
};

/// Iterated integrals of the linear interpolant on [a, b], composed cell by
/// cell with Chen's rule. Throws NodeMismatch if a or b is off the grid and
/// Ordering if b < a.
Level2Tensor level2(const FbmPath& path, double a, double b);
Level3Tensor level3(const FbmPath& path, double a, double b, Flavor flavor = Flavor::Strat);

/// Wick-renormalized level 2: each product of increments loses its
/// expectation (from covariance_closed), which removes K(2alpha)|b-a|^2H
/// from the diagonal and nothing off it. Throws NegativeTimeDomain if a < 0.
Level2Tensor level2_skorohod(const FbmPath& path, double a, double b, const HurstParams& p);

/// X2_ab - X2_ac - X2_cb - (X_b - X_c)(x)(X_c - X_a). With conventional set,
/// the usual signature order is used instead: S2_ab - S2_ac - S2_cb -
/// (X_c - X_a)(x)(X_b - X_c). For the Skorohod flavor the cross product is
/// Wick-ordered as well. Throws Ordering unless a <= c <= b.
Eigen::MatrixXd chen_check(const FbmPath& path, double a, double c, double b,
                           bool conventional = false, Flavor flavor = Flavor::Strat);

}  // namespace fracflow
