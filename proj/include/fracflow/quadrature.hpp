#pragma once

#include <functional>
#include <vector>

#include "fracflow/hurst.hpp"

namespace fracflow::quad {

struct Panel {
  double lo;
  double hi;
};

inline constexpr double kGradingRatio = 0.5;
inline constexpr double kMinCell = 1e-12;

/// Split [lo, hi] into panels refined geometrically (ratio 1/2, smallest
/// cell kMinCell) toward whichever ends are flagged singular.
std::vector<Panel> graded_panels(double lo, double hi, bool singular_lo, bool singular_hi);

/// 20-point Gauss-Legendre on every panel.
double integrate(const std::function<double(double)>& f, const std::vector<Panel>& panels);

struct TruncatedIntegral {
  double value;
  double radius;         ///< final truncation radius R
  double tail_estimate;  ///< asymptotic contribution of |u| > R, already included
};

/// int S_t(u) S_s(u) du over the real line. Graded panels around {0, t, s},
/// truncation radius starting at 50 max(|t|, |s|, 1) and doubling until the
/// |u|^(2 alpha - 4) tail estimate falls below rel_tol of the running value.
TruncatedIntegral st_inner_product(double t, double s, const HurstParams& p,
                                   double rel_tol = 1e-9);

}  // namespace fracflow::quad
