#pragma once

#include <cstdint>
#include <vector>

#include "fracflow/exact_sampler.hpp"
#include "fracflow/kernel_synthesis.hpp"
#include "fracflow/partition.hpp"

namespace fracflow {

struct Mollifier {
  enum class Shape { Triangle, Gaussian };
  Shape shape = Shape::Triangle;
  /// Half-width of the triangle, standard deviation of the Gaussian.
  double width = 0.1;
};

/// S_t * rho. Far from the singular points (beyond 20 widths) the smoothing
/// is applied through its second-moment expansion; near them the triangle
/// uses third antiderivatives of S and the Gaussian a graded quadrature.
KernelFamily mollified_family(const HurstParams& p, Mollifier rho);

/// S_t * rho_y with rho_y(t) = y / (pi (t^2 + y^2)), in closed form through
/// the harmonic extension K(alpha) Re((y - ix)^(alpha-1)) / sin(pi alpha/2)
/// (or -ln|x + iy| / pi at alpha = 1). Throws NonpositiveY.
KernelFamily poisson_family(const HurstParams& p, double y);

/// Pointwise (S_t * rho_y)(u); harmonic in (t, y).
double poisson_weight(double t, double u, double y, const HurstParams& p);

FbmPath synth_mollified(const std::vector<double>& times, const HurstParams& p,
                        const NoiseField& noise, Mollifier rho);

/// d must be 1. Throws NonpositiveY.
FbmPath synth_poisson(const std::vector<double>& times, const HurstParams& p,
                      const NoiseField& noise, double y);

/// Interpolate the path linearly between partition nodes and resample on
/// the path's own times. Throws NodeMismatch when a node is not on the grid.
FbmPath piecewise_linear(const FbmPath& path, const PartitionSpec& part);

}  // namespace fracflow
