#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracflow/hurst.hpp"

namespace fracflow {

enum class Method { Exact, Kernel, Mollified, Poisson, Gamma, PiecewiseLinear };

std::string to_string(Method m);
/// Inverse of to_string; throws InvalidArgument.
Method method_from_string(const std::string& s);

/// Synthesis tag: the method plus its regularization parameter
/// (R for kernel, width for mollified, y for Poisson, lambda for Gamma).
struct MethodTag {
  Method method = Method::Exact;
  double parameter = 0.0;
  std::string describe() const;
};

/// d-dimensional path sampled on a strictly increasing time grid.
struct FbmPath {
  std::vector<double> times;
  Eigen::MatrixXd values;  ///< d x n
  HurstParams params{0.5};
  MethodTag method;
  std::optional<std::uint64_t> noise_seed;

  Eigen::Index dimension() const { return values.rows(); }
  std::size_t size() const { return times.size(); }
  /// Index of time t on the grid (to 1e-12 relative), if present.
  std::optional<std::size_t> find(double t) const;
  /// Index of t; throws MissingSample otherwise.
  std::size_t index_of(double t) const;
};

/// CSV with header time,dim0,dim1,... and shortest round-trip decimals.
void write_path_csv(const FbmPath& path, const std::string& file);
std::string path_csv(const FbmPath& path);
FbmPath read_path_csv(const std::string& file, double hurst);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace fracflow
