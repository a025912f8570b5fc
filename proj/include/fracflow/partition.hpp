#pragma once

#include <vector>

namespace fracflow {

enum class TauRule { Left, Midpoint, Right, Custom };

/// Partition a = t_0 < ... < t_n = b of [a, b] with evaluation points.
class PartitionSpec {
 public:
  /// Throws InvalidArgument for fewer than 2 nodes, non-increasing nodes, or
  /// custom points outside their cells (or missing).
  PartitionSpec(std::vector<double> nodes, TauRule rule, std::vector<double> custom_taus = {});

  static PartitionSpec uniform(double a, double b, std::size_t cells, TauRule rule);

  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  std::size_t cells() const { return nodes_.size() - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  TauRule rule() const { return rule_; }
  double mesh() const { return mesh_; }
  double tau(std::size_t i) const;

 private:
  std::vector<double> nodes_;
  TauRule rule_;
  std::vector<double> taus_;
  double mesh_ = 0.0;
};

}  // namespace fracflow
