#include "fracflow/partition.hpp"

#include <algorithm>

#include "fracflow/error.hpp"

namespace fracflow {

PartitionSpec::PartitionSpec(std::vector<double> nodes, TauRule rule, std::vector<double> custom_taus)
    : nodes_(std::move(nodes)), rule_(rule), taus_(std::move(custom_taus)) {
  if (nodes_.size() < 2) throw Error(ErrorCode::InvalidArgument, "partition needs 2 nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "partition nodes must increase strictly");
    }
    mesh_ = std::max(mesh_, nodes_[i] - nodes_[i - 1]);
  }
  if (rule_ == TauRule::Custom) {
    if (taus_.size() != cells()) throw Error(ErrorCode::InvalidArgument, "one tau per cell required");
    for (std::size_t i = 0; i < cells(); ++i) {
      if (taus_[i] < nodes_[i] || taus_[i] > nodes_[i + 1]) {
        throw Error(ErrorCode::InvalidArgument, "tau outside its cell");
      }
    }
  }
}

PartitionSpec PartitionSpec::uniform(double a, double b, std::size_t cells, TauRule rule) {
  if (cells == 0 || !(b > a)) throw Error(ErrorCode::InvalidArgument, "empty partition");
  std::vector<double> nodes(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  nodes.back() = b;
  return PartitionSpec(std::move(nodes), rule);
}

double PartitionSpec::tau(std::size_t i) const {
  switch (rule_) {
    case TauRule::Left: return nodes_[i];
    case TauRule::Right: return nodes_[i + 1];
    case TauRule::Midpoint: return 0.5 * (nodes_[i] + nodes_[i + 1]);
    case TauRule::Custom: return taus_[i];
  }
  return nodes_[i];
}

}  // namespace fracflow
