#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracflow/rng.hpp"

namespace fracflow {

/// Node of the dyadic tree over [-R, R]: level 0 is the whole interval, a
/// node at level l covers cell index range [index 2^(L-l), (index+1) 2^(L-l)).
struct DyadicBlock {
  int level;
  std::uint64_t index;
  double lo;
  double hi;
};

/// One realization of d-dimensional white noise on the uniform grid
/// -R = u_0 < ... < u_N = R, N = 2^level, step h = 2R/N.
///
/// Increments are generated top-down by Brownian-bridge splitting: the root
/// sum is N(0, 2R) and a node with sum S and width w splits into
/// S/2 +- (sqrt(w)/2) Z, Z ~ N(0, 1) drawn from the counter-based stream at
/// the node's heap index. The leaves are exactly i.i.d. N(0, h) and the sum
/// over any dyadic block costs one draw per tree node above it, so a kernel
/// can be integrated against a fine grid without materializing it.
///
/// A field may instead be dense (materialized or loaded from disk); block
/// sums then come from prefix sums of the stored increments.
class NoiseField {
 public:
  NoiseField(std::uint64_t seed, double radius, int level, int dimension,
             std::uint64_t path_index = 0);

  /// Smallest level whose step does not exceed max_step.
  static int level_for_step(double radius, double max_step);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_index() const noexcept { return path_index_; }
  double radius() const noexcept { return radius_; }
  int level() const noexcept { return level_; }
  int dimension() const noexcept { return dimension_; }
  std::uint64_t cells() const noexcept { return std::uint64_t{1} << level_; }
  double step() const noexcept { return 2.0 * radius_ / static_cast<double>(cells()); }
  double cell_lo(std::uint64_t j) const noexcept {
    return -radius_ + static_cast<double>(j) * step();
  }
  bool dense() const noexcept { return !increments_.empty(); }

  /// Sum of increments over one dyadic node.
  double block_sum(int dim, int level, std::uint64_t index) const;

  /// Sums over a partition of [-R, R] into dyadic nodes listed left to right.
  void block_sums(int dim, const std::vector<DyadicBlock>& blocks, double* out) const;

  /// Two extra N(0,1) draws per dimension standing for the noise beyond -R
  /// (side 0) and beyond R (side 1).
  double tail_normal(int dim, int side) const;

  /// Generate and store every leaf increment (2^level per dimension).
  void materialize();
  /// Leaf increments of one dimension. Throws InvalidArgument unless dense().
  const double* increments(int dim) const;

  /// Binary block: "FNF1", u64 seed, f64 R, f64 h, u32 d, then the
  /// increments row-major (dimension by dimension), all little-endian.
  void write(const std::string& path) const;
  static NoiseField read(const std::string& path);

 private:
  void check_dim(int dim) const;
  void build_prefix();

  std::uint64_t seed_;
  double radius_;
  int level_;
  int dimension_;
  std::uint64_t path_index_;
  std::vector<double> node_sd_;  // sqrt(width)/2 per level
  std::vector<NormalStream> streams_;
  std::vector<double> increments_;
  std::vector<double> prefix_;  // per dimension, cells + 1 entries
};

}  // namespace fracflow
