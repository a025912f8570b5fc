#pragma once

#include <array>
#include <cstdint>

namespace fracflow {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011 constants).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Stream identifier for a (seed, path, dimension) triple.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t dim);

/// Standard normals addressed by (counter, lane). Draws are pure functions of
/// the stream and the address, so any subset can be generated in any order.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  NormalStream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t dim) noexcept
      : NormalStream(derive_stream(seed, path_index, dim)) {}

  /// Box-Muller pair from one Philox block.
  std::array<double, 2> pair(std::uint64_t counter, std::uint32_t lane = 0) const noexcept;
  double normal(std::uint64_t counter, std::uint32_t lane = 0) const noexcept {
    return pair(counter, lane)[0];
  }
  /// Uniform on (0, 1).
  double uniform(std::uint64_t counter, std::uint32_t lane = 0) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace fracflow
