#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fracflow/error.hpp"
#include "fracflow/noise_field.hpp"

using namespace fracflow;

TEST_CASE("level_for_step") {
  CHECK(NoiseField::level_for_step(1.0, 1.0) == 1);
  CHECK(NoiseField::level_for_step(1.0, 0.25) == 3);
  CHECK(NoiseField::level_for_step(1.0, 0.2) == 4);
  CHECK(NoiseField::level_for_step(50.0, 1.0 / 64) == 13);
}

TEST_CASE("parents are sums of children") {
  const NoiseField f(3, 2.0, 8, 2);
  for (int d = 0; d < 2; ++d) {
    for (int level = 0; level < 8; ++level) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); i += 5) {
        const double parent = f.block_sum(d, level, i);
        const double kids = f.block_sum(d, level + 1, 2 * i) + f.block_sum(d, level + 1, 2 * i + 1);
        CHECK(parent == doctest::Approx(kids).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("dense field agrees with the tree") {
  NoiseField f(11, 1.0, 6, 1);
  std::vector<double> tree;
  for (std::uint64_t j = 0; j < f.cells(); ++j) tree.push_back(f.block_sum(0, 6, j));
  f.materialize();
  REQUIRE(f.dense());
  const double* inc = f.increments(0);
  for (std::uint64_t j = 0; j < f.cells(); ++j) CHECK(inc[j] == doctest::Approx(tree[j]).epsilon(1e-12));
  const std::vector<DyadicBlock> blocks{{1, 0, -1.0, 0.0}, {2, 2, 0.0, 0.5}, {3, 6, 0.5, 0.75},
                                        {3, 7, 0.75, 1.0}};
  double sums[4];
  f.block_sums(0, blocks, sums);
  double sum_right = 0;
  for (std::uint64_t j = 32; j < 64; ++j) sum_right += inc[j];
  CHECK(sums[1] + sums[2] + sums[3] == doctest::Approx(sum_right).epsilon(1e-12));
  CHECK(sums[0] == doctest::Approx(f.block_sum(0, 1, 0)).epsilon(1e-12));
}

TEST_CASE("leaf increments are N(0, h) and independent") {
  const NoiseField f(5, 4.0, 14, 1);
  const double h = f.step();
  double s2 = 0, lag = 0;
  double prev = f.block_sum(0, 14, 0);
  s2 += prev * prev;
  for (std::uint64_t j = 1; j < f.cells(); ++j) {
    const double x = f.block_sum(0, 14, j);
    s2 += x * x;
    lag += x * prev;
    prev = x;
  }
  const double n = static_cast<double>(f.cells());
  CHECK(std::abs(s2 / (n * h) - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(lag / (n * h)) < 4.0 / std::sqrt(n));
}

TEST_CASE("binary round trip") {
  NoiseField f(99, 1.5, 5, 3, 4);
  f.materialize();
  const auto file = std::filesystem::temp_directory_path() / "fracflow_noise_test.fnf";
  f.write(file.string());
  const NoiseField g = NoiseField::read(file.string());
  CHECK(g.seed() == 99);
  CHECK(g.radius() == 1.5);
  CHECK(g.level() == 5);
  CHECK(g.dimension() == 3);
  for (int d = 0; d < 3; ++d)
    for (std::uint64_t j = 0; j < f.cells(); ++j) CHECK(g.increments(d)[j] == f.increments(d)[j]);
  {
    std::ofstream os(file, std::ios::binary);
    os << "FNF1abc";
  }
  CHECK_THROWS_AS(NoiseField::read(file.string()), Error);
  std::filesystem::remove(file);
  CHECK_THROWS_AS(NoiseField::read(file.string()), Error);
}

TEST_CASE("argument errors") {
  const NoiseField f(1, 1.0, 4, 1);
  CHECK_THROWS_AS(f.increments(0), Error);
  CHECK_THROWS_AS(f.block_sum(1, 0, 0), Error);
  CHECK_THROWS_AS(NoiseField(1, -1.0, 4, 1), Error);
  CHECK_THROWS_AS(NoiseField(1, 1.0, 4, 0), Error);
}
