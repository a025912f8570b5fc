#include "fracflow/noise_field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fracflow/error.hpp"

namespace fracflow {

namespace {

constexpr int kMaxLevel = 40;
constexpr std::uint32_t kTailLane = 1;

struct Walker {
  const NormalStream& stream;
  const std::vector<double>& sd;
  const std::vector<DyadicBlock>& blocks;
  double* out;
  std::size_t cursor = 0;

  void visit(int level, std::uint64_t index, double sum) {
    if (cursor >= blocks.size()) {
      throw Error(ErrorCode::GridMismatch, "blocks do not cover [-R, R]");
    }
    const DyadicBlock& b = blocks[cursor];
    if (b.level == level) {
      if (b.index != index) throw Error(ErrorCode::GridMismatch, "blocks out of order");
      out[cursor++] = sum;
      return;
    }
    if (b.level < level) throw Error(ErrorCode::GridMismatch, "blocks overlap");
    const double z = stream.normal((std::uint64_t{1} << level) + index);
    const double half = 0.5 * sum;
    const double dev = sd[static_cast<std::size_t>(level)] * z;
    visit(level + 1, 2 * index, half + dev);
    visit(level + 1, 2 * index + 1, half - dev);
  }
};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw Error(ErrorCode::Io, "truncated noise file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw Error(ErrorCode::Io, "truncated noise file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

NoiseField::NoiseField(std::uint64_t seed, double radius, int level, int dimension,
                       std::uint64_t path_index)
    : seed_(seed), radius_(radius), level_(level), dimension_(dimension), path_index_(path_index) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "noise radius must be positive");
  }
  if (level < 0 || level > kMaxLevel) throw Error(ErrorCode::InvalidArgument, "noise level out of range");
  if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "noise dimension must be >= 1");
  node_sd_.resize(static_cast<std::size_t>(level) + 1);
  for (int l = 0; l <= level; ++l) {
    node_sd_[static_cast<std::size_t>(l)] = 0.5 * std::sqrt(std::ldexp(2.0 * radius, -l));
  }
  for (int j = 0; j < dimension; ++j) {
    streams_.emplace_back(seed, path_index, static_cast<std::uint64_t>(j));
  }
}

int NoiseField::level_for_step(double radius, double max_step) {
  if (!(max_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  int level = 0;
  while (std::ldexp(2.0 * radius, -level) > max_step) {
    if (++level > kMaxLevel) throw Error(ErrorCode::InvalidArgument, "step too small for radius");
  }
  return level;
}

void NoiseField::check_dim(int dim) const {
  if (dim < 0 || dim >= dimension_) throw Error(ErrorCode::InvalidArgument, "noise dimension index");
}

double NoiseField::block_sum(int dim, int level, std::uint64_t index) const {
  check_dim(dim);
  if (level < 0 || level > level_ || index >= (std::uint64_t{1} << level)) {
    throw Error(ErrorCode::GridMismatch, "dyadic node outside the noise tree");
  }
  if (dense()) {
    const std::uint64_t span = std::uint64_t{1} << (level_ - level);
    const double* pre = prefix_.data() + static_cast<std::size_t>(dim) * (cells() + 1);
    return pre[(index + 1) * span] - pre[index * span];
  }
  const NormalStream& s = streams_[static_cast<std::size_t>(dim)];
  double sum = std::sqrt(2.0 * radius_) * s.normal(0);
  for (int l = 0; l < level; ++l) {
    const std::uint64_t node = index >> (level - l);
    const bool right = (index >> (level - l - 1)) & 1u;
    const double dev = node_sd_[static_cast<std::size_t>(l)] * s.normal((std::uint64_t{1} << l) + node);
    sum = 0.5 * sum + (right ? -dev : dev);
  }
  return sum;
}

void NoiseField::block_sums(int dim, const std::vector<DyadicBlock>& blocks, double* out) const {
  check_dim(dim);
  if (dense()) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      out[i] = block_sum(dim, blocks[i].level, blocks[i].index);
    }
    return;
  }
  const NormalStream& s = streams_[static_cast<std::size_t>(dim)];
  Walker w{s, node_sd_, blocks, out};
  w.visit(0, 0, std::sqrt(2.0 * radius_) * s.normal(0));
  if (w.cursor != blocks.size()) throw Error(ErrorCode::GridMismatch, "blocks extend past [-R, R]");
}

double NoiseField::tail_normal(int dim, int side) const {
  check_dim(dim);
  return streams_[static_cast<std::size_t>(dim)].normal(static_cast<std::uint64_t>(side != 0),
                                                         kTailLane);
}

void NoiseField::materialize() {
  if (dense()) return;
  const std::uint64_t n = cells();
  const double h = step();
  std::vector<DyadicBlock> leaves(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    leaves[j] = {level_, j, cell_lo(j), cell_lo(j) + h};
  }
  std::vector<double> inc(n * static_cast<std::uint64_t>(dimension_));
  for (int d = 0; d < dimension_; ++d) {
    block_sums(d, leaves, inc.data() + static_cast<std::size_t>(d) * n);
  }
  increments_ = std::move(inc);
  build_prefix();
}

void NoiseField::build_prefix() {
  const std::uint64_t n = cells();
  prefix_.assign((n + 1) * static_cast<std::uint64_t>(dimension_), 0.0);
  for (int d = 0; d < dimension_; ++d) {
    const double* inc = increments_.data() + static_cast<std::size_t>(d) * n;
    double* pre = prefix_.data() + static_cast<std::size_t>(d) * (n + 1);
    for (std::uint64_t j = 0; j < n; ++j) pre[j + 1] = pre[j] + inc[j];
  }
}

const double* NoiseField::increments(int dim) const {
  check_dim(dim);
  if (!dense()) throw Error(ErrorCode::InvalidArgument, "noise field is not materialized");
  return increments_.data() + static_cast<std::size_t>(dim) * cells();
}

void NoiseField::write(const std::string& path) const {
  if (!dense()) throw Error(ErrorCode::InvalidArgument, "materialize the noise field before writing");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path);
  os.write("FNF1", 4);
  put_u64(os, seed_);
  put_f64(os, radius_);
  put_f64(os, step());
  put_u32(os, static_cast<std::uint32_t>(dimension_));
  for (double v : increments_) put_f64(os, v);
  if (!os) throw Error(ErrorCode::Io, "write failed: " + path);
}

NoiseField NoiseField::read(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "FNF1", 4) != 0) {
    throw Error(ErrorCode::Io, "not a noise file: " + path);
  }
  const std::uint64_t seed = get_u64(is);
  const double radius = get_f64(is);
  const double h = get_f64(is);
  const std::uint32_t d = get_u32(is);
  const int level = level_for_step(radius, h);
  NoiseField f(seed, radius, level, static_cast<int>(d));
  if (f.step() != h) throw Error(ErrorCode::GridMismatch, "step is not 2R / 2^level");
  std::vector<double> inc(f.cells() * d);
  for (double& v : inc) v = get_f64(is);
  f.increments_ = std::move(inc);
  f.build_prefix();
  return f;
}

}  // namespace fracflow
