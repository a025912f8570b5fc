#include "fracflow/rough_path.hpp"

#include <cmath>

#include "fracflow/error.hpp"
#include "fracflow/kernels.hpp"

namespace fracflow {

namespace {

struct Span {
  std::size_t i0;
  std::size_t i1;
};

Span locate(const FbmPath& path, double a, double b) {
  if (b < a) throw Error(ErrorCode::Ordering, "interval end before start");
  const auto i0 = path.find(a);
  const auto i1 = path.find(b);
  if (!i0 || !i1) throw Error(ErrorCode::NodeMismatch, "interval ends must be grid nodes");
  return {*i0, *i1};
}

// Truncated signature in the usual order (s1 earliest increment first).
struct Signature {
  Eigen::VectorXd s1;
  Eigen::MatrixXd s2;
  std::vector<double> s3;
  int d;

  explicit Signature(int dim, bool third)
      : s1(Eigen::VectorXd::Zero(dim)), s2(Eigen::MatrixXd::Zero(dim, dim)), d(dim) {
    if (third) s3.assign(static_cast<std::size_t>(dim * dim * dim), 0.0);
  }

  double& at3(int i, int j, int k) { return s3[static_cast<std::size_t>((i * d + j) * d + k)]; }

  // this <- this (x) segment(delta)
  void append(const Eigen::VectorXd& delta) {
    if (!s3.empty()) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          for (int k = 0; k < d; ++k) {
            at3(i, j, k) += s2(i, j) * delta(k) + s1(i) * delta(j) * delta(k) / 2.0 +
                            delta(i) * delta(j) * delta(k) / 6.0;
          }
        }
      }
    }
    s2 += s1 * delta.transpose() + delta * delta.transpose() / 2.0;
    s1 += delta;
  }
};

Signature signature(const FbmPath& path, Span s, bool third) {
  Signature sig(static_cast<int>(path.dimension()), third);
  for (std::size_t k = s.i0; k < s.i1; ++k) {
    sig.append(path.values.col(static_cast<Eigen::Index>(k + 1)) -
               path.values.col(static_cast<Eigen::Index>(k)));
  }
  return sig;
}

// Covariance of the increments of one coordinate over grid cells p and q.
double increment_cov(const FbmPath& path, std::size_t p, std::size_t q, const HurstParams& hp) {
  const double a = path.times[p], b = path.times[p + 1];
  const double c = path.times[q], d = path.times[q + 1];
  const double h2 = 2.0 * hp.hurst();
  auto g = [h2](double x) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), h2); };
  return hp.k_2alpha() * (g(d - a) + g(c - b) - g(d - b) - g(c - a));
}

}  // namespace

double Level3Tensor::norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return std::sqrt(s);
}

Level2Tensor level2(const FbmPath& path, double a, double b) {
  const Span s = locate(path, a, b);
  const Signature sig = signature(path, s, false);
  return {a, b, sig.s2.transpose(), Flavor::Strat};
}

Level2Tensor level2_skorohod(const FbmPath& path, double a, double b, const HurstParams& p) {
  if (a < 0.0) throw Error(ErrorCode::NegativeTimeDomain, "Skorohod tensors need a >= 0");
  Level2Tensor t = level2(path, a, b);
  t.value.diagonal().array() -= 0.5 * covariance_closed(b - a, b - a, p);
  t.flavor = Flavor::Skorohod;
  return t;
}

Level3Tensor level3(const FbmPath& path, double a, double b, Flavor flavor) {
  const Span s = locate(path, a, b);
  Signature sig = signature(path, s, true);
  const int d = sig.d;
  if (flavor == Flavor::Skorohod) {
    if (a < 0.0) throw Error(ErrorCode::NegativeTimeDomain, "Skorohod tensors need a >= 0");
    // Wick renormalization of sum_{p<=q<=r} w(p,q,r) D_i(p) D_j(q) D_k(r),
    // w = 1, 1/2 (one tie), 1/6 (all equal). Each pairing contributes the
    // increment covariance times the remaining increment.
    const std::size_t n = s.i1 - s.i0;
    std::vector<Eigen::VectorXd> inc(n);
    for (std::size_t k = 0; k < n; ++k) {
      inc[k] = path.values.col(static_cast<Eigen::Index>(s.i0 + k + 1)) -
               path.values.col(static_cast<Eigen::Index>(s.i0 + k));
    }
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q <= p; ++q) {
        c(p, q) = c(q, p) = increment_cov(path, s.i0 + p, s.i0 + q, path.params);
      }
    }
    // c12[r] = sum_{p<=q<=r} w c(p,q); c23[p] = sum_{p<=q<=r} w c(q,r);
    // c13[q] = sum_{p<=q<=r} w c(p,r).
    std::vector<double> c12(n, 0.0), c23(n, 0.0), c13(n, 0.0);
    std::vector<double> upper(n, 0.0);  // sum_{p<q} c(p,q)
    std::vector<double> lower(n, 0.0);  // sum_{r>q} c(q,r)
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < q; ++p) upper[q] += c(p, q);
      for (std::size_t r = q + 1; r < n; ++r) lower[q] += c(q, r);
    }
    double run_upper = 0.0, run_diag = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      c12[r] = run_upper + 0.5 * run_diag + 0.5 * upper[r] + c(r, r) / 6.0;
      run_upper += upper[r];
      run_diag += c(r, r);
    }
    double run_lower = 0.0;
    run_diag = 0.0;
    for (std::size_t p = n; p-- > 0;) {
      c23[p] = run_lower + 0.5 * run_diag + 0.5 * lower[p] + c(p, p) / 6.0;
      run_lower += lower[p];
      run_diag += c(p, p);
    }
    // cross(q) = sum_{p<q<r} c(p,r) obeys cross(q+1) = cross(q) - upper[q+1] + lower[q].
    double cross = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q > 0) cross += lower[q - 1] - upper[q];
      c13[q] = cross + 0.5 * lower[q] + 0.5 * upper[q] + c(q, q) / 6.0;
    }
    for (std::size_t m = 0; m < n; ++m) {
      for (int x = 0; x < d; ++x) {
        for (int y = 0; y < d; ++y) {
          sig.at3(x, x, y) -= c12[m] * inc[m](y);
          sig.at3(y, x, x) -= c23[m] * inc[m](y);
          sig.at3(x, y, x) -= c13[m] * inc[m](y);
        }
      }
    }
  }
  Level3Tensor out{a, b, d, std::vector<double>(sig.s3.size()), flavor};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        out.value[static_cast<std::size_t>((i * d + j) * d + k)] = sig.at3(k, j, i);
      }
    }
  }
  return out;
}

Eigen::MatrixXd chen_check(const FbmPath& path, double a, double c, double b, bool conventional,
                           Flavor flavor) {
  if (!(a <= c && c <= b)) throw Error(ErrorCode::Ordering, "chen_check needs a <= c <= b");
  auto tensor = [&](double x, double y) {
    if (flavor == Flavor::Skorohod) return level2_skorohod(path, x, y, path.params).value;
    return level2(path, x, y).value;
  };
  const Eigen::VectorXd xa = path.values.col(static_cast<Eigen::Index>(path.index_of(a)));
  const Eigen::VectorXd xc = path.values.col(static_cast<Eigen::Index>(path.index_of(c)));
  const Eigen::VectorXd xb = path.values.col(static_cast<Eigen::Index>(path.index_of(b)));
  Eigen::MatrixXd ab = tensor(a, b), ac = tensor(a, c), cb = tensor(c, b);
  Eigen::MatrixXd cross = conventional ? Eigen::MatrixXd((xc - xa) * (xb - xc).transpose())
                                       : Eigen::MatrixXd((xb - xc) * (xc - xa).transpose());
  if (flavor == Flavor::Skorohod) {
    // The cross product is Wick-ordered too: drop E[(X_b - X_c)(X_c - X_a)].
    const auto v = [&](double h) { return covariance_closed(h, h, path.params); };
    cross.diagonal().array() -= 0.5 * (v(b - a) - v(b - c) - v(c - a));
  }
  if (conventional) {
    ab.transposeInPlace();
    ac.transposeInPlace();
    cb.transposeInPlace();
  }
  return ab - ac - cb - cross;
}

}  // namespace fracflow
