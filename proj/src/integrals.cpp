#include "fracflow/integrals.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fracflow/error.hpp"

namespace fracflow {

std::string to_string(IntegralKind k) {
  switch (k) {
    case IntegralKind::Riemann: return "riemann";
    case IntegralKind::YoungPl: return "young_pl";
    case IntegralKind::Skorohod: return "skorohod";
    case IntegralKind::Stratonovich: return "stratonovich";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd sample_at(const FbmPath& path, double t) {
  return path.values.col(static_cast<Eigen::Index>(path.index_of(t)));
}

Eigen::VectorXd phi_at(const HolderFunction& phi, double t) {
  const auto& ts = phi.times();
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  const auto it = std::lower_bound(ts.begin(), ts.end(), t - tol);
  if (it == ts.end() || std::abs(*it - t) > tol) {
    throw Error(ErrorCode::MissingSample, "integrand not sampled at an evaluation point");
  }
  return phi.values().row(it - ts.begin()).transpose();
}

void require_midpoint(const PartitionSpec& part) {
  if (part.rule() != TauRule::Midpoint) {
    throw Error(ErrorCode::InvalidArgument, "midpoint evaluation rule required");
  }
}

double pow2h(double x, double h2) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), h2); }

// n-point Gauss-Legendre nodes/weights on [0, 1].
template <int N>
void gl_unit(std::vector<double>& x, std::vector<double>& w) {
  using GL = boost::math::quadrature::gauss<double, N>;
  const auto& ab = GL::abscissa();
  const auto& wt = GL::weights();
  for (std::size_t k = 0; k < ab.size(); ++k) {
    const double s = ab[k];
    if (s == 0.0) {
      x.push_back(0.5);
      w.push_back(0.5 * wt[k]);
    } else {
      x.push_back(0.5 * (1.0 - s));
      w.push_back(0.5 * wt[k]);
      x.push_back(0.5 * (1.0 + s));
      w.push_back(0.5 * wt[k]);
    }
  }
}

}  // namespace

Eigen::MatrixXd riemann_sum(const HolderFunction& phi, const FbmPath& path,
                            const PartitionSpec& part) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(phi.dimension(), path.dimension());
  Eigen::VectorXd prev = sample_at(path, part.nodes()[0]);
  for (std::size_t i = 0; i < part.cells(); ++i) {
    const Eigen::VectorXd next = sample_at(path, part.nodes()[i + 1]);
    acc += phi_at(phi, part.tau(i)) * (next - prev).transpose();
    prev = next;
  }
  return acc;
}

Eigen::MatrixXd riemann_sum(const Polynomial& f, const FbmPath& path, const PartitionSpec& part) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(f.outputs(), path.dimension());
  Eigen::VectorXd prev = sample_at(path, part.nodes()[0]);
  for (std::size_t i = 0; i < part.cells(); ++i) {
    const Eigen::VectorXd next = sample_at(path, part.nodes()[i + 1]);
    acc += f(sample_at(path, part.tau(i))) * (next - prev).transpose();
    prev = next;
  }
  return acc;
}

Eigen::MatrixXd young_pl_integral(const Polynomial& f, const FbmPath& path,
                                  const PartitionSpec& part) {
  // Integrand along a segment is a polynomial of degree deg(F) in s.
  std::vector<double> xs, ws;
  const int deg = f.degree();
  if (deg <= 9) {
    gl_unit<5>(xs, ws);
  } else if (deg <= 39) {
    gl_unit<20>(xs, ws);
  } else {
    throw Error(ErrorCode::InvalidArgument, "polynomial degree above 39");
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(f.outputs(), path.dimension());
  Eigen::VectorXd prev = sample_at(path, part.nodes()[0]);
  for (std::size_t i = 0; i < part.cells(); ++i) {
    const Eigen::VectorXd next = sample_at(path, part.nodes()[i + 1]);
    const Eigen::VectorXd delta = next - prev;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(f.outputs());
    for (std::size_t k = 0; k < xs.size(); ++k) mean += ws[k] * f(prev + xs[k] * delta);
    acc += mean * delta.transpose();
    prev = next;
  }
  return acc;
}

Eigen::MatrixXd trace_correction(const Polynomial& f, const FbmPath& path, const HurstParams& p,
                                 double a, double b) {
  if (a < 0.0) throw Error(ErrorCode::NegativeTimeDomain, "correction needs a >= 0");
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "correction needs a < b");
  const std::size_t i0 = path.index_of(a);
  const std::size_t i1 = path.index_of(b);
  const double h2 = 2.0 * p.hurst();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(f.outputs(), path.dimension());
  Eigen::MatrixXd jac_prev = f.jacobian(path.values.col(static_cast<Eigen::Index>(i0)));
  for (std::size_t k = i0; k < i1; ++k) {
    const double t0 = path.times[k];
    const double t1 = path.times[k + 1];
    const Eigen::MatrixXd jac_next = f.jacobian(path.values.col(static_cast<Eigen::Index>(k + 1)));
    // int t^(2H-1) over the cell and against the hat rising to t1.
    const double m0 = (pow2h(t1, h2) - pow2h(t0, h2)) / h2;
    const double m1 = (std::pow(t1, h2 + 1.0) - std::pow(t0, h2 + 1.0)) / (h2 + 1.0);
    const double w_right = (m1 - t0 * m0) / (t1 - t0);
    const double w_left = m0 - w_right;
    acc += w_left * jac_prev + w_right * jac_next;
    jac_prev = jac_next;
  }
  return h2 * p.k_2alpha() * acc;
}

Eigen::MatrixXd correction_discrete(const Polynomial& f, const FbmPath& path,
                                    const PartitionSpec& part, const HurstParams& p) {
  const double h2 = 2.0 * p.hurst();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(f.outputs(), path.dimension());
  for (std::size_t i = 0; i < part.cells(); ++i) {
    const double t0 = part.nodes()[i];
    const double t1 = part.nodes()[i + 1];
    const double tau = part.tau(i);
    const double bracket =
        pow2h(t1, h2) - pow2h(t0, h2) - pow2h(t1 - tau, h2) + pow2h(t0 - tau, h2);
    acc += bracket * f.jacobian(sample_at(path, tau));
  }
  return p.k_2alpha() * acc;
}

IntegralResult skorohod_integral(const Polynomial& f, const FbmPath& path,
                                 const PartitionSpec& part, const HurstParams& p) {
  require_midpoint(part);
  const Eigen::MatrixXd corr = trace_correction(f, path, p, part.a(), part.b());
  const Eigen::MatrixXd sum = riemann_sum(f, path, part);
  return {sum - corr, IntegralKind::Skorohod, part, corr};
}

IntegralResult stratonovich_integral(const Polynomial& f, const FbmPath& path,
                                     const PartitionSpec& part, const HurstParams& /*p*/) {
  require_midpoint(part);
  const Eigen::MatrixXd sum = riemann_sum(f, path, part);
  return {sum, IntegralKind::Stratonovich, part,
          Eigen::MatrixXd::Zero(sum.rows(), sum.cols())};
}

double riemann_l2_discrepancy(const std::vector<double>& phi_nodes, double a, double b,
                              std::size_t cells, const HurstParams& p) {
  if (a < 0.0) throw Error(ErrorCode::NegativeTimeDomain, "need a >= 0");
  if (phi_nodes.size() < 3 || cells == 0) throw Error(ErrorCode::NodeMismatch, "too few samples");
  const std::size_t m = phi_nodes.size() - 1;
  if (m % (2 * cells) != 0) {
    throw Error(ErrorCode::NodeMismatch, "partition nodes and midpoints must be phi nodes");
  }
  // Var of a zero-mass signed measure mu applied to X is
  // -K(2alpha) int int |s - r|^2H dmu dmu. Here mu puts a_j at grid point j
  // (Riemann sum, plus phi(b) X_b - phi(a) X_a from integrating by parts),
  // phi'_q ds on grid cell q, and the balancing mass at 0.
  const double h = (b - a) / static_cast<double>(m);
  const double h2 = 2.0 * p.hurst();
  const long mm = static_cast<long>(m);
  std::vector<double> point(m + 1, 0.0);
  const std::size_t stride = m / cells;
  for (std::size_t i = 0; i < cells; ++i) {
    const double f = phi_nodes[i * stride + stride / 2];
    point[i * stride] -= f;
    point[(i + 1) * stride] += f;
  }
  point[m] -= phi_nodes[m];
  point[0] += phi_nodes[0];
  std::vector<double> slope(m);
  double mass = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    slope[q] = (phi_nodes[q + 1] - phi_nodes[q]) / h;
    mass += slope[q] * h;
  }
  for (double v : point) mass += v;
  // Points: grid points j (time a + j h) plus the origin with -mass.
  auto pw = [h2](double x) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), h2); };
  auto q1 = [h2](double x) {
    return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), h2 + 1.0), x) / (h2 + 1.0);
  };
  auto q2 = [h2](double x) {
    return x == 0.0 ? 0.0 : std::pow(std::abs(x), h2 + 2.0) / ((h2 + 1.0) * (h2 + 2.0));
  };
  // Offsets: cell q against point j depends on q - j only.
  std::vector<double> pc(2 * m + 1);
  for (long k = -mm; k <= mm; ++k) {
    pc[static_cast<std::size_t>(k + mm)] =
        q1(static_cast<double>(k + 1) * h) - q1(static_cast<double>(k) * h);
  }
  std::vector<double> cc(m);
  for (long k = 0; k < mm; ++k) {
    const double x = static_cast<double>(k) * h;
    cc[static_cast<std::size_t>(k)] = q2(x + h) - 2.0 * q2(x) + q2(x - h);
  }
  double pp = 0.0, pcs = 0.0, ccs = 0.0;
  std::vector<long> pts;
  for (std::size_t j = 0; j <= m; ++j) {
    if (point[j] != 0.0) pts.push_back(static_cast<long>(j));
  }
  for (long j : pts) {
    for (long k : pts) {
      pp += point[static_cast<std::size_t>(j)] * point[static_cast<std::size_t>(k)] *
            pw(static_cast<double>(j - k) * h);
    }
    pp -= 2.0 * mass * point[static_cast<std::size_t>(j)] * pw(a + static_cast<double>(j) * h);
    double acc = 0.0;
    for (long q = 0; q < mm; ++q) acc += slope[static_cast<std::size_t>(q)] * pc[static_cast<std::size_t>(q - j + mm)];
    pcs += point[static_cast<std::size_t>(j)] * acc;
  }
  // Origin against cells.
  double origin = 0.0;
  for (long q = 0; q < mm; ++q) {
    const double lo = a + static_cast<double>(q) * h;
    origin += slope[static_cast<std::size_t>(q)] * (q1(lo + h) - q1(lo));
  }
  pcs -= mass * origin;
  for (long q = 0; q < mm; ++q) {
    double acc = slope[static_cast<std::size_t>(q)] * cc[0];
    for (long r = 0; r < q; ++r) {
      acc += 2.0 * slope[static_cast<std::size_t>(r)] * cc[static_cast<std::size_t>(q - r)];
    }
    ccs += slope[static_cast<std::size_t>(q)] * acc;
  }
  // mu = points - mass delta_0 + slope ds
  const double quad = pp + 2.0 * pcs + ccs;
  return std::sqrt(std::max(0.0, -p.k_2alpha() * quad));
}

}  // namespace fracflow
