#pragma once

#include <Eigen/Dense>

#include "fracflow/fbm_path.hpp"
#include "fracflow/holder.hpp"
#include "fracflow/partition.hpp"
#include "fracflow/polynomial.hpp"

namespace fracflow {

enum class IntegralKind { Riemann, YoungPl, Skorohod, Stratonovich };

std::string to_string(IntegralKind k);

/// Matrix-valued results use the outer-product convention
/// value(i, j) = sum F_i(X_tau) dX_j; scalar integrals are 1 x 1.
struct IntegralResult {
  Eigen::MatrixXd value;
  IntegralKind kind;
  PartitionSpec partition;
  Eigen::MatrixXd correction;  ///< zero unless kind is Skorohod
};

/// sum_i phi(tau_i) (X_{t_{i+1}} - X_{t_i}). Throws MissingSample when a tau
/// or node is not sampled.
Eigen::MatrixXd riemann_sum(const HolderFunction& phi, const FbmPath& path,
                            const PartitionSpec& part);

/// Same sum with phi(tau) = F(X_tau).
Eigen::MatrixXd riemann_sum(const Polynomial& f, const FbmPath& path, const PartitionSpec& part);

/// int F(X_n) dX_n for the interpolant X_n of the path at the partition
/// nodes; exact per cell by Gauss-Legendre of sufficient order.
Eigen::MatrixXd young_pl_integral(const Polynomial& f, const FbmPath& path,
                                  const PartitionSpec& part);

/// 2H K(2alpha) int_a^b dF(X_t) t^(2H-1) dt, dF the Jacobian. The path is
/// read as linear between its samples and integrated against t^(2H-1) with
/// exact product weights. Throws NegativeTimeDomain for a < 0.
Eigen::MatrixXd trace_correction(const Polynomial& f, const FbmPath& path, const HurstParams& p,
                                 double a, double b);

/// K(2alpha) sum dF(X_tau) [|t_{i+1}|^2H - |t_i|^2H - |t_{i+1} - tau|^2H + |t_i - tau|^2H].
Eigen::MatrixXd correction_discrete(const Polynomial& f, const FbmPath& path,
                                    const PartitionSpec& part, const HurstParams& p);

/// Midpoint sum minus trace_correction. Throws InvalidArgument unless the
/// rule is midpoint, NegativeTimeDomain for a < 0.
IntegralResult skorohod_integral(const Polynomial& f, const FbmPath& path,
                                 const PartitionSpec& part, const HurstParams& p);

/// Midpoint sum.
IntegralResult stratonovich_integral(const Polynomial& f, const FbmPath& path,
                                     const PartitionSpec& part, const HurstParams& p);

/// L2 norm of sum_i phi(tau_i) (X_{t_{i+1}} - X_{t_i}) - int_a^b phi dX for a
/// deterministic phi and midpoints tau_i, computed exactly from the
/// covariance. phi is the linear interpolant of phi_nodes on the uniform grid
/// of [a, b] with phi_nodes.size() - 1 cells; that count must be a multiple
/// of 2 cells. By the isometry this is the L2(du) norm of the kernel-space
/// discrepancy. Throws NodeMismatch, NegativeTimeDomain.
double riemann_l2_discrepancy(const std::vector<double>& phi_nodes, double a, double b,
                              std::size_t cells, const HurstParams& p);

}  // namespace fracflow
