#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fracflow {

/// Vector-valued polynomial F: R^d -> R^m stored as monomial lists per
/// output coordinate.
class Polynomial {
 public:
  struct Term {
    double coef;
    std::vector<int> powers;  ///< one exponent per input coordinate
  };

  /// Throws InvalidArgument on mismatched exponent lengths or negative powers.
  Polynomial(int inputs, std::vector<std::vector<Term>> outputs);

  /// Scalar polynomial in one variable: sum_k coeffs[k] x^k.
  static Polynomial univariate(const std::vector<double>& coeffs);
  /// Identity map x -> x on R^d.
  static Polynomial identity(int d);

  int inputs() const { return inputs_; }
  int outputs() const { return static_cast<int>(terms_.size()); }
  int degree() const;
  const std::vector<std::vector<Term>>& terms() const { return terms_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  /// m x d matrix of partial derivatives, exact.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  /// Partial derivative polynomial d/dx_j, by coefficient shifting.
  Polynomial derivative(int j) const;

  /// a F + b G (same shapes).
  static Polynomial combine(double a, const Polynomial& f, double b, const Polynomial& g);

 private:
  int inputs_;
  std::vector<std::vector<Term>> terms_;
};

}  // namespace fracflow
