#include "fracflow/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "fracflow/error.hpp"

namespace fracflow {

Polynomial::Polynomial(int inputs, std::vector<std::vector<Term>> outputs)
    : inputs_(inputs), terms_(std::move(outputs)) {
  if (inputs < 1) throw Error(ErrorCode::InvalidArgument, "polynomial needs >= 1 input");
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial needs >= 1 output");
  for (const auto& out : terms_) {
    for (const auto& t : out) {
      if (static_cast<int>(t.powers.size()) != inputs) {
        throw Error(ErrorCode::InvalidArgument, "exponent vector length must equal input count");
      }
      if (std::any_of(t.powers.begin(), t.powers.end(), [](int k) { return k < 0; })) {
        throw Error(ErrorCode::InvalidArgument, "negative exponent");
      }
    }
  }
}

Polynomial Polynomial::univariate(const std::vector<double>& coeffs) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) out.push_back({coeffs[k], {static_cast<int>(k)}});
  }
  return Polynomial(1, {out});
}

Polynomial Polynomial::identity(int d) {
  std::vector<std::vector<Term>> outs(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<int> pw(static_cast<std::size_t>(d), 0);
    pw[static_cast<std::size_t>(i)] = 1;
    outs[static_cast<std::size_t>(i)].push_back({1.0, pw});
  }
  return Polynomial(d, outs);
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& out : terms_) {
    for (const auto& t : out) {
      int s = 0;
      for (int k : t.powers) s += k;
      deg = std::max(deg, s);
    }
  }
  return deg;
}

namespace {

double monomial(const std::vector<int>& powers, const Eigen::VectorXd& x) {
  double v = 1.0;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    for (int k = 0; k < powers[j]; ++k) v *= x(static_cast<Eigen::Index>(j));
  }
  return v;
}

}  // namespace

Eigen::VectorXd Polynomial::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != inputs_) throw Error(ErrorCode::InvalidArgument, "polynomial input size");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(outputs());
  for (int i = 0; i < outputs(); ++i) {
    for (const auto& t : terms_[static_cast<std::size_t>(i)]) y(i) += t.coef * monomial(t.powers, x);
  }
  return y;
}

Eigen::MatrixXd Polynomial::jacobian(const Eigen::VectorXd& x) const {
  if (x.size() != inputs_) throw Error(ErrorCode::InvalidArgument, "polynomial input size");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(outputs(), inputs_);
  for (int i = 0; i < outputs(); ++i) {
    for (const auto& t : terms_[static_cast<std::size_t>(i)]) {
      for (int j = 0; j < inputs_; ++j) {
        const int k = t.powers[static_cast<std::size_t>(j)];
        if (k == 0) continue;
        std::vector<int> pw = t.powers;
        --pw[static_cast<std::size_t>(j)];
        jac(i, j) += t.coef * k * monomial(pw, x);
      }
    }
  }
  return jac;
}

Polynomial Polynomial::derivative(int j) const {
  if (j < 0 || j >= inputs_) throw Error(ErrorCode::InvalidArgument, "derivative index");
  std::vector<std::vector<Term>> outs(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (const auto& t : terms_[i]) {
      const int k = t.powers[static_cast<std::size_t>(j)];
      if (k == 0) continue;
      Term d = t;
      d.coef *= k;
      --d.powers[static_cast<std::size_t>(j)];
      outs[i].push_back(d);
    }
  }
  return Polynomial(inputs_, outs);
}

Polynomial Polynomial::combine(double a, const Polynomial& f, double b, const Polynomial& g) {
  if (f.inputs_ != g.inputs_ || f.outputs() != g.outputs()) {
    throw Error(ErrorCode::InvalidArgument, "polynomial shapes differ");
  }
  std::vector<std::vector<Term>> outs(f.terms_.size());
  for (std::size_t i = 0; i < outs.size(); ++i) {
    for (auto t : f.terms_[i]) outs[i].push_back({a * t.coef, t.powers});
    for (auto t : g.terms_[i]) outs[i].push_back({b * t.coef, t.powers});
  }
  return Polynomial(f.inputs_, outs);
}

}  // namespace fracflow
