#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace pna {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// An n x m matrix of p_i * l_j coefficients; also the shape of each
// coefficient matrix v_i of a bilinear vector payoff.
using PayoffMatrix = Eigen::MatrixXd;

// Outer-product embedding of an (action, loss) pair into R^{n x m}.
template <class DerivedP, class DerivedL>
auto basisMap(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedL>& l) {
  return p * l.transpose();
}

// max(max_i x_i, 0): distance of x to the negative orthant in the sup norm.
template <class Derived>
double linfDistanceToOrthant(const Eigen::MatrixBase<Derived>& x) {
  return x.size() == 0 ? 0.0 : std::max(x.maxCoeff(), 0.0);
}

// Bilinear vector payoff u_i(p, l) = <v_i, p l^T> given by d dense
// coefficient matrices over R^{n x m}.
struct ExplicitPayoff {
  std::vector<PayoffMatrix> coeffs;  // the v_i, each n x m
  int n = 0;
  int m = 0;
  int d = 0;
  double coeffBound = 0.0;  // max absolute entry over all v_i
  double dualRadius = 0.0;  // max_i ||v_i||_2 (Frobenius norm of v_i)

  static ExplicitPayoff fromCoeffs(std::vector<PayoffMatrix> vs);

  // ũ(p, l) with instance shape validation.
  PayoffMatrix basisPoint(const Vector& p, const Vector& l) const;

  double coordinate(int i, const Vector& p, const Vector& l) const;
  Vector payoff(const Vector& p, const Vector& l) const;  // all d coordinates

  // max_i <v_i, z>: the support value of conv{v_i} at z (not clamped).
  double dualSup(const PayoffMatrix& z) const;
  int dualArgmax(const PayoffMatrix& z) const;

  // V as a d x (n*m) stack; row i is v_i flattened column-major.
  Matrix stacked() const;

  // V^T theta for theta over the d coefficients, reshaped to n x m.
  PayoffMatrix dualFromSimplex(const Vector& theta) const;

  void validateShapes(const Vector& p, const Vector& l) const;
};

// f(z) = max(max_i <v_i, z>, 0).
double pseudonormEval(const ExplicitPayoff& payoff, const PayoffMatrix& z);

// sup over conv{v_i} of <theta, z> = max_i <v_i, z>; may be negative.
// The approachability distance to the cone C = {z : <v_i, z> <= 0} is the
// clamp max(value, 0) of this support value.
double pseudodistanceToCone(const ExplicitPayoff& payoff, const PayoffMatrix& z);

// Scales lambda_k > 0 such that lambda_k * e_k lies in the loss set.
struct OrthantGenerators {
  Vector scales;

  static OrthantGenerators uniform(int m, double scale = 1.0);
  void validate() const;
};

inline Vector flatten(const PayoffMatrix& z) { return z.reshaped(); }

inline PayoffMatrix unflatten(const Vector& v, int n, int m) {
  if (v.size() != static_cast<Eigen::Index>(n) * m) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  return v.reshaped(n, m);
}

}  // namespace pna
