#include "pna/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pna {

ExplicitPayoff ExplicitPayoff::fromCoeffs(std::vector<PayoffMatrix> vs) {
  if (vs.empty()) throw std::invalid_argument("ExplicitPayoff: need at least one coefficient matrix");
  ExplicitPayoff out;
  out.n = static_cast<int>(vs.front().rows());
  out.m = static_cast<int>(vs.front().cols());
  out.d = static_cast<int>(vs.size());
  if (out.n < 1 || out.m < 1) throw std::invalid_argument("ExplicitPayoff: empty matrix shape");
  out.coeffBound = 0.0;
  out.dualRadius = 0.0;
  for (const auto& v : vs) {
    if (v.rows() != out.n || v.cols() != out.m) {
      throw std::invalid_argument("ExplicitPayoff: inconsistent coefficient shapes");
    }
    if (!v.allFinite()) throw std::invalid_argument("ExplicitPayoff: non-finite coefficient");
    out.coeffBound = std::max(out.coeffBound, v.cwiseAbs().maxCoeff());
    out.dualRadius = std::max(out.dualRadius, v.norm());
  }
  out.coeffs = std::move(vs);
  return out;
}

void ExplicitPayoff::validateShapes(const Vector& p, const Vector& l) const {
  if (p.size() != n || l.size() != m) {
    throw std::invalid_argument("ExplicitPayoff: action/loss dimension mismatch");
  }
}

PayoffMatrix ExplicitPayoff::basisPoint(const Vector& p, const Vector& l) const {
  validateShapes(p, l);
  return basisMap(p, l);
}

double ExplicitPayoff::coordinate(int i, const Vector& p, const Vector& l) const {
  validateShapes(p, l);
  return p.dot(coeffs[i] * l);
}

Vector ExplicitPayoff::payoff(const Vector& p, const Vector& l) const {
  validateShapes(p, l);
  Vector out(d);
  for (int i = 0; i < d; ++i) out(i) = p.dot(coeffs[i] * l);
  return out;
}

double ExplicitPayoff::dualSup(const PayoffMatrix& z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : coeffs) best = std::max(best, (v.array() * z.array()).sum());
  return best;
}

int ExplicitPayoff::dualArgmax(const PayoffMatrix& z) const {
  int arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    double value = (coeffs[i].array() * z.array()).sum();
    if (value > best) {
      best = value;
      arg = i;
    }
  }
  return arg;
}

Matrix ExplicitPayoff::stacked() const {
  Matrix out(d, n * m);
  for (int i = 0; i < d; ++i) out.row(i) = coeffs[i].reshaped().transpose();
  return out;
}

PayoffMatrix ExplicitPayoff::dualFromSimplex(const Vector& theta) const {
  if (theta.size() != d) throw std::invalid_argument("dualFromSimplex: weight dimension mismatch");
  PayoffMatrix out = PayoffMatrix::Zero(n, m);
  for (int i = 0; i < d; ++i) out += theta(i) * coeffs[i];
  return out;
}

double pseudonormEval(const ExplicitPayoff& payoff, const PayoffMatrix& z) {
  return std::max(payoff.dualSup(z), 0.0);
}

double pseudodistanceToCone(const ExplicitPayoff& payoff, const PayoffMatrix& z) {
  return payoff.dualSup(z);
}

OrthantGenerators OrthantGenerators::uniform(int m, double scale) {
  OrthantGenerators out;
  out.scales = Vector::Constant(m, scale);
  out.validate();
  return out;
}

void OrthantGenerators::validate() const {
  if (scales.size() == 0 || scales.minCoeff() <= 0) {
    throw std::invalid_argument("OrthantGenerators: scales must be positive");
  }
}

double fenchelDualDistance(const ExplicitPayoff& payoff, const PayoffMatrix& z,
                           const std::vector<PayoffMatrix>& polytopeVertices, double tol) {
  if (polytopeVertices.empty()) {
    throw std::invalid_argument("fenchelDualDistance: polytope needs at least one vertex");
  }
  const int d = payoff.d;
  Vector c(d);
  Matrix b(static_cast<int>(polytopeVertices.size()), d);
  for (int i = 0; i < d; ++i) {
    c(i) = (payoff.coeffs[i].array() * z.array()).sum();
    for (int k = 0; k < static_cast<int>(polytopeVertices.size()); ++k) {
      b(k, i) = (payoff.coeffs[i].array() * polytopeVertices[k].array()).sum();
    }
  }
  auto objective = [&c, &b](const Vector& w) {
    return -(c.dot(w) - (b * w).maxCoeff());
  };
  SolveOptions opts;
  opts.tol = tol;
  opts.subgradient = [&c, &b](const Vector& w) {
    int arg = 0;
    (b * w).maxCoeff(&arg);
    return Vector(-c + b.row(arg).transpose());
  };
  SolveResult res = convexMinimize(simplexBody(d), objective, opts);
  return -res.value;
}

bool hullMembership(const ExplicitPayoff& payoff, const PayoffMatrix& point, double tol) {
  return hullProject(payoff, point).distance <= tol;
}

double hullDistanceLp(const ExplicitPayoff& payoff, const PayoffMatrix& point, double tol) {
  Matrix stackedT = payoff.stacked().transpose();  // nm × d
  Vector target = point.reshaped();
  auto objective = [&stackedT, &target](const Vector& w) {
    return (stackedT * w - target).cwiseAbs().maxCoeff();
  };
  SolveOptions opts;
  opts.tol = tol;
  opts.subgradient = [&stackedT, &target](const Vector& w) {
    Vector residual = stackedT * w - target;
    int arg = 0;
    residual.cwiseAbs().maxCoeff(&arg);
    double sign = residual(arg) >= 0 ? 1.0 : -1.0;
    return Vector(sign * stackedT.row(arg).transpose());
  };
  SolveResult res = convexMinimize(simplexBody(payoff.d), objective, opts);
  return res.value;
}

MinNormResult hullProject(const ExplicitPayoff& payoff, const PayoffMatrix& point,
                          const Vector* warmStart) {
  Matrix vertices = payoff.stacked().transpose();  // nm × d columns
  return minNormToHull(vertices, point.reshaped(), warmStart);
}

double hullDiameter(const ExplicitPayoff& payoff) {
  double best = 0.0;
  for (int i = 0; i < payoff.d; ++i) {
    for (int j = i + 1; j < payoff.d; ++j) {
      best = std::max(best, (payoff.coeffs[i] - payoff.coeffs[j]).norm());
    }
  }
  return best;
}

}  // namespace pna
