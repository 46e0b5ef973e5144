#include "pna/maxent.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "pna/geometry.hpp"

namespace pna {

namespace {

// Gibbs weights θ_i ∝ exp(s_i) with max-subtraction, plus log Z relative to
// the raw scores.
void gibbsFromScores(const Vector& scores, Vector& theta, double& logZ) {
  double shift = scores.maxCoeff();
  theta = (scores.array() - shift).exp();
  double total = theta.sum();
  theta /= total;
  logZ = shift + std::log(total);
}

}  // namespace

MaxentResult maxentOracleSmall(const ExplicitPayoff& payoff, const PayoffMatrix& dualPoint,
                               double residualTol, int maxIterations) {
  if (payoff.d > 10000) {
    throw std::invalid_argument("maxentOracleSmall: coefficient count exceeds the explicit-mode guard");
  }
  if (dualPoint.rows() != payoff.n || dualPoint.cols() != payoff.m) {
    throw std::invalid_argument("maxentOracleSmall: dual point shape mismatch");
  }
  const int d = payoff.d;
  const int nm = payoff.n * payoff.m;
  Matrix V = payoff.stacked();             // d × nm, row i = flattened v_i
  Vector target = dualPoint.reshaped();    // nm

  Vector lambda = Vector::Zero(nm);
  Vector scores(d), theta(d);
  double logZ = 0;

  MaxentResult out;
  auto evaluate = [&](const Vector& lam, Vector& th, double& lz) {
    scores = V * lam;
    gibbsFromScores(scores, th, lz);
    return lam.dot(target) - lz;
  };

  double dual = evaluate(lambda, theta, logZ);
  Vector grad = target - V.transpose() * theta;
  double residual = grad.cwiseAbs().maxCoeff();

  int iter = 0;
  for (; iter < maxIterations && residual > residualTol; ++iter) {
    // Hessian of D is −Cov_θ(v); ascend with the damped Newton direction.
    Matrix centered = V.rowwise() - (theta.transpose() * V);
    Matrix cov = centered.transpose() * (theta.asDiagonal() * centered);
    cov.diagonal().array() += 1e-12 + 1e-9 * residual;
    Vector direction = Eigen::LLT<Matrix>(cov).solve(grad);
    if (!direction.allFinite()) direction = grad;

    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vector cand = lambda + step * direction;
      Vector thCand;
      double lzCand;
      double dualCand = evaluate(cand, thCand, lzCand);
      if (!std::isfinite(dualCand)) {
        step *= 0.5;
        continue;
      }
      // Armijo on the dual value; once improvements fall below the floating
      // floor of |dual|, accept on strict residual decrease instead (Newton
      // shrinks the gradient quadratically near the optimum).
      bool armijo = dualCand >= dual + 1e-4 * step * grad.dot(direction);
      double resCand = (target - V.transpose() * thCand).cwiseAbs().maxCoeff();
      if (armijo || resCand <= 0.9 * residual) {
        lambda = cand;
        theta = thCand;
        logZ = lzCand;
        dual = dualCand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stall: residual-based convergence decides below
    grad = target - V.transpose() * theta;
    residual = grad.cwiseAbs().maxCoeff();
  }

  out.lambda = lambda;
  out.gibbs = theta;
  out.dualValue = dual;
  out.residual = residual;
  out.iterations = iter;
  out.converged = residual <= residualTol;
  double entropy = 0;
  for (int i = 0; i < d; ++i) {
    if (theta(i) > 0) entropy -= theta(i) * std::log(theta(i));
  }
  out.entropy = entropy;
  return out;
}

}  // namespace pna
