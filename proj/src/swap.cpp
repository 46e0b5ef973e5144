#include "pna/apps/swap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pna::apps {

double SwapInstance::payoffDim() const {
  return std::pow(static_cast<double>(K), static_cast<double>(K));
}

std::vector<std::vector<int>> SwapInstance::enumerateMaps() const {
  double count = payoffDim();
  if (count > 1e4) throw std::invalid_argument("SwapInstance: relabeling count exceeds 10^4");
  int total = static_cast<int>(count);
  std::vector<std::vector<int>> maps;
  maps.reserve(total);
  std::vector<int> pi(K, 0);
  for (int idx = 0; idx < total; ++idx) {
    maps.push_back(pi);
    for (int pos = 0; pos < K; ++pos) {  // π(0) fastest
      if (++pi[pos] < K) break;
      pi[pos] = 0;
    }
  }
  return maps;
}

ExplicitPayoff SwapInstance::explicitPayoff() const {
  auto maps = enumerateMaps();
  std::vector<PayoffMatrix> coeffs;
  coeffs.reserve(maps.size());
  for (const auto& pi : maps) {
    PayoffMatrix v = PayoffMatrix::Identity(K, K);
    for (int i = 0; i < K; ++i) v(i, pi[i]) -= 1.0;
    coeffs.push_back(std::move(v));
  }
  return ExplicitPayoff::fromCoeffs(std::move(coeffs));
}

double swapRegret(const std::vector<Vector>& plays, const std::vector<Vector>& losses) {
  if (plays.empty()) return 0.0;
  if (plays.size() != losses.size()) throw std::invalid_argument("swapRegret: length mismatch");
  const int K = static_cast<int>(plays.front().size());
  Matrix cross = Matrix::Zero(K, K);
  for (std::size_t t = 0; t < plays.size(); ++t) cross += plays[t] * losses[t].transpose();
  return swapRegretFromCross(cross);
}

double swapRegretFromCross(const Matrix& cross) {
  double total = 0;
  for (int i = 0; i < cross.rows(); ++i) {
    total += cross(i, i) - cross.row(i).minCoeff();
  }
  return total;
}

Matrix marginalsFromDual(const Matrix& dualPoint, double tol) {
  const int K = static_cast<int>(dualPoint.rows());
  Matrix q = -dualPoint;
  q.diagonal().array() += 1.0;
  for (int i = 0; i < K; ++i) {
    if (q.row(i).minCoeff() < -tol || std::abs(q.row(i).sum() - 1.0) > tol) {
      throw std::invalid_argument("marginalsFromDual: dual point is not of the form I - Q");
    }
  }
  return q.cwiseMax(0.0);
}

Matrix dualFromMarginals(const Matrix& q) {
  Matrix theta = -q;
  theta.diagonal().array() += 1.0;
  return theta;
}

double swapMaxentRegularizer(const Matrix& dualPoint, double tol) {
  Matrix q = marginalsFromDual(dualPoint, tol);
  double value = 0;
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) {
      if (q(i, j) > 0) value += q(i, j) * std::log(q(i, j));
    }
  }
  return value;
}

Vector stationaryFromUniform(const Matrix& rowStochastic) {
  const int K = static_cast<int>(rowStochastic.rows());
  Vector v = Vector::Constant(K, 1.0 / K);
  auto residual = [&](const Vector& candidate) {
    return (rowStochastic.transpose() * candidate - candidate).cwiseAbs().maxCoeff();
  };
  for (int it = 0; it < 4096; ++it) {
    Vector next = rowStochastic.transpose() * v;
    next = next.cwiseMax(0.0);
    next /= next.sum();
    if ((next - v).cwiseAbs().maxCoeff() <= 1e-15) {
      v = next;
      break;
    }
    v = next;
  }
  if (residual(v) <= 1e-12) return v;

  // Periodic chains: Cesàro averages over doubling windows. S_{2N} uses
  // S_{2N} = (S_N + P^N S_N)/2 with P^N squared each round, so fifty rounds
  // average ~10^15 powers and the residual decays like 1/window.
  Matrix power = rowStochastic.transpose();
  Matrix cesaro = 0.5 * (Matrix::Identity(K, K) + power);
  for (int it = 0; it < 50; ++it) {
    Vector candidate = cesaro * Vector::Constant(K, 1.0 / K);
    candidate = candidate.cwiseMax(0.0);
    candidate /= candidate.sum();
    if (residual(candidate) <= 1e-12) return candidate;
    Matrix squared = power * power;
    cesaro = 0.5 * (cesaro + squared * cesaro);
    power = std::move(squared);
  }
  Vector candidate = cesaro * Vector::Constant(K, 1.0 / K);
  candidate = candidate.cwiseMax(0.0);
  candidate /= candidate.sum();
  if (residual(candidate) > 1e-10) {
    throw std::runtime_error("stationaryFromUniform: residual above 1e-10");
  }
  return candidate;
}

Vector swapResponder(const Matrix& marginals) { return stationaryFromUniform(marginals); }

Matrix swapMaxentStep(const Matrix& crossCumulative, double eta) {
  const int K = static_cast<int>(crossCumulative.rows());
  Matrix q(K, K);
  for (int i = 0; i < K; ++i) {
    q.row(i) = ftrlNegentropyStep(crossCumulative.row(i).transpose(), eta).transpose();
  }
  return dualFromMarginals(q);
}

ConvexBody swapDualBody(int K) {
  // θ̃ = I − Q with Q row-stochastic: an affine isometry (negated coordinate
  // permutation plus shift) of a product of K simplices.
  ConvexBody rows = productSimplexBody(K, K);
  const int nm = K * K;
  Matrix perm = Matrix::Zero(nm, nm);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      perm(j * K + i, i * K + j) = 1.0;  // row-block (i,j) ↦ column-major (j,i)
    }
  }
  Vector origin = Matrix::Identity(K, K).reshaped();

  ConvexBody body;
  body.ambientDim = nm;
  body.chart = -(perm * rows.chart);
  body.chartOrigin = origin - perm * rows.chartOrigin;
  body.innerPoint = origin - perm * rows.innerPoint;
  body.innerRadius = rows.innerRadius;
  body.outerRadius = rows.outerRadius;
  body.contains = [K](const Vector& flat) {
    Matrix theta = unflatten(flat, K, K);
    Matrix q = -theta;
    q.diagonal().array() += 1.0;
    for (int i = 0; i < K; ++i) {
      if (q.row(i).minCoeff() < -kMembershipTol) return false;
      if (std::abs(q.row(i).sum() - 1.0) > kMembershipTol) return false;
    }
    return true;
  };
  body.project = [K](const Vector& flat) {
    Matrix theta = unflatten(flat, K, K);
    Matrix q = -theta;
    q.diagonal().array() += 1.0;
    for (int i = 0; i < K; ++i) {
      q.row(i) = simplexProject(q.row(i).transpose()).transpose();
    }
    return Vector(dualFromMarginals(q).reshaped());
  };
  auto project = body.project;
  body.separate = [project](const Vector& flat) -> std::optional<Vector> {
    Vector proj = project(flat);
    Vector diff = flat - proj;
    double dist = diff.norm();
    if (dist <= kMembershipTol) return std::nullopt;
    return Vector(diff / dist);
  };
  return body;
}

LinfProblem swapLinfProblem(int K) {
  SwapInstance instance(K);
  if (instance.payoffDim() > 1e6) {
    throw std::invalid_argument("swapLinfProblem: relabeling count exceeds the 10^6 guard");
  }
  const double count = instance.payoffDim();
  const int d = static_cast<int>(count);

  LinfProblem problem;
  problem.d = d;
  problem.payoffBound = 1.0;

  // Enumerate maps once; mixed-radix decode per coordinate.
  problem.payoff = [K, d](const Vector& p, const Vector& l) {
    Vector u(d);
    std::vector<int> pi(K, 0);
    for (int idx = 0; idx < d; ++idx) {
      double value = 0;
      for (int i = 0; i < K; ++i) value += p(i) * (l(i) - l(pi[i]));
      u(idx) = value;
      for (int pos = 0; pos < K; ++pos) {
        if (++pi[pos] < K) break;
        pi[pos] = 0;
      }
    }
    return u;
  };
  problem.responder = [K, d](const Vector& thetaBar) {
    // Aggregate the relabeling weights into a marginal matrix Q with
    // Q_ij = Σ_{π : π(i)=j} θ̄_π (plus the leftover mass 1 − Σθ̄ on the
    // diagonal, which leaves the stationary condition unchanged).
    Matrix q = Matrix::Zero(K, K);
    std::vector<int> pi(K, 0);
    for (int idx = 0; idx < d; ++idx) {
      for (int i = 0; i < K; ++i) q(i, pi[i]) += thetaBar(idx);
      for (int pos = 0; pos < K; ++pos) {
        if (++pi[pos] < K) break;
        pi[pos] = 0;
      }
    }
    double slack = 1.0 - thetaBar.sum();
    q.diagonal().array() += std::max(slack, 0.0);
    for (int i = 0; i < K; ++i) {
      double sum = q.row(i).sum();
      if (sum <= 0) {
        q.row(i).setZero();
        q(i, i) = 1.0;
      } else {
        q.row(i) /= sum;
      }
    }
    return stationaryFromUniform(q);
  };
  auto payoffFn = problem.payoff;
  problem.responderResidual = [K, payoffFn](const Vector& thetaBar, const Vector& p) {
    // max over vertex losses ℓ = e_k of ⟨θ̄, u(p, e_k)⟩.
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      Vector l = Vector::Zero(K);
      l(k) = 1.0;
      worst = std::max(worst, thetaBar.dot(payoffFn(p, l)));
    }
    return worst;
  };
  return problem;
}

OracleBundle swapOracleBundle(int K) {
  OracleBundle bundle;
  bundle.n = K;
  bundle.m = K;
  bundle.actionBody = simplexBody(K);
  bundle.generators = OrthantGenerators::uniform(K, 1.0);
  bundle.regretOracle = [K](const std::vector<Play>& plays, const Vector& alpha) {
    Matrix cross = Matrix::Zero(K, K);
    for (std::size_t r = 0; r < plays.size(); ++r) {
      cross += alpha(static_cast<int>(r)) * plays[r].p * plays[r].l.transpose();
    }
    // max_π Σ_i (cross_ii − cross_{i,π(i)}), allowing π = id ⇒ never negative,
    // but the sup over coefficients is Σ_i (cross_ii − min_j cross_ij) without
    // the outer clamp — the clamp is f's job, not the sup's.
    double total = 0;
    for (int i = 0; i < K; ++i) total += cross(i, i) - cross.row(i).minCoeff();
    return total;
  };
  bundle.rho = 2.0 * std::sqrt(2.0 * K);
  const int nm = K * K;
  bundle.dualInteriorPoint = Vector::Constant(nm, -0.25);
  bundle.dualInteriorRadius = 0.25;
  bundle.zInteriorPoint = Vector::Constant(nm, 0.9 / (K + 1.0) / std::sqrt(static_cast<double>(nm)));
  bundle.zInteriorRadius = 0.9 / (K + 1.0) / std::sqrt(static_cast<double>(nm));
  bundle.coneSeparator = [](const Vector& column) -> std::optional<Vector> {
    // cone(Δ_K) is the nonnegative orthant: the negative part separates.
    Vector negative = (-column).cwiseMax(0.0);
    if (negative.norm() <= 0) return std::nullopt;
    return negative;
  };
  bundle.supGradient = [K](const PayoffMatrix& z) {
    // sup_π Σ_i (z_ii − z_{i,π(i)}) is attained at the row-wise argmin.
    PayoffMatrix g = PayoffMatrix::Identity(K, K);
    for (int i = 0; i < K; ++i) {
      int best = 0;
      z.row(i).minCoeff(&best);
      g(i, best) -= 1.0;
    }
    return g;
  };
  return bundle;
}

Matrix swapUniformDual(int K) {
  return Matrix::Identity(K, K) - Matrix::Constant(K, K, 1.0 / K);
}

}  // namespace pna::apps
