#include "pna/apps/bayes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pna::apps {

BayesInstance::BayesInstance(int types, int actions, Vector prior)
    : C(types), K(actions), mu(std::move(prior)) {
  if (C < 1 || K < 1) throw std::invalid_argument("BayesInstance: need C ≥ 1, K ≥ 1");
  if (mu.size() != C) throw std::invalid_argument("BayesInstance: prior dimension mismatch");
  if (mu.minCoeff() < 0 || std::abs(mu.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("BayesInstance: prior must be a distribution");
  }
}

BayesInstance BayesInstance::uniformPrior(int types, int actions) {
  return BayesInstance(types, actions, Vector::Constant(types, 1.0 / types));
}

double BayesInstance::payoffDimLog() const {
  return C * std::log(static_cast<double>(C)) +
         static_cast<double>(K) * C * std::log(static_cast<double>(K));
}

ExplicitPayoff BayesInstance::explicitPayoff() const {
  if (payoffDimLog() > std::log(1e4)) {
    throw std::invalid_argument("BayesInstance: deviation count exceeds 10^4");
  }
  const int kappaCount = static_cast<int>(std::llround(std::pow(double(C), C)));
  const long long piCount = std::llround(std::pow(double(K), K * C));
  const int dim = C * K;

  std::vector<PayoffMatrix> coeffs;
  coeffs.reserve(static_cast<std::size_t>(kappaCount) * piCount);
  // π⃗ as a C·K-digit base-K number, digit (c·K + i), entry (c=0,i=0) fastest;
  // κ as a C-digit base-C number, κ(0) fastest. κ varies fastest overall.
  std::vector<int> pi(static_cast<std::size_t>(C) * K, 0);
  for (long long pIdx = 0; pIdx < piCount; ++pIdx) {
    std::vector<int> kappa(C, 0);
    for (int kIdx = 0; kIdx < kappaCount; ++kIdx) {
      PayoffMatrix v = PayoffMatrix::Zero(dim, dim);
      for (int c = 0; c < C; ++c) {
        for (int i = 0; i < K; ++i) {
          v(c * K + i, c * K + i) += mu(c);
          v(kappa[c] * K + i, c * K + pi[c * K + i]) -= mu(c);
        }
      }
      coeffs.push_back(std::move(v));
      for (int pos = 0; pos < C; ++pos) {
        if (++kappa[pos] < C) break;
        kappa[pos] = 0;
      }
    }
    for (int pos = 0; pos < C * K; ++pos) {
      if (++pi[pos] < K) break;
      pi[pos] = 0;
    }
  }
  return ExplicitPayoff::fromCoeffs(std::move(coeffs));
}

double bayesSwapRegret(const BayesInstance& instance, const std::vector<Vector>& plays,
                       const std::vector<Vector>& losses) {
  BayesRegretAccumulator acc(instance);
  if (plays.size() != losses.size()) throw std::invalid_argument("bayesSwapRegret: length mismatch");
  for (std::size_t t = 0; t < plays.size(); ++t) acc.observe(plays[t], losses[t]);
  return acc.regret();
}

BayesRegretAccumulator::BayesRegretAccumulator(const BayesInstance& instance)
    : instance_(instance),
      cross_(instance.C, std::vector<Matrix>(instance.C, Matrix::Zero(instance.K, instance.K))) {}

void BayesRegretAccumulator::observe(const Vector& play, const Vector& loss) {
  const int C = instance_.C, K = instance_.K;
  if (play.size() != C * K || loss.size() != C * K) {
    throw std::invalid_argument("BayesRegretAccumulator: dimension mismatch");
  }
  for (int cp = 0; cp < C; ++cp) {
    for (int c = 0; c < C; ++c) {
      cross_[cp][c] += play.segment(cp * K, K) * loss.segment(c * K, K).transpose();
    }
  }
}

double BayesRegretAccumulator::regret() const {
  const int C = instance_.C, K = instance_.K;
  double total = 0;
  for (int c = 0; c < C; ++c) {
    double bestOverTarget = -std::numeric_limits<double>::infinity();
    double diag = cross_[c][c].diagonal().sum();
    for (int cp = 0; cp < C; ++cp) {
      double value = diag;
      for (int i = 0; i < K; ++i) value -= cross_[cp][c].row(i).minCoeff();
      bestOverTarget = std::max(bestOverTarget, value);
    }
    total += instance_.mu(c) * bestOverTarget;
  }
  return std::max(total, 0.0);
}

ConvexBody bayesActionBody(const BayesInstance& instance) {
  return productSimplexBody(instance.C, instance.K);
}

Vector bayesResponder(const Matrix& dualPoint, const BayesInstance& instance, double tol) {
  const int dim = instance.actionDim();
  if (dualPoint.rows() != dim || dualPoint.cols() != dim) {
    throw std::invalid_argument("bayesResponder: dual point shape mismatch");
  }
  std::vector<Halfspace> constraints;
  constraints.reserve(dim);
  for (int b = 0; b < dim; ++b) {
    Vector normal = dualPoint.col(b);
    if (normal.norm() <= 1e-14) continue;
    constraints.push_back({normal, 0.0});
  }
  auto p = lpFeasible(constraints, bayesActionBody(instance), tol);
  if (!p) throw std::runtime_error("bayesResponder: no feasible conditional play");
  return *p;
}

double bayesResponderResidual(const Matrix& dualPoint, const Vector& p) {
  return (dualPoint.transpose() * p).maxCoeff();
}

}  // namespace pna::apps
