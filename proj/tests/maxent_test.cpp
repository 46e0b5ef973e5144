#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "pna/apps/swap.hpp"
#include "pna/maxent.hpp"
#include "pna/olo.hpp"

#include <cmath>
#include <random>

using namespace pna;
using namespace pna::apps;

namespace {

// Row-softmax of a K x K parameter matrix.
Matrix rowSoftmax(const Matrix& lambda) {
  Matrix q(lambda.rows(), lambda.cols());
  for (int i = 0; i < lambda.rows(); ++i) {
    Vector row = lambda.row(i).transpose();
    Vector e = (row.array() - row.maxCoeff()).exp();
    q.row(i) = (e / e.sum()).transpose();
  }
  return q;
}

}  // namespace

TEST_CASE("closed-form swap regularizer values") {
  // Uniform marginals: each row contributes -log K.
  Matrix uniform = Matrix::Constant(3, 3, 1.0 / 3);
  CHECK(swapMaxentRegularizer(dualFromMarginals(uniform)) ==
        doctest::Approx(-3.0 * std::log(3.0)).epsilon(1e-12));

  // Deterministic marginals: zero entropy.
  CHECK(swapMaxentRegularizer(dualFromMarginals(Matrix::Identity(3, 3))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Out-of-range duals are rejected.
  CHECK_THROWS_AS(swapMaxentRegularizer(Matrix::Constant(2, 2, -2.0)),
                  std::invalid_argument);
}

TEST_CASE("marginal matrix round trips through the dual encoding") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix q = oracles::randomRowStochastic(rng, 3);
    Matrix dual = dualFromMarginals(q);
    CHECK((marginalsFromDual(dual) - q).cwiseAbs().maxCoeff() < 1e-12);
    // The defining linear map: dual = I - Q entrywise.
    CHECK((dual - (Matrix::Identity(3, 3) - q)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("product Gibbs distributions decompose into row softmaxes") {
  std::mt19937_64 rng(42);
  for (int K : {2, 3}) {
    Matrix lambda = oracles::randomMatrix(rng, K, K, -2, 2);
    Matrix q = rowSoftmax(lambda);
    auto maps = oracles::allMaps(K);

    // Enumerate the product distribution over all relabelings.
    Vector theta(static_cast<int>(maps.size()));
    for (std::size_t s = 0; s < maps.size(); ++s) {
      double prob = 1.0;
      for (int i = 0; i < K; ++i) prob *= q(i, maps[s][i]);
      theta(static_cast<int>(s)) = prob;
    }
    CHECK(std::abs(theta.sum() - 1.0) < 1e-12);

    // Marginals of the product distribution equal the row softmax.
    Matrix marg = Matrix::Zero(K, K);
    for (std::size_t s = 0; s < maps.size(); ++s)
      for (int i = 0; i < K; ++i) marg(i, maps[s][i]) += theta(static_cast<int>(s));
    CHECK((marg - q).cwiseAbs().maxCoeff() < 1e-12);

    // Entropy decomposes as the sum of row entropies.
    double rowEntropy = 0.0;
    for (int i = 0; i < K; ++i) rowEntropy += oracles::entropyOf(q.row(i).transpose());
    CHECK(oracles::entropyOf(theta) == doctest::Approx(rowEntropy).epsilon(1e-9));
  }
}

TEST_CASE("numeric marginal-fitting oracle on closed-form targets") {
  SwapInstance instance(2);
  ExplicitPayoff payoff = instance.explicitPayoff();

  // Uniform target: the unconstrained maximum log d is attained.
  Vector uniform = Vector::Constant(payoff.d, 1.0 / payoff.d);
  MaxentResult atUniform = maxentOracleSmall(payoff, payoff.dualFromSimplex(uniform), 1e-9);
  CHECK(atUniform.converged);
  CHECK(atUniform.entropy == doctest::Approx(std::log(4.0)).epsilon(1e-6));

  // Vertex target: the constraint pins a point mass, entropy collapses. The
  // multipliers diverge on boundary targets, so only modest residual accuracy
  // is requested here.
  MaxentResult atVertex = maxentOracleSmall(payoff, payoff.coeffs[1], 1e-6);
  CHECK(atVertex.converged);
  CHECK(atVertex.entropy <= 1e-3);

  // Internal consistency of a generic solve: Gibbs form, duality, residual.
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    Vector weights = oracles::randomSimplex(rng, payoff.d);
    PayoffMatrix target = payoff.dualFromSimplex(weights);
    MaxentResult res = maxentOracleSmall(payoff, target, 1e-9);
    CHECK(res.converged);
    CHECK(res.residual <= 1e-9);
    CHECK(std::abs(res.gibbs.sum() - 1.0) < 1e-9);
    CHECK(res.dualValue == doctest::Approx(-res.entropy).epsilon(1e-7));

    // The returned distribution is the Gibbs family member of its multipliers.
    Vector scores(payoff.d);
    for (int i = 0; i < payoff.d; ++i) scores(i) = res.lambda.dot(flatten(payoff.coeffs[i]));
    Vector gibbs = (scores.array() - scores.maxCoeff()).exp();
    gibbs /= gibbs.sum();
    CHECK((gibbs - res.gibbs).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("closed form equals the numeric oracle on random marginals") {
  std::mt19937_64 rng(44);
  for (int K : {2, 3}) {
    SwapInstance instance(K);
    ExplicitPayoff payoff = instance.explicitPayoff();
    for (int rep = 0; rep < 10; ++rep) {
      Matrix q = oracles::randomRowStochastic(rng, K);
      Matrix dual = dualFromMarginals(q);
      double closed = swapMaxentRegularizer(dual);
      MaxentResult numeric = maxentOracleSmall(payoff, dual, 1e-9);
      CHECK(numeric.converged);
      CHECK(closed == doctest::Approx(-numeric.entropy).epsilon(1e-5));
    }
  }
}

TEST_CASE("closed-form maxent follow-the-leader step") {
  std::mt19937_64 rng(45);
  const int K = 2;

  // eta = 0 gives uniform rows: the shared initialization point.
  CHECK((swapMaxentStep(oracles::randomMatrix(rng, K, K, 0, 1), 0.0) - swapUniformDual(K))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  for (int rep = 0; rep < 10; ++rep) {
    Matrix w = oracles::randomMatrix(rng, K, K, 0, 3);
    double eta = oracles::uniform(rng, 0.2, 2.0);
    Matrix step = swapMaxentStep(w, eta);
    CHECK((step - dualFromMarginals(rowSoftmax(-eta * w))).cwiseAbs().maxCoeff() < 1e-12);
  }

  // The closed form minimizes the regularized objective over the dual body:
  // cross-checked against the generic custom-regularizer solver.
  ConvexBody body = swapDualBody(K);
  for (int rep = 0; rep < 3; ++rep) {
    Matrix w = oracles::randomMatrix(rng, K, K, 0, 1);
    double eta = 0.8;
    auto regularizer = [&](const Vector& x) {
      return swapMaxentRegularizer(unflatten(x, K, K));
    };
    Vector numeric = ftrlCustomStep(body, regularizer, flatten(Matrix(-w)), eta,
                                    {.tol = 1e-10});
    Matrix closed = swapMaxentStep(w, eta);
    double objNumeric = regularizer(numeric) + eta * numeric.dot(flatten(Matrix(-w)));
    double objClosed =
        swapMaxentRegularizer(closed) + eta * flatten(closed).dot(flatten(Matrix(-w)));
    CHECK(objClosed <= objNumeric + 1e-7);
    CHECK((numeric - flatten(closed)).cwiseAbs().maxCoeff() < 1e-3);
  }

  // Zero cumulative loss: entropy is maximized at uniform marginals.
  auto regularizer = [&](const Vector& x) {
    return swapMaxentRegularizer(unflatten(x, K, K));
  };
  Vector argmin = ftrlCustomStep(body, regularizer, Vector::Zero(K * K), 1.0,
                                 {.tol = 1e-10});
  CHECK((argmin - flatten(swapUniformDual(K))).cwiseAbs().maxCoeff() < 1e-3);
}
