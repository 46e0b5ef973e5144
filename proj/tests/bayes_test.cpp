#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "pna/apps/bayes.hpp"
#include "pna/apps/swap.hpp"

#include <cmath>
#include <random>

using namespace pna;
using namespace pna::apps;

namespace {

Vector randomProductPlay(std::mt19937_64& rng, int C, int K) {
  Vector p(C * K);
  for (int c = 0; c < C; ++c) p.segment(c * K, K) = oracles::randomSimplex(rng, K);
  return p;
}

}  // namespace

TEST_CASE("instance construction and guards") {
  BayesInstance instance = BayesInstance::uniformPrior(2, 2);
  CHECK(instance.C == 2);
  CHECK(instance.K == 2);
  CHECK(instance.actionDim() == 4);
  CHECK((instance.mu.array() - 0.5).abs().maxCoeff() < 1e-15);
  CHECK(instance.payoffDimLog() == doctest::Approx(std::log(64.0)).epsilon(1e-12));

  Vector bad(2);
  bad << 0.7, 0.2;
  CHECK_THROWS_AS(BayesInstance(2, 2, bad), std::invalid_argument);
  Vector negative(2);
  negative << 1.3, -0.3;
  CHECK_THROWS_AS(BayesInstance(2, 2, negative), std::invalid_argument);

  // 2^2 * 3^6 = 2916 deviations still materialize; 3^3 * 3^9 = 531441 do not.
  CHECK(BayesInstance::uniformPrior(2, 3).explicitPayoff().d == 2916);
  CHECK_THROWS_AS(BayesInstance::uniformPrior(3, 3).explicitPayoff(),
                  std::invalid_argument);
}

TEST_CASE("explicit deviation payoffs match the defining formula") {
  std::mt19937_64 rng(91);
  BayesInstance instance = BayesInstance::uniformPrior(2, 2);
  ExplicitPayoff payoff = instance.explicitPayoff();
  REQUIRE(payoff.d == 64);
  REQUIRE(payoff.n == 4);
  REQUIRE(payoff.m == 4);

  // The identity deviation contributes a zero coefficient matrix.
  bool hasZero = false;
  for (const auto& v : payoff.coeffs)
    if (v.cwiseAbs().maxCoeff() < 1e-15) hasZero = true;
  CHECK(hasZero);

  // Every payoff coordinate comes from some (kappa, pi-tuple) pair; compare
  // the whole sorted value sets on random (p, l).
  auto kappas = oracles::allMaps(2);
  auto pis = oracles::allMaps(2);
  for (int rep = 0; rep < 5; ++rep) {
    Vector p = randomProductPlay(rng, 2, 2);
    Vector l = oracles::randomVector(rng, 4, 0, 1);
    Vector viaLib = payoff.payoff(p, l);

    std::vector<double> direct;
    for (const auto& kappa : kappas) {
      for (const auto& pi0 : pis) {
        for (const auto& pi1 : pis) {
          const std::vector<int>* pick[2] = {&pi0, &pi1};
          double value = 0.0;
          for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < 2; ++i) {
              value += instance.mu(c) *
                       (p(c * 2 + i) * l(c * 2 + i) -
                        p(kappa[c] * 2 + i) * l(c * 2 + (*pick[c])[i]));
            }
          }
          direct.push_back(value);
        }
      }
    }
    std::vector<double> lib(viaLib.data(), viaLib.data() + viaLib.size());
    std::sort(direct.begin(), direct.end());
    std::sort(lib.begin(), lib.end());
    for (std::size_t s = 0; s < lib.size(); ++s)
      CHECK(lib[s] == doctest::Approx(direct[s]).epsilon(1e-12));
  }
}

TEST_CASE("regret matches full deviation enumeration") {
  std::mt19937_64 rng(92);
  BayesInstance instance = BayesInstance::uniformPrior(2, 2);

  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Vector> plays, losses;
    for (int t = 0; t < 2; ++t) {
      plays.push_back(randomProductPlay(rng, 2, 2));
      losses.push_back(oracles::randomVector(rng, 4, 0, 1));
    }
    double direct = bayesSwapRegret(instance, plays, losses);
    double brute = oracles::bayesRegretBrute(2, 2, instance.mu, plays, losses);
    CHECK(direct == doctest::Approx(std::max(brute, 0.0)).epsilon(1e-12));
  }

  // Per-type best responses to a constant loss leave nothing to gain.
  Vector constant(4);
  constant << 0.8, 0.1, 0.3, 0.9;
  Vector best(4);
  best << 0, 1, 1, 0;  // argmin per type
  std::vector<Vector> plays(6, best), losses(6, constant);
  CHECK(bayesSwapRegret(instance, plays, losses) <= 1e-12);
}

TEST_CASE("single-type instances reduce to plain swap regret") {
  std::mt19937_64 rng(93);
  BayesInstance single(1, 3, Vector::Ones(1));
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Vector> plays, losses;
    for (int t = 0; t < 4; ++t) {
      plays.push_back(oracles::randomSimplex(rng, 3));
      losses.push_back(oracles::randomVector(rng, 3, 0, 1));
    }
    CHECK(bayesSwapRegret(single, plays, losses) ==
          doctest::Approx(swapRegret(plays, losses)).epsilon(1e-12));
  }
}

TEST_CASE("incremental accumulator tracks the batch formula") {
  std::mt19937_64 rng(94);
  BayesInstance instance = BayesInstance::uniformPrior(2, 2);
  BayesRegretAccumulator acc(instance);
  std::vector<Vector> plays, losses;
  for (int t = 0; t < 6; ++t) {
    plays.push_back(randomProductPlay(rng, 2, 2));
    losses.push_back(oracles::randomVector(rng, 4, 0, 1));
    acc.observe(plays.back(), losses.back());
    CHECK(acc.regret() == doctest::Approx(bayesSwapRegret(instance, plays, losses))
                              .epsilon(1e-12));
  }
  Vector wrong(3);
  CHECK_THROWS_AS(acc.observe(wrong, losses.back()), std::invalid_argument);
}

TEST_CASE("per-type feasibility responder") {
  std::mt19937_64 rng(95);
  BayesInstance instance = BayesInstance::uniformPrior(2, 2);
  ExplicitPayoff payoff = instance.explicitPayoff();
  ConvexBody body = bayesActionBody(instance);

  // The zero dual (image of the identity deviation) accepts any play.
  Vector zeroPlay = bayesResponder(Matrix::Zero(4, 4), instance);
  CHECK(body.contains(zeroPlay));
  CHECK(bayesResponderResidual(Matrix::Zero(4, 4), zeroPlay) <= 1e-8);

  for (int rep = 0; rep < 5; ++rep) {
    Vector weights = oracles::randomSimplex(rng, payoff.d);
    Matrix dual = payoff.dualFromSimplex(weights);
    Vector play = bayesResponder(dual, instance);
    CHECK(body.contains(play));
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(play.segment(c * 2, 2).sum() - 1.0) < 1e-7);
    CHECK(bayesResponderResidual(dual, play) <= 1e-7);
  }

  CHECK_THROWS_AS(bayesResponder(Matrix::Zero(3, 3), instance), std::invalid_argument);
}

TEST_CASE("single-type responder agrees with the stationary condition") {
  std::mt19937_64 rng(96);
  BayesInstance single(1, 2, Vector::Ones(1));
  ExplicitPayoff payoff = single.explicitPayoff();
  for (int rep = 0; rep < 5; ++rep) {
    Vector weights = oracles::randomSimplex(rng, payoff.d);
    Matrix dual = payoff.dualFromSimplex(weights);
    // The stationary distribution of the recovered marginals is feasible for
    // the responder's halfspace system.
    Vector stationary = swapResponder(marginalsFromDual(dual));
    CHECK(bayesResponderResidual(dual, stationary) <= 1e-9);
    // And the solver's own answer is feasible too.
    Vector solved = bayesResponder(dual, single);
    CHECK(bayesResponderResidual(dual, solved) <= 1e-7);
  }
}
