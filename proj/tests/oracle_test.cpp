#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "pna/apps/swap.hpp"
#include "pna/oracle.hpp"

#include <cmath>
#include <random>

using namespace pna;
using namespace pna::apps;

namespace {

// Direct evaluation of max_i <v_i, z> over the explicit coefficient family.
double supLoop(const ExplicitPayoff& payoff, const PayoffMatrix& z) {
  double best = -1e300;
  for (const auto& v : payoff.coeffs) best = std::max(best, (v.array() * z.array()).sum());
  return best;
}

// Random conic combination of basis points of the swap instance.
PayoffMatrix randomConePoint(std::mt19937_64& rng, int K, int terms) {
  PayoffMatrix z = PayoffMatrix::Zero(K, K);
  for (int r = 0; r < terms; ++r) {
    Vector p = oracles::randomSimplex(rng, K);
    int k = static_cast<int>(oracles::uniform(rng, 0, K - 1e-9));
    double alpha = oracles::uniform(rng, 0.1, 1.0);
    z += alpha * basisMap(p, Vector(Vector::Unit(K, k)));
  }
  return z;
}

}  // namespace

TEST_CASE("cone membership with explicit decompositions") {
  std::mt19937_64 rng(51);
  const int K = 2;
  OracleBundle bundle = swapOracleBundle(K);

  // A single basis point is inside and the witness recovers the action.
  Vector p = oracles::randomSimplex(rng, K);
  PayoffMatrix z = basisMap(p, Vector(Vector::Unit(K, 0)));
  auto dec = coneMembershipZ(z, bundle.actionBody, bundle.generators);
  REQUIRE(dec.has_value());
  REQUIRE(dec->plays.size() == 1);
  // The witness action matches the generating one up to the fitted scale.
  Vector direction = dec->plays[0].p / dec->plays[0].p.sum();
  CHECK((direction - p).cwiseAbs().maxCoeff() < 1e-4);
  PayoffMatrix rebuilt = PayoffMatrix::Zero(K, K);
  for (std::size_t r = 0; r < dec->plays.size(); ++r)
    rebuilt += dec->alpha(dec->columns[r]) * basisMap(dec->plays[r].p, dec->plays[r].l);
  CHECK((rebuilt - z).cwiseAbs().maxCoeff() < 1e-8);

  // A column pointing against the simplex cone is rejected.
  PayoffMatrix bad = PayoffMatrix::Zero(K, K);
  bad.col(0) = -Vector::Constant(K, 0.5);
  CHECK_FALSE(coneMembershipZ(bad, bundle.actionBody, bundle.generators).has_value());

  // Random conic combinations reconstruct within the advertised tolerance.
  for (int rep = 0; rep < 10; ++rep) {
    PayoffMatrix zz = randomConePoint(rng, K, 5);
    auto d = coneMembershipZ(zz, bundle.actionBody, bundle.generators);
    REQUIRE(d.has_value());
    PayoffMatrix sum = PayoffMatrix::Zero(K, K);
    for (std::size_t r = 0; r < d->plays.size(); ++r)
      sum += d->alpha(d->columns[r]) * basisMap(d->plays[r].p, d->plays[r].l);
    CHECK((sum - zz).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("support values through the regret oracle") {
  std::mt19937_64 rng(52);
  const int K = 2;
  OracleBundle bundle = swapOracleBundle(K);
  SwapInstance instance(K);
  ExplicitPayoff payoff = instance.explicitPayoff();

  CHECK(evalMaxOverZ(bundle, PayoffMatrix::Zero(K, K)) == doctest::Approx(0.0).epsilon(1e-9));

  for (int rep = 0; rep < 10; ++rep) {
    PayoffMatrix z = randomConePoint(rng, K, 4);
    double viaOracle = evalMaxOverZ(bundle, z);
    CHECK(viaOracle == doctest::Approx(supLoop(payoff, z)).epsilon(1e-6));
    // Positive homogeneity.
    CHECK(evalMaxOverZ(bundle, PayoffMatrix(2.0 * z)) ==
          doctest::Approx(2.0 * viaOracle).epsilon(1e-6));
  }

  // Points outside the cone are a domain error.
  PayoffMatrix bad = PayoffMatrix::Zero(K, K);
  bad.col(1) = -Vector::Constant(K, 1.0);
  CHECK_THROWS_AS(evalMaxOverZ(bundle, bad), std::domain_error);
}

TEST_CASE("supporting gradients match the support values") {
  std::mt19937_64 rng(53);
  const int K = 2;
  OracleBundle bundle = swapOracleBundle(K);
  SwapInstance instance(K);
  ExplicitPayoff payoff = instance.explicitPayoff();
  REQUIRE(bundle.supGradient);

  for (int rep = 0; rep < 20; ++rep) {
    PayoffMatrix z = oracles::randomMatrix(rng, K, K, -1, 1);
    PayoffMatrix g = bundle.supGradient(z);
    // The gradient is a maximizing coefficient matrix: the supporting value
    // is recovered by the pairing, and no family member pairs higher.
    CHECK((g.array() * z.array()).sum() == doctest::Approx(supLoop(payoff, z)).epsilon(1e-10));
    bool isFamilyMember = false;
    for (const auto& v : payoff.coeffs)
      if ((v - g).cwiseAbs().maxCoeff() < 1e-12) isFamilyMember = true;
    CHECK(isFamilyMember);
  }
}

TEST_CASE("extended dual membership decisions") {
  const int K = 2;
  OracleBundle bundle = swapOracleBundle(K);
  SwapInstance instance(K);
  ExplicitPayoff payoff = instance.explicitPayoff();

  // Every explicit coefficient matrix is a member, as is the origin.
  for (const auto& v : payoff.coeffs) {
    DualMembershipReport report = extendedDualMembership(bundle, v, 1e-6, false, 1e-8);
    CHECK(report.inside);
  }
  CHECK(extendedDualMembership(bundle, PayoffMatrix::Zero(K, K), 1e-6, false, 1e-8).inside);

  // A doubled extreme coefficient matrix escapes the dual set: the minimizer
  // certifies a cone direction whose pairing exceeds the support value.
  PayoffMatrix outside = 2.0 * payoff.coeffs[1];  // 2 (I - P) for the full swap
  DualMembershipReport report = extendedDualMembership(bundle, outside, 1e-6, false, 1e-8);
  CHECK_FALSE(report.inside);
  CHECK(report.minH < -1e-6);
  PayoffMatrix witness = unflatten(report.witness, K, K);
  CHECK((outside.array() * witness.array()).sum() > supLoop(payoff, witness));
}

TEST_CASE("cone and dual-set bodies agree with their oracles") {
  std::mt19937_64 rng(54);
  const int K = 2;
  OracleBundle bundle = swapOracleBundle(K);
  SwapInstance instance(K);
  ExplicitPayoff payoff = instance.explicitPayoff();

  ConvexBody zBall = makeZBallBody(bundle);
  for (int rep = 0; rep < 5; ++rep) {
    PayoffMatrix z = randomConePoint(rng, K, 3);
    Vector inside = flatten(z) / (2.0 * std::max(1.0, z.norm()));
    CHECK(zBall.contains(inside));
  }
  PayoffMatrix bad = PayoffMatrix::Zero(K, K);
  bad.col(0) = -Vector::Constant(K, 0.4);
  CHECK_FALSE(zBall.contains(flatten(bad)));
  CHECK_FALSE(zBall.contains(Vector::Constant(K * K, 10.0)));  // outside the ball

  ConvexBody dualBody = makeExtendedDualBody(bundle, 1e-6);
  CHECK(dualBody.contains(flatten(payoff.coeffs[1])));
  CHECK(dualBody.contains(Vector::Zero(K * K)));
  Vector far = flatten(PayoffMatrix(2.0 * payoff.coeffs[1]));
  CHECK_FALSE(dualBody.contains(far));
  REQUIRE(dualBody.separate);
  auto cut = dualBody.separate(far);
  REQUIRE(cut.has_value());
  // The separating normal puts the escaped point strictly above members.
  CHECK(cut->dot(far) > cut->dot(flatten(payoff.coeffs[1])) - 1e-9);
  CHECK(cut->dot(far) > 0.0);

  // The advertised interior geometry is honest.
  CHECK(dualBody.contains(bundle.dualInteriorPoint));
  CHECK(zBall.contains(bundle.zInteriorPoint));
}

TEST_CASE("bundle geometry constants for the swap family") {
  for (int K : {2, 3}) {
    OracleBundle bundle = swapOracleBundle(K);
    SwapInstance instance(K);
    CHECK(bundle.n == K);
    CHECK(bundle.m == K);
    double maxNorm = 0.0;
    if (instance.payoffDim() <= 1e4) {
      for (const auto& v : instance.explicitPayoff().coeffs)
        maxNorm = std::max(maxNorm, v.norm());
      CHECK(bundle.rho >= 2.0 * maxNorm - 1e-12);
    }
    // The regret oracle reproduces the explicit maximum on weighted runs.
    std::mt19937_64 rng(55);
    ExplicitPayoff payoff = instance.explicitPayoff();
    std::vector<Play> plays;
    Vector alpha(3);
    for (int r = 0; r < 3; ++r) {
      plays.push_back({oracles::randomSimplex(rng, K), oracles::randomVector(rng, K, 0, 1)});
      alpha(r) = oracles::uniform(rng, 0.0, 2.0);
    }
    double viaOracle = bundle.regretOracle(plays, alpha);
    Vector accumulated = Vector::Zero(payoff.d);
    for (int r = 0; r < 3; ++r) accumulated += alpha(r) * payoff.payoff(plays[r].p, plays[r].l);
    CHECK(viaOracle == doctest::Approx(accumulated.maxCoeff()).epsilon(1e-10));
  }
}
