#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "pna/geometry.hpp"
#include "pna/types.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace pna;

namespace {

ExplicitPayoff randomPayoff(std::mt19937_64& rng, int n, int m, int d, bool appendZero) {
  std::vector<PayoffMatrix> vs;
  for (int i = 0; i < d; ++i) vs.push_back(oracles::randomMatrix(rng, n, m, -1.0, 1.0));
  if (appendZero) vs.push_back(PayoffMatrix::Zero(n, m));
  return ExplicitPayoff::fromCoeffs(vs);
}

}  // namespace

TEST_CASE("outer-product embedding") {
  Vector p(2), l(2);
  p << 1, 0;
  l << 0.5, 0.25;
  Matrix expect(2, 2);
  expect << 0.5, 0.25, 0, 0;
  CHECK((basisMap(p, l) - expect).cwiseAbs().maxCoeff() == 0.0);

  CHECK(basisMap(Vector::Zero(2), l).cwiseAbs().maxCoeff() == 0.0);

  Vector half = Vector::Constant(2, 0.5);
  Vector ones = Vector::Ones(2);
  CHECK((basisMap(half, ones).array() == 0.5).all());

  // Bilinearity on random arguments.
  std::mt19937_64 rng(11);
  Vector a = oracles::randomVector(rng, 3, -1, 1), b = oracles::randomVector(rng, 3, -1, 1);
  Vector c = oracles::randomVector(rng, 4, -1, 1), d = oracles::randomVector(rng, 4, -1, 1);
  Matrix lhs = basisMap(Vector(2 * a + b), Vector(c - 3 * d));
  Matrix rhs = 2 * basisMap(a, c) - 6 * basisMap(a, d) + basisMap(b, c) - 3 * basisMap(b, d);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sup-norm distance to the negative orthant") {
  Vector x(3);
  x << 0.2, -0.5, 0.1;
  CHECK(linfDistanceToOrthant(x) == doctest::Approx(0.2).epsilon(1e-15));

  Vector neg(4);
  neg << -0.3, -1.0, -0.01, -2.0;
  CHECK(linfDistanceToOrthant(neg) == 0.0);

  // Equals the support value over the padded simplex (vertices: e_i and the
  // padding vertex whose payoff contribution is 0).
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    Vector v = oracles::randomVector(rng, 5, -2, 2);
    double support = 0.0;  // padding vertex
    for (int i = 0; i < v.size(); ++i) support = std::max(support, v(i));
    CHECK(linfDistanceToOrthant(v) == doctest::Approx(support).epsilon(1e-15));
  }
}

TEST_CASE("coefficient-family construction and payoff evaluation") {
  std::mt19937_64 rng(13);
  ExplicitPayoff payoff = randomPayoff(rng, 2, 3, 5, false);
  CHECK(payoff.n == 2);
  CHECK(payoff.m == 3);
  CHECK(payoff.d == 5);

  double bound = 0.0, radius = 0.0;
  for (const auto& v : payoff.coeffs) {
    bound = std::max(bound, v.cwiseAbs().maxCoeff());
    radius = std::max(radius, v.norm());
  }
  CHECK(payoff.coeffBound == doctest::Approx(bound).epsilon(1e-15));
  CHECK(payoff.dualRadius == doctest::Approx(radius).epsilon(1e-15));

  Vector p = oracles::randomSimplex(rng, 2);
  Vector l = oracles::randomVector(rng, 3, 0, 1);
  Vector u = payoff.payoff(p, l);
  for (int i = 0; i < payoff.d; ++i) {
    double direct = 0.0;  // sum_{jk} v_i(j,k) p_j l_k
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k) direct += payoff.coeffs[i](j, k) * p(j) * l(k);
    CHECK(u(i) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(payoff.coordinate(i, p, l) == doctest::Approx(direct).epsilon(1e-13));
  }

  // Shape validation errors.
  CHECK_THROWS_AS(payoff.payoff(Vector::Ones(3), l), std::invalid_argument);
  CHECK_THROWS_AS(payoff.basisPoint(p, Vector::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(ExplicitPayoff::fromCoeffs({}), std::invalid_argument);
  CHECK_THROWS_AS(
      ExplicitPayoff::fromCoeffs({Matrix::Zero(2, 2), Matrix::Zero(2, 3)}),
      std::invalid_argument);
}

TEST_CASE("stacked rows, simplex-weighted duals, and flattening agree") {
  std::mt19937_64 rng(14);
  ExplicitPayoff payoff = randomPayoff(rng, 3, 2, 6, false);

  Matrix stack = payoff.stacked();
  REQUIRE(stack.rows() == 6);
  REQUIRE(stack.cols() == 6);
  for (int i = 0; i < payoff.d; ++i)
    CHECK((stack.row(i).transpose() - flatten(payoff.coeffs[i])).cwiseAbs().maxCoeff() <
          1e-15);

  // Pairing translation: <theta, u(p,l)> equals <V^T theta, basis(p,l)>.
  for (int rep = 0; rep < 20; ++rep) {
    Vector theta = oracles::randomSimplex(rng, 6);
    Vector p = oracles::randomSimplex(rng, 3);
    Vector l = oracles::randomVector(rng, 2, 0, 1);
    double viaPayoff = theta.dot(payoff.payoff(p, l));
    PayoffMatrix dual = payoff.dualFromSimplex(theta);
    double viaDual = (dual.array() * basisMap(p, l).array()).sum();
    CHECK(viaPayoff == doctest::Approx(viaDual).epsilon(1e-12));
  }

  Matrix z = oracles::randomMatrix(rng, 3, 2, -1, 1);
  CHECK((unflatten(flatten(z), 3, 2) - z).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(unflatten(Vector::Zero(5), 3, 2), std::invalid_argument);
}

TEST_CASE("pseudonorm evaluation clamps the coefficient support value") {
  // v1, v2 = the unit basis matrices of the 1x2 shape.
  std::vector<PayoffMatrix> vs(2, PayoffMatrix::Zero(1, 2));
  vs[0](0, 0) = 1.0;
  vs[1](0, 1) = 1.0;
  ExplicitPayoff payoff = ExplicitPayoff::fromCoeffs(vs);

  PayoffMatrix z(1, 2);
  z << -1, -2;
  CHECK(pseudonormEval(payoff, z) == 0.0);
  CHECK(pseudodistanceToCone(payoff, z) == doctest::Approx(-1.0).epsilon(1e-15));

  z << 3, 1;
  CHECK(pseudonormEval(payoff, z) == doctest::Approx(3.0).epsilon(1e-15));

  z << 0.3, 0.7;
  CHECK(pseudodistanceToCone(payoff, z) == doctest::Approx(0.7).epsilon(1e-15));

  std::mt19937_64 rng(15);
  ExplicitPayoff random = randomPayoff(rng, 2, 2, 5, false);
  for (int rep = 0; rep < 50; ++rep) {
    PayoffMatrix zz = oracles::randomMatrix(rng, 2, 2, -1, 1);
    double loop = -1e300;
    for (const auto& v : random.coeffs) loop = std::max(loop, (v.array() * zz.array()).sum());
    CHECK(pseudodistanceToCone(random, zz) == doctest::Approx(loop).epsilon(1e-12));
    CHECK(pseudonormEval(random, zz) == doctest::Approx(std::max(loop, 0.0)).epsilon(1e-12));
    // The support value equals the orthant distance of the coordinate vector.
    Vector coords = random.stacked() * flatten(zz);
    CHECK(pseudonormEval(random, zz) ==
          doctest::Approx(linfDistanceToOrthant(coords)).epsilon(1e-12));
  }
}

TEST_CASE("pseudonorm homogeneity and triangle inequality") {
  std::mt19937_64 rng(16);
  ExplicitPayoff payoff = randomPayoff(rng, 2, 3, 6, false);
  for (int rep = 0; rep < 30; ++rep) {
    PayoffMatrix z = oracles::randomMatrix(rng, 2, 3, -1, 1);
    PayoffMatrix w = oracles::randomMatrix(rng, 2, 3, -1, 1);
    double alpha = oracles::uniform(rng, 0.0, 3.0);
    double fz = pseudonormEval(payoff, z);
    CHECK(pseudonormEval(payoff, alpha * z) == doctest::Approx(alpha * fz).epsilon(1e-12));
    CHECK(pseudonormEval(payoff, z + w) <=
          fz + pseudonormEval(payoff, w) + 1e-12);
  }
}

TEST_CASE("polytope distance via the dual program") {
  // Scalar family v1 = 1 over the 1x1 shape, polytope = the segment [-1, 0]:
  // the distance from z = 0.5 is attained at s = 0 and equals 0.5.
  ExplicitPayoff scalar = ExplicitPayoff::fromCoeffs({PayoffMatrix::Constant(1, 1, 1.0)});
  std::vector<PayoffMatrix> segment = {PayoffMatrix::Constant(1, 1, -1.0),
                                       PayoffMatrix::Constant(1, 1, 0.0)};
  CHECK(fenchelDualDistance(scalar, PayoffMatrix::Constant(1, 1, 0.5), segment) ==
        doctest::Approx(0.5).epsilon(1e-8));

  // S = {0}: the value reduces to the unclamped support value.
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    ExplicitPayoff payoff = randomPayoff(rng, 2, 2, 4, true);
    PayoffMatrix z = oracles::randomMatrix(rng, 2, 2, -1, 1);
    std::vector<PayoffMatrix> origin = {PayoffMatrix::Zero(2, 2)};
    CHECK(fenchelDualDistance(payoff, z, origin) ==
          doctest::Approx(pseudodistanceToCone(payoff, z)).epsilon(1e-7));
  }

  // Random instances with the zero matrix included in the family (so the
  // weight simplex spans exactly the dual set of the clamped pseudonorm):
  // the dual value must match the exact primal LP over conv(S).
  for (int rep = 0; rep < 10; ++rep) {
    ExplicitPayoff payoff = randomPayoff(rng, 2, 2, 4, true);
    PayoffMatrix z = oracles::randomMatrix(rng, 2, 2, -1, 1);
    int vertices = 3;
    std::vector<PayoffMatrix> polytope;
    Matrix B(vertices, payoff.d);
    Vector c(payoff.d);
    for (int s = 0; s < vertices; ++s)
      polytope.push_back(oracles::randomMatrix(rng, 2, 2, -1, 1));
    for (int i = 0; i < payoff.d; ++i) {
      c(i) = (payoff.coeffs[i].array() * z.array()).sum();
      for (int s = 0; s < vertices; ++s)
        B(s, i) = (payoff.coeffs[i].array() * polytope[s].array()).sum();
    }
    double dual = fenchelDualDistance(payoff, z, polytope);
    double primal = oracles::polytopePseudoDistanceLp(c, B);
    CHECK(dual == doctest::Approx(primal).epsilon(1e-6));
  }
}

TEST_CASE("hull membership, projection, and diameter") {
  std::mt19937_64 rng(18);
  ExplicitPayoff payoff = randomPayoff(rng, 2, 2, 5, false);

  // Convex combinations are members; vertices are members.
  for (int rep = 0; rep < 10; ++rep) {
    Vector w = oracles::randomSimplex(rng, payoff.d);
    CHECK(hullMembership(payoff, payoff.dualFromSimplex(w)));
  }
  CHECK(hullMembership(payoff, payoff.coeffs[0]));

  // A point pushed past the farthest vertex is not a member; the projection
  // lands in the hull and the two distance computations agree.
  PayoffMatrix far = 3.0 * payoff.coeffs[0];
  for (const auto& v : payoff.coeffs) far += 0.1 * v;
  MinNormResult proj = hullProject(payoff, far);
  double lpDist = hullDistanceLp(payoff, far);
  if (proj.distance > 1e-6) {
    CHECK_FALSE(hullMembership(payoff, far));
    CHECK(hullMembership(payoff, unflatten(proj.point, 2, 2)));
    // The sup-norm LP distance is sandwiched by the Euclidean distance.
    CHECK(lpDist <= proj.distance + 1e-7);
    CHECK(proj.distance <= 2.0 * lpDist + 1e-7);  // ambient dim 4: sqrt(4) factor
  }

  double diam = hullDiameter(payoff);
  double pairwise = 0.0;
  for (const auto& a : payoff.coeffs)
    for (const auto& b : payoff.coeffs) pairwise = std::max(pairwise, (a - b).norm());
  CHECK(diam == doctest::Approx(pairwise).epsilon(1e-15));
}
