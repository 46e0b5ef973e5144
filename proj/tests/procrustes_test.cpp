#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "pna/apps/procrustes.hpp"

#include <cmath>
#include <random>

using namespace pna;
using namespace pna::apps;

namespace {

std::vector<Vector> randomBallPlays(std::mt19937_64& rng, int n, int T) {
  std::vector<Vector> plays;
  for (int t = 0; t < T; ++t) {
    Vector p = oracles::randomVector(rng, n, -1, 1);
    double norm = p.norm();
    if (norm > 1.0) p /= norm;
    plays.push_back(p);
  }
  return plays;
}

}  // namespace

TEST_CASE("orthogonal-deviation regret closed form") {
  // Single round with aligned unit vectors: the best deviation is the
  // reflection through the origin, worth 1 + 1 = 2.
  Vector e1 = Vector::Unit(2, 0);
  CHECK(procrustesRegret({e1}, {e1}) == doctest::Approx(2.0).epsilon(1e-12));

  // Zero plays annihilate every deviation payoff.
  std::vector<Vector> zeros(8, Vector::Zero(3));
  std::vector<Vector> losses;
  std::mt19937_64 rng(81);
  for (int t = 0; t < 8; ++t) losses.push_back(oracles::randomVector(rng, 3, -1, 1));
  CHECK(procrustesRegret(zeros, losses) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(procrustesRegret({e1}, {}), std::invalid_argument);
}

TEST_CASE("closed form dominates sampled orthogonal deviations") {
  std::mt19937_64 rng(82);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 3; ++rep) {
      auto plays = randomBallPlays(rng, n, 12);
      std::vector<Vector> losses;
      for (int t = 0; t < 12; ++t) losses.push_back(oracles::randomVector(rng, n, -1, 1));

      double closed = procrustesRegret(plays, losses);
      double sampled = oracles::procrustesSampledRegret(plays, losses, 10000, rng);
      CHECK(closed >= sampled - 1e-9);
      CHECK(closed >= 0.0);
      // Dense sampling of the compact group gets within a whisker in low dim.
      if (n == 2) CHECK(closed - sampled <= 1e-2);

      // The incremental form agrees with the sequence form.
      Matrix cross = Matrix::Zero(n, n);
      double diag = 0.0;
      for (int t = 0; t < 12; ++t) {
        cross += losses[t] * plays[t].transpose();
        diag += plays[t].dot(losses[t]);
      }
      CHECK(procrustesRegretFromCross(diag, cross) == doctest::Approx(closed).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectral-ball dual body") {
  std::mt19937_64 rng(83);
  const int n = 3;
  ConvexBody body = procrustesDualBody(n);

  // I - Q^T is a member for any orthogonal Q; scaling one out of the
  // spectral ball is not.
  for (int rep = 0; rep < 10; ++rep) {
    Matrix q = oracles::randomOrthogonal(rng, n);
    CHECK(body.contains(flatten(Matrix(Matrix::Identity(n, n) - q.transpose()))));
  }
  Matrix reflect = -Matrix::Identity(n, n);
  CHECK_FALSE(
      body.contains(flatten(Matrix(1.5 * (Matrix::Identity(n, n) - reflect.transpose())))));

  // Projection clips singular values into the unit spectral ball.
  for (int rep = 0; rep < 10; ++rep) {
    Vector x = oracles::randomVector(rng, n * n, -3, 3);
    Vector proj = body.project(x);
    CHECK(body.contains(proj));
    CHECK((body.project(proj) - proj).cwiseAbs().maxCoeff() < 1e-10);
    Matrix m = Matrix::Identity(n, n) - unflatten(proj, n, n).transpose();
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-9);
    // Projection optimality against random members.
    Matrix q = oracles::randomOrthogonal(rng, n);
    Vector member = flatten(Matrix(Matrix::Identity(n, n) - q.transpose()));
    CHECK((x - proj).squaredNorm() <= (x - member).squaredNorm() + 1e-9);
  }
}

TEST_CASE("kernel-projection responder") {
  const int n = 2;

  // M = I: the whole space is fixed, so the preference direction is returned
  // at unit scale.
  Vector pref(2);
  pref << 1.0, 0.5;
  Vector atIdentity = procrustesResponder(Matrix::Zero(n, n));  // dual 0 <=> M = I
  CHECK((atIdentity - pref / pref.norm()).cwiseAbs().maxCoeff() < 1e-10);

  // M = rotation by pi/2: no fixed direction, the only feasible play is 0.
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  Matrix dual = Matrix::Identity(2, 2) - rot.transpose();
  CHECK(procrustesResponder(dual).cwiseAbs().maxCoeff() <= 1e-12);

  // Random averages of orthogonal matrices: the halfspace residual stays at
  // numerical scale and the play stays in the unit ball.
  std::mt19937_64 rng(84);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix m = Matrix::Zero(3, 3);
    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
      double w = oracles::uniform(rng, 0.1, 1.0);
      m += w * oracles::randomOrthogonal(rng, 3);
      total += w;
    }
    m /= total;
    Matrix dualPoint = Matrix::Identity(3, 3) - m.transpose();
    Vector p = procrustesResponder(dualPoint);
    CHECK(p.norm() <= 1.0 + 1e-12);
    CHECK(procrustesResponderResidual(dualPoint, p) <= 1e-7);
  }

  // A pure rotation admits its axis as a fixed direction in 3-D: the
  // preference component along the axis survives the kernel projection.
  Matrix axis(3, 3);
  axis << std::cos(1.0), -std::sin(1.0), 0, std::sin(1.0), std::cos(1.0), 0, 0, 0, 1;
  Vector p = procrustesResponder(Matrix(Matrix::Identity(3, 3) - axis.transpose()));
  CHECK(p(2) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(std::abs(p(0)) < 1e-9);
  CHECK(std::abs(p(1)) < 1e-9);
}
