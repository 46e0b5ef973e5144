#include "pna/harness/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pna/apps/bayes.hpp"
#include "pna/apps/cmdp.hpp"
#include "pna/apps/procrustes.hpp"
#include "pna/apps/swap.hpp"
#include "pna/approach.hpp"
#include "pna/geometry.hpp"
#include "pna/harness/adversary.hpp"
#include "pna/harness/experiment.hpp"
#include "pna/harness/mdp_io.hpp"
#include "pna/maxent.hpp"
#include "pna/olo.hpp"
#include "pna/oracle.hpp"

#ifndef PNA_DATA_DIR
#define PNA_DATA_DIR "data"
#endif

namespace pna::harness {
namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

struct Checks {
  std::vector<std::string> lines;
  bool allOk = true;

  void add(bool ok, const std::string& label) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + label);
    allOk = allOk && ok;
  }
};

SuiteResult finish(const std::string& name, double budget, Checks& checks,
                   Clock::time_point start) {
  SuiteResult result;
  result.name = name;
  result.wallSeconds = secondsSince(start);
  result.wallBudgetSeconds = budget;
  if (budget > 0) {
    checks.add(result.wallSeconds <= budget, "wall time " + num(result.wallSeconds) +
                                                 "s within budget " + num(budget) + "s");
  }
  result.checks = checks.lines;
  result.pass = checks.allOk;
  return result;
}

// Deterministic RNG layer: all draws are reduced to the 53-bit uniform so the
// battery outcomes are bit-stable across standard libraries.
struct TestRng {
  std::mt19937_64 eng;

  explicit TestRng(std::uint64_t seed) : eng(seed) {}

  double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double gaussian() {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double u1 = std::max(unit(), 1e-300);
    double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }
  Vector vec(int dim, double lo, double hi) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = range(lo, hi);
    return v;
  }
  Matrix mat(int rows, int cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = range(lo, hi);
    return m;
  }
  Vector simplex(int dim) {  // uniform (flat Dirichlet) via exponentials
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = -std::log(std::max(unit(), 1e-300));
    return v / v.sum();
  }
  Vector ball(int dim) {  // uniform direction, radius biased toward the shell
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gaussian();
    double n = v.norm();
    if (n <= 0) return Vector::Zero(dim);
    return v / n * std::pow(unit(), 1.0 / dim);
  }
  Matrix orthogonal(int dim) {
    Matrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) g(i, j) = gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
      if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
  }
};

// Random bilinear payoff family over R^{n×m} with the zero matrix appended,
// so that the dual hull conv{v_i} is exactly the polar-side support set of
// f(x) = max(max_i ⟨v_i,x⟩, 0) (the clamp's zero coordinate is a vertex).
ExplicitPayoff randomFamily(TestRng& rng, int n, int m, int dRandom) {
  std::vector<PayoffMatrix> coeffs;
  coeffs.reserve(dRandom + 1);
  for (int i = 0; i < dRandom; ++i) coeffs.push_back(rng.mat(n, m, -1.0, 1.0));
  coeffs.push_back(PayoffMatrix::Zero(n, m));
  return ExplicitPayoff::fromCoeffs(std::move(coeffs));
}

// Multilevel grid minimization over the weight simplex (K ≤ 3 vertices).
// Sound for convex objectives: each level zooms into a slightly padded cell
// neighborhood of the grid argmin.
// Exact value of  min_{w ∈ Δ_s} max(0, max_i (c_i − (Bᵀw)_i))  by enumerating
// the vertices of the epigraph LP. After substituting w_s = 1 − Σ_{k<s} w_k
// the problem is min t over p = s free variables subject to G y ≥ h; every
// optimum sits at a vertex where p linearly independent rows are active, so
// checking all row subsets is an exhaustive, solver-independent oracle.
double exactSimplexLpMin(const Vector& c, const Matrix& B) {
  const int s = static_cast<int>(B.rows());
  const int d = static_cast<int>(c.size());
  const int p = s;  // free variables: w_1..w_{s−1}, t
  std::vector<Vector> rows;
  std::vector<double> rhs;
  for (int i = 0; i < d; ++i) {
    Vector g = Vector::Zero(p);
    for (int k = 0; k + 1 < s; ++k) g(k) = B(k, i) - B(s - 1, i);
    g(p - 1) = 1.0;
    rows.push_back(g);
    rhs.push_back(c(i) - B(s - 1, i));
  }
  for (int k = 0; k + 1 < s; ++k) {
    Vector g = Vector::Zero(p);
    g(k) = 1.0;
    rows.push_back(g);
    rhs.push_back(0.0);
  }
  {
    Vector g = Vector::Zero(p);
    for (int k = 0; k + 1 < s; ++k) g(k) = -1.0;
    rows.push_back(g);
    rhs.push_back(-1.0);  // w_s = 1 − Σ w_k ≥ 0
  }
  {
    Vector g = Vector::Zero(p);
    g(p - 1) = 1.0;
    rows.push_back(g);
    rhs.push_back(0.0);  // t ≥ 0
  }

  const int total = static_cast<int>(rows.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(p);
  std::function<void(int, int)> recurse = [&](int start, int chosen) {
    if (chosen == p) {
      Matrix G(p, p);
      Vector h(p);
      for (int r = 0; r < p; ++r) {
        G.row(r) = rows[pick[r]].transpose();
        h(r) = rhs[pick[r]];
      }
      Eigen::FullPivLU<Matrix> lu(G);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      Vector y = lu.solve(h);
      for (int r = 0; r < total; ++r) {
        if (rows[r].dot(y) < rhs[r] - 1e-9) return;
      }
      best = std::min(best, y(p - 1));
      return;
    }
    for (int r = start; r <= total - (p - chosen); ++r) {
      pick[chosen] = r;
      recurse(r + 1, chosen + 1);
    }
  };
  recurse(0, 0);
  return best;
}

// ---------------------------------------------------------------------------
// duality: support-value solver vs vertex max, polytope duality vs grid
// primal, and the payoff-space/basis-space distance identity.
// ---------------------------------------------------------------------------
SuiteResult suiteDuality() {
  auto start = Clock::now();
  Checks checks;
  TestRng rng(2026001);

  double worstSupport = 0, worstClamp = 0, worstIdentity = 0;
  for (int inst = 0; inst < 100; ++inst) {
    int n = rng.integer(1, 3), m = rng.integer(1, 3);
    ExplicitPayoff payoff = randomFamily(rng, n, m, rng.integer(2, 7));
    PayoffMatrix z = rng.mat(n, m, -1.0, 1.0);

    double viaSolver = fenchelDualDistance(payoff, z, {PayoffMatrix::Zero(n, m)});
    double viaVertices = payoff.dualSup(z);
    worstSupport = std::max(worstSupport, std::abs(viaSolver - viaVertices));
    worstClamp = std::max(worstClamp,
                          std::abs(std::max(viaSolver, 0.0) - pseudonormEval(payoff, z)));

    int rounds = rng.integer(1, 5);
    Vector uSum = Vector::Zero(payoff.d);
    PayoffMatrix zSum = PayoffMatrix::Zero(n, m);
    for (int t = 0; t < rounds; ++t) {
      Vector p = rng.simplex(n);
      Vector l = rng.vec(m, 0.0, 1.0);
      uSum += payoff.payoff(p, l);
      zSum += basisMap(p, l);
    }
    double uSide = linfDistanceToOrthant(Vector(uSum / rounds));
    double zSide = std::max(pseudodistanceToCone(payoff, zSum / rounds), 0.0);
    worstIdentity = std::max(worstIdentity, std::abs(uSide - zSide));
  }
  checks.add(worstSupport <= 1e-9,
             "support-value solver matches vertex max on 100 instances (worst " +
                 num(worstSupport) + ")");
  checks.add(worstClamp <= 1e-9,
             "clamped support value equals pseudonorm eval (worst " + num(worstClamp) + ")");
  checks.add(worstIdentity <= 1e-9,
             "payoff-space and basis-space distances agree on random plays (worst " +
                 num(worstIdentity) + ")");

  double worstPolytope = 0;
  for (int inst = 0; inst < 20; ++inst) {
    int n = rng.integer(1, 2), m = rng.integer(1, 2);
    ExplicitPayoff payoff = randomFamily(rng, n, m, rng.integer(2, 5));
    PayoffMatrix z = rng.mat(n, m, -1.0, 1.0);
    int sCount = rng.integer(1, 3);
    std::vector<PayoffMatrix> vertices;
    for (int s = 0; s < sCount; ++s) vertices.push_back(rng.mat(n, m, -1.0, 1.0));

    double dual = std::max(fenchelDualDistance(payoff, z, vertices), 0.0);
    Vector cVec(payoff.d);
    Matrix bMat(sCount, payoff.d);
    for (int i = 0; i < payoff.d; ++i) {
      cVec(i) = (payoff.coeffs[i].array() * z.array()).sum();
      for (int s = 0; s < sCount; ++s) {
        bMat(s, i) = (payoff.coeffs[i].array() * vertices[s].array()).sum();
      }
    }
    double primal = exactSimplexLpMin(cVec, bMat);
    worstPolytope = std::max(worstPolytope, std::abs(dual - primal));
  }
  checks.add(worstPolytope <= 1e-6,
             "polytope distance duality matches enumerated-vertex primal on 20 instances (worst " +
                 num(worstPolytope) + ")");

  return finish("duality", 60.0, checks, start);
}

// ---------------------------------------------------------------------------
// dualset: support probes of the hull, cone pairing, the oracle extension of
// the dual set, iterate-norm bounds on both FTRL paths, and the cone
// reconstruction accuracy.
// ---------------------------------------------------------------------------
SuiteResult suiteDualset() {
  auto start = Clock::now();
  Checks checks;
  TestRng rng(2026002);

  // Hull membership vs 10^3 support probes; rejected points must fail the
  // probe along their own projection normal.
  double worstProbe = -std::numeric_limits<double>::infinity();
  double worstRejected = std::numeric_limits<double>::infinity();
  int agreeAccept = 0, agreeReject = 0, accepted = 0, rejected = 0;
  for (int inst = 0; inst < 10; ++inst) {
    int n = rng.integer(1, 3), m = rng.integer(1, 3);
    ExplicitPayoff payoff = randomFamily(rng, n, m, rng.integer(2, 5));
    const int nm = n * m;

    for (int trial = 0; trial < 4; ++trial) {
      PayoffMatrix inside = payoff.dualFromSimplex(rng.simplex(payoff.d));
      ++accepted;
      if (hullMembership(payoff, inside) && hullDistanceLp(payoff, inside) <= 1e-6) {
        ++agreeAccept;
      }
      Vector insideFlat = inside.reshaped();
      for (int probe = 0; probe < 1000; ++probe) {
        Vector dir = rng.vec(nm, -1.0, 1.0);
        double dirNorm = dir.norm();
        if (dirNorm <= 0) continue;
        dir /= dirNorm;
        double lhs = insideFlat.dot(dir);
        double rhs = payoff.dualSup(unflatten(dir, n, m));
        worstProbe = std::max(worstProbe, lhs - rhs);
      }
    }

    for (int trial = 0; trial < 4; ++trial) {
      PayoffMatrix anchor = payoff.dualFromSimplex(rng.simplex(payoff.d));
      Vector dir = rng.vec(nm, -1.0, 1.0);
      PayoffMatrix candidate = anchor + unflatten(dir, n, m);
      MinNormResult proj = hullProject(payoff, candidate);
      if (proj.distance <= 1e-9) continue;  // landed inside; direction unusable
      Vector outward = (candidate.reshaped() - proj.point) / proj.distance;
      PayoffMatrix outside = unflatten(Vector(proj.point + 1e-3 * outward), n, m);
      ++rejected;
      if (!hullMembership(payoff, outside, 1e-7) && hullDistanceLp(payoff, outside) > 1e-7) {
        ++agreeReject;
      }
      // The projection normal is a valid support probe: the hull support
      // value in that direction stays at the projection foot.
      double lhs = outside.reshaped().dot(outward);
      double rhs = payoff.dualSup(unflatten(outward, n, m));
      worstRejected = std::min(worstRejected, lhs - rhs);
    }
  }
  checks.add(worstProbe <= 1e-9, "accepted hull points pass 10^3 support probes (worst excess " +
                                     num(worstProbe) + ")");
  checks.add(rejected > 0 && worstRejected >= 5e-4,
             "outward-perturbed points fail their projection-normal probe (min margin " +
                 num(worstRejected) + " over " + num(rejected) + " points)");
  checks.add(agreeAccept == accepted && agreeReject == rejected,
             "min-norm and cutting-plane membership decisions agree (" + num(agreeAccept) + "+" +
                 num(agreeReject) + " of " + num(accepted + rejected) + ")");

  // Pairing containment: hull points against cone points, swap families.
  double worstPairing = -std::numeric_limits<double>::infinity();
  for (int K = 2; K <= 3; ++K) {
    apps::SwapInstance instance(K);
    ExplicitPayoff payoff = instance.explicitPayoff();
    for (int trial = 0; trial < 50; ++trial) {
      PayoffMatrix theta = payoff.dualFromSimplex(rng.simplex(payoff.d));
      Matrix x = rng.mat(K, K, -1.0, 1.0);
      for (int i = 0; i < K; ++i) {
        double rowMin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < K; ++j)
          if (j != i) rowMin = std::min(rowMin, x(i, j));
        x(i, i) = rowMin - rng.range(0.0, 0.5);  // forces max_i ⟨v_i, x⟩ ≤ 0
      }
      if (pseudodistanceToCone(payoff, x) > 0) continue;
      worstPairing = std::max(worstPairing, (theta.array() * x.array()).sum());
    }
  }
  checks.add(worstPairing <= 1e-12,
             "hull-point pairings with cone points stay nonpositive (worst " +
                 num(worstPairing) + ")");

  // Extension consistency at K = 2: the oracle-side sup agrees with the
  // explicit vertex max on cone points, the hull vertices (and random hull
  // mixtures) are certified members of the extended dual set, and a scaled
  // identity that overshoots the support values is rejected.
  {
    apps::SwapInstance instance(2);
    ExplicitPayoff payoff = instance.explicitPayoff();
    OracleBundle bundle = apps::swapOracleBundle(2);
    double worstEval = 0;
    for (int trial = 0; trial < 20; ++trial) {
      Matrix z = rng.mat(2, 2, 0.0, 1.0);
      worstEval = std::max(worstEval,
                           std::abs(evalMaxOverZ(bundle, z) - payoff.dualSup(z)));
    }
    checks.add(worstEval <= 1e-6,
               "oracle-path sup matches explicit vertex max on cone points (worst " +
                   num(worstEval) + ")");

    bool allInside = true;
    double worstMinH = 0;
    for (const auto& v : payoff.coeffs) {
      auto report = extendedDualMembership(bundle, v, 1e-6, false, 1e-7);
      allInside = allInside && report.inside;
      worstMinH = std::min(worstMinH, report.minH);
    }
    for (int trial = 0; trial < 3; ++trial) {
      PayoffMatrix theta = payoff.dualFromSimplex(rng.simplex(payoff.d));
      auto report = extendedDualMembership(bundle, theta, 1e-6, false, 1e-7);
      allInside = allInside && report.inside;
      worstMinH = std::min(worstMinH, report.minH);
    }
    checks.add(allInside, "hull vertices and mixtures certified inside the extended dual set "
                          "(min h " +
                              num(worstMinH) + ")");
    auto rejectReport = extendedDualMembership(bundle, Matrix(1.5 * Matrix::Identity(2, 2)),
                                               1e-6, false, 1e-7);
    checks.add(!rejectReport.inside, "overshooting dual candidate rejected (min h " +
                                         num(rejectReport.minH) + ")");
  }

  // Iterate norms, explicit path: every dual iterate lies in the hull, whose
  // vertex norms are bounded by the diameter (the zero relabeling is a
  // vertex).
  {
    bool ok = true;
    double worst = 0;
    for (int K = 2; K <= 3; ++K) {
      apps::SwapInstance instance(K);
      double diam = hullDiameter(instance.explicitPayoff());
      ExperimentConfig cfg;
      cfg.app = Application::Swap;
      cfg.K = K;
      cfg.T = 32;
      cfg.algo = AlgoPath::PseudoQuadratic;
      cfg.adversary = AdversaryKind::IidUniform;
      cfg.seed = 11;
      RunOutput out = runExperiment(cfg);
      for (const auto& row : out.trace) {
        worst = std::max(worst, row.dualNorm - diam);
        ok = ok && row.dualNorm <= diam + 1e-6;
      }
    }
    checks.add(ok, "explicit-path iterate norms stay within the hull diameter (worst excess " +
                       num(worst) + ")");
  }

  // Iterate norms, oracle path: bounded by the bundle radius rho.
  {
    OracleBundle bundle = apps::swapOracleBundle(2);
    OraclePseudoConfig cfg;
    cfg.bundle = bundle;
    cfg.dualCenter = apps::swapUniformDual(2).reshaped();
    cfg.stepTol = 5e-2;
    cfg.membershipTol = 1e-3;
    Adversary adv(AdversaryKind::IidUniform, 2, 0.0, 1.0, 21);
    ApproachRun run = pseudonormRunOracle(cfg, adv.asLossSource(), 4);
    bool ok = true;
    double worst = 0;
    for (const auto& row : run.trace) {
      worst = std::max(worst, row.dualNorm);
      ok = ok && row.dualNorm <= bundle.rho + 1e-6;
    }
    ok = ok && run.finalDistance >= 0;
    checks.add(ok, "oracle-path iterate norms stay within the bundle radius (max " + num(worst) +
                       " vs " + num(bundle.rho) + ")");
  }

  // Cone-decomposition reconstruction accuracy and rejection of points with a
  // negative coordinate (outside the swap payoff cone).
  {
    double worstRecon = 0;
    bool allInside = true, allRejected = true;
    for (int K = 2; K <= 3; ++K) {
      OracleBundle bundle = apps::swapOracleBundle(K);
      for (int trial = 0; trial < 20; ++trial) {
        Matrix z = Matrix::Zero(K, K);
        for (int k = 0; k < K; ++k) {
          z.col(k) = rng.range(0.0, 2.0) * rng.simplex(K);
        }
        auto dec = coneMembershipZ(z, bundle.actionBody, bundle.generators);
        if (!dec) {
          allInside = false;
          continue;
        }
        Matrix recon = Matrix::Zero(K, K);
        for (std::size_t r = 0; r < dec->plays.size(); ++r) {
          int k = dec->columns[r];
          recon.col(k) +=
              dec->alpha(k) * bundle.generators.scales(k) * dec->plays[r].p;
        }
        worstRecon =
            std::max(worstRecon, (recon - z).norm() / std::max(1.0, z.norm()));

        Matrix outside = z;
        outside(rng.integer(0, K - 1), rng.integer(0, K - 1)) = -0.2;
        if (coneMembershipZ(outside, bundle.actionBody, bundle.generators)) {
          allRejected = false;
        }
      }
    }
    checks.add(allInside && worstRecon <= 1e-8,
               "cone decompositions reconstruct their input (worst relative error " +
                   num(worstRecon) + ")");
    checks.add(allRejected, "points with a negative coordinate are rejected by the cone test");
  }

  return finish("dualset", 120.0, checks, start);
}

// ---------------------------------------------------------------------------
// equivalence: the closed-form entropy path and the padded exponential-weights
// path produce identical plays, and the dual pairing identity holds.
// ---------------------------------------------------------------------------
SuiteResult suiteEquivalence() {
  auto start = Clock::now();
  Checks checks;
  TestRng rng(2026003);

  double worstPlay = 0;
  for (int K = 2; K <= 3; ++K) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ExperimentConfig base;
      base.app = Application::Swap;
      base.K = K;
      base.T = 256;
      base.adversary = AdversaryKind::IidUniform;
      base.seed = seed;

      ExperimentConfig cfgMaxent = base;
      cfgMaxent.algo = AlgoPath::PseudoMaxent;
      ExperimentConfig cfgLinf = base;
      cfgLinf.algo = AlgoPath::LinfNegentropy;

      RunOutput a = runExperiment(cfgMaxent);
      RunOutput b = runExperiment(cfgLinf);
      for (int t = 0; t < base.T; ++t) {
        worstPlay = std::max(worstPlay,
                             (a.plays[t] - b.plays[t]).cwiseAbs().maxCoeff());
      }
    }
  }
  checks.add(worstPlay <= 1e-6,
             "entropy and padded-hedge paths play identically at K=2,3 over 5 seeds (worst "
             "coordinate gap " +
                 num(worstPlay) + ")");

  double worstPairing = 0;
  {
    apps::SwapInstance instance(3);
    ExplicitPayoff payoff = instance.explicitPayoff();
    for (int trial = 0; trial < 50; ++trial) {
      Vector theta = rng.simplex(payoff.d);
      Vector p = rng.simplex(3);
      Vector l = rng.vec(3, 0.0, 1.0);
      double lhs = theta.dot(payoff.payoff(p, l));
      PayoffMatrix pulled = payoff.dualFromSimplex(theta);
      double rhs = (pulled.array() * basisMap(p, l).array()).sum();
      worstPairing = std::max(worstPairing, std::abs(lhs - rhs));
    }
  }
  checks.add(worstPairing <= 1e-12,
             "dual pairing identity between payoff and basis coordinates (worst " +
                 num(worstPairing) + ")");

  return finish("equivalence", 120.0, checks, start);
}

// ---------------------------------------------------------------------------
// maxent: the entropy-maximization oracle agrees with the closed form on the
// relabeling family, its Gibbs output is a normalized distribution matching
// the requested marginals, and the cutting-plane FTRL step agrees with the
// closed-form step.
// ---------------------------------------------------------------------------
SuiteResult suiteMaxent() {
  auto start = Clock::now();
  Checks checks;
  TestRng rng(2026004);

  double worstValue = 0, worstResidual = 0, worstNorm = 0, worstDual = 0;
  bool allConverged = true;
  for (int trial = 0; trial < 50; ++trial) {
    int K = 2 + (trial % 2);
    apps::SwapInstance instance(K);
    ExplicitPayoff payoff = instance.explicitPayoff();

    Matrix q(K, K);
    for (int i = 0; i < K; ++i) {
      Vector row = rng.vec(K, 0.08, 1.08);
      q.row(i) = (row / row.sum()).transpose();
    }
    Matrix theta = apps::dualFromMarginals(q);
    double closedForm = apps::swapMaxentRegularizer(theta);

    MaxentResult res = maxentOracleSmall(payoff, theta, 1e-10, 5000);
    allConverged = allConverged && res.converged;
    worstValue = std::max(worstValue, std::abs(-res.entropy - closedForm));
    worstResidual = std::max(worstResidual, res.residual);
    worstNorm = std::max(worstNorm, std::abs(res.gibbs.sum() - 1.0));
    worstDual = std::max(worstDual, std::abs(res.dualValue + res.entropy));

    Vector marginal = payoff.stacked().transpose() * res.gibbs;
    worstResidual =
        std::max(worstResidual, (marginal - flatten(theta)).cwiseAbs().maxCoeff());
  }
  checks.add(allConverged, "oracle converged on 50 marginal targets at K=2,3");
  checks.add(worstValue <= 1e-5,
             "oracle value matches the closed-form regularizer (worst " + num(worstValue) + ")");
  checks.add(worstResidual <= 1e-9,
             "Gibbs marginals match the requested dual point (worst " + num(worstResidual) + ")");
  checks.add(worstNorm <= 1e-9,
             "Gibbs output is normalized (worst " + num(worstNorm) + ")");
  checks.add(worstDual <= 1e-5,
             "dual objective equals minus the entropy at the optimum (worst " + num(worstDual) +
                 ")");

  // Cutting-plane cross-check of the closed-form FTRL step at K = 2.
  {
    Matrix w = rng.mat(2, 2, 0.0, 3.0);
    double eta = 0.37;
    Matrix closed = apps::swapMaxentStep(w, eta);
    ConvexBody hull = apps::swapDualBody(2);
    SolveOptions opts;
    opts.tol = 1e-9;
    Vector cumulative = -flatten(w);  // OLO losses are negated payoffs
    Vector numeric = ftrlCustomStep(
        hull,
        [](const Vector& x) {
          return apps::swapMaxentRegularizer(unflatten(x, 2, 2), 1e-3);
        },
        cumulative, eta, opts);
    double gap = (numeric - flatten(closed)).cwiseAbs().maxCoeff();
    checks.add(gap <= 1e-3,
               "cutting-plane FTRL step matches the closed-form step (gap " + num(gap) + ")");
  }

  return finish("maxent", 120.0, checks, start);
}

// ---------------------------------------------------------------------------
// rates: pinned regret bounds at T = 4096 under the iid-uniform adversary,
// 20 seeds per application.
// ---------------------------------------------------------------------------
SuiteResult suiteRates() {
  auto start = Clock::now();
  Checks checks;
  const int T = 4096;
  const double sqrtT = std::sqrt(static_cast<double>(T));

  auto sweep = [&](const ExperimentConfig& proto, double bound, const std::string& label) {
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ExperimentConfig cfg = proto;
      cfg.seed = seed;
      RunOutput out = runExperiment(cfg);
      worst = std::max(worst, out.finalRegret);
      ok = ok && out.finalRegret <= bound;
    }
    checks.add(ok, label + ": max regret " + num(worst) + " <= " + num(bound) +
                       " over 20 seeds");
  };

  {
    ExperimentConfig cfg;
    cfg.app = Application::External;
    cfg.K = 4;
    cfg.T = T;
    cfg.algo = AlgoPath::LinfNegentropy;
    cfg.adversary = AdversaryKind::IidUniform;
    sweep(cfg, 2.0 * std::sqrt(T * std::log(cfg.K + 1.0)) + 10.0, "external K=4 padded-hedge");
  }
  {
    ExperimentConfig cfg;
    cfg.app = Application::Swap;
    cfg.K = 3;
    cfg.T = T;
    cfg.algo = AlgoPath::PseudoMaxent;
    cfg.adversary = AdversaryKind::IidUniform;
    sweep(cfg, 3.0 * std::sqrt(T * cfg.K * std::log(static_cast<double>(cfg.K))) + 20.0,
          "swap K=3 entropy path");
  }
  {
    ExperimentConfig cfg;
    cfg.app = Application::Swap;
    cfg.K = 3;
    cfg.T = T;
    cfg.algo = AlgoPath::PseudoQuadratic;
    cfg.adversary = AdversaryKind::IidUniform;
    sweep(cfg, 3.0 * cfg.K * sqrtT + 20.0, "swap K=3 quadratic path");
  }
  {
    ExperimentConfig cfg;
    cfg.app = Application::Bayes;
    cfg.C = 2;
    cfg.K = 2;
    cfg.T = T;
    cfg.algo = AlgoPath::PseudoQuadratic;
    cfg.adversary = AdversaryKind::IidUniform;
    sweep(cfg, 3.0 * cfg.K * cfg.C * sqrtT + 20.0, "bayes C=2 K=2 quadratic path");
  }
  {
    ExperimentConfig cfg;
    cfg.app = Application::Procrustes;
    cfg.n = 3;
    cfg.T = T;
    cfg.algo = AlgoPath::PseudoQuadratic;
    cfg.adversary = AdversaryKind::IidUniform;
    sweep(cfg, 3.0 * std::sqrt(static_cast<double>(cfg.n) * T) + 20.0,
          "procrustes n=3 quadratic path");
  }

  return finish("rates", 600.0, checks, start);
}

// ---------------------------------------------------------------------------
// cmdp: the shipped feasible instance satisfies its construction margin and
// the feasibility runs meet the pinned violation bounds.
// ---------------------------------------------------------------------------
SuiteResult suiteCmdp() {
  auto start = Clock::now();
  Checks checks;

  apps::LayeredMdp mdp;
  try {
    mdp = loadMdp(std::string(PNA_DATA_DIR) + "/cmdp_small.mdp");
  } catch (const std::exception& e) {
    checks.add(false, std::string("failed to load shipped instance: ") + e.what());
    return finish("cmdp", 180.0, checks, start);
  }

  checks.add(mdp.horizon() == 3 && mdp.states() == 6 && mdp.actions == 2 && mdp.d == 10,
             "shipped instance shape: 3 layers of sizes 1/2/2/1, 2 actions, 10 constraints");

  apps::Policy uniform(mdp.states());
  for (int x = 0; x < mdp.states(); ++x) {
    if (mdp.acting(x)) uniform[x] = Vector::Constant(mdp.actions, 1.0 / mdp.actions);
  }
  Vector loads = apps::exactLoads(mdp, apps::occupancyFromPolicy(mdp, uniform));
  double margin = (mdp.thresholds - loads).minCoeff();
  checks.add(margin >= 0.149 && margin <= 0.151,
             "uniform policy satisfies every threshold with margin 0.15 (actual " + num(margin) +
                 ")");

  const int T = 10000;
  const double L = mdp.horizon();
  double rate = 2.0 * L * std::sqrt(std::log(mdp.d + 1.0) / T);

  {
    apps::LayeredMdp clean = mdp;
    clean.eps0 = 0;
    clean.eps1 = 0;
    apps::CmdpRunResult run = apps::cmdpFeasibilityRun(clean, T, 7);
    checks.add(run.finalViolation <= rate + 0.05,
               "noise-free violation " + num(run.finalViolation) + " <= " + num(rate + 0.05));
    checks.add(std::abs(run.finalViolation - run.violationCurve.back()) <= 1e-12,
               "final violation equals the last curve entry");
  }
  {
    apps::LayeredMdp noisy = mdp;
    noisy.eps0 = 0;
    noisy.eps1 = 0.2;
    apps::CmdpRunResult run = apps::cmdpFeasibilityRun(noisy, T, 7);
    double bound = rate + 2.0 * noisy.eps1 + 0.05;
    checks.add(run.finalViolation <= bound, "estimation noise 0.2 keeps violation " +
                                                num(run.finalViolation) + " <= " + num(bound));
  }

  return finish("cmdp", 180.0, checks, start);
}

// ---------------------------------------------------------------------------
// bruteforce: regret formulas against direct deviation enumeration, sampled
// orthogonal lower bounds, and the MDP oracles against exhaustive policy
// enumeration and Monte-Carlo rollouts.
// ---------------------------------------------------------------------------
SuiteResult suiteBruteforce() {
  auto start = Clock::now();
  Checks checks;
  TestRng rng(2026005);

  {
    double worst = 0;
    for (int inst = 0; inst < 5; ++inst) {
      const int K = 2, T = 16;
      std::vector<Vector> plays, losses;
      for (int t = 0; t < T; ++t) {
        plays.push_back(rng.simplex(K));
        losses.push_back(rng.vec(K, 0.0, 1.0));
      }
      double fast = apps::swapRegret(plays, losses);
      double slow = 0;
      for (int a = 0; a < K; ++a) {
        for (int b = 0; b < K; ++b) {
          int pi[2] = {a, b};
          double total = 0;
          for (int t = 0; t < T; ++t) {
            for (int i = 0; i < K; ++i) {
              total += plays[t](i) * (losses[t](i) - losses[t](pi[i]));
            }
          }
          slow = std::max(slow, total);
        }
      }
      worst = std::max(worst, std::abs(fast - std::max(slow, 0.0)));
    }
    checks.add(worst <= 1e-12,
               "swap regret equals the 4-relabeling enumeration (worst " + num(worst) + ")");
  }

  {
    double worst = 0;
    apps::BayesInstance instance = apps::BayesInstance::uniformPrior(2, 2);
    const int C = 2, K = 2, T = 2;
    for (int inst = 0; inst < 3; ++inst) {
      std::vector<Vector> plays, losses;
      for (int t = 0; t < T; ++t) {
        Vector p(C * K), l(C * K);
        for (int c = 0; c < C; ++c) p.segment(c * K, K) = rng.simplex(K);
        l = rng.vec(C * K, 0.0, 1.0);
        plays.push_back(p);
        losses.push_back(l);
      }
      double fast = apps::bayesSwapRegret(instance, plays, losses);
      double slow = 0;
      for (int kappa = 0; kappa < 4; ++kappa) {
        int kap[2] = {kappa % 2, kappa / 2};
        for (int tuple = 0; tuple < 16; ++tuple) {
          int pi[2][2];  // pi[c][i]
          int enc = tuple;
          for (int c = 0; c < C; ++c) {
            for (int i = 0; i < K; ++i) {
              pi[c][i] = enc % K;
              enc /= K;
            }
          }
          double total = 0;
          for (int t = 0; t < T; ++t) {
            for (int c = 0; c < C; ++c) {
              double base = 0, deviated = 0;
              for (int i = 0; i < K; ++i) {
                base += plays[t](c * K + i) * losses[t](c * K + i);
                deviated += plays[t](kap[c] * K + i) * losses[t](c * K + pi[c][i]);
              }
              total += instance.mu(c) * (base - deviated);
            }
          }
          slow = std::max(slow, total);
        }
      }
      worst = std::max(worst, std::abs(fast - std::max(slow, 0.0)));
    }
    checks.add(worst <= 1e-12,
               "bayes regret equals the 64-deviation enumeration (worst " + num(worst) + ")");
  }

  {
    const int n = 3, T = 8;
    std::vector<Vector> plays, losses;
    for (int t = 0; t < T; ++t) {
      plays.push_back(rng.ball(n));
      losses.push_back(rng.vec(n, -1.0, 1.0));
    }
    double regret = apps::procrustesRegret(plays, losses);
    double playLossSum = 0;
    Matrix cross = Matrix::Zero(n, n);
    for (int t = 0; t < T; ++t) {
      playLossSum += plays[t].dot(losses[t]);
      cross += losses[t] * plays[t].transpose();
    }
    double sampled = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 10000; ++s) {
      Matrix q = rng.orthogonal(n);
      sampled = std::max(sampled, playLossSum - (q.array() * cross.array()).sum());
    }
    checks.add(regret + 1e-3 >= sampled,
               "procrustes regret dominates the 10^4-sample orthogonal bound (" + num(regret) +
                   " vs " + num(sampled) + ")");
  }

  apps::LayeredMdp mdp;
  try {
    mdp = loadMdp(std::string(PNA_DATA_DIR) + "/cmdp_small.mdp");
  } catch (const std::exception& e) {
    checks.add(false, std::string("failed to load shipped instance: ") + e.what());
    return finish("bruteforce", 300.0, checks, start);
  }
  mdp.eps0 = 0;
  mdp.eps1 = 0;

  {
    auto all = apps::enumerateDeterministicPolicies(mdp);
    std::mt19937_64 oracleRng(99);
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10; ++trial) {
      Vector theta = rng.vec(mdp.d, 0.0, 1.0);
      apps::Policy best = apps::bestResponse(mdp, theta, oracleRng);
      double value =
          theta.dot(apps::exactLoads(mdp, apps::occupancyFromPolicy(mdp, best)));
      double enumerated = std::numeric_limits<double>::infinity();
      for (const auto& pol : all) {
        enumerated = std::min(
            enumerated,
            theta.dot(apps::exactLoads(mdp, apps::occupancyFromPolicy(mdp, pol))));
      }
      worst = std::max(worst, value - enumerated);
    }
    checks.add(worst <= 1e-12,
               "best response matches exhaustive policy enumeration (worst excess " + num(worst) +
                   ")");
  }

  {
    apps::Policy uniform(mdp.states());
    for (int x = 0; x < mdp.states(); ++x) {
      if (mdp.acting(x)) uniform[x] = Vector::Constant(mdp.actions, 1.0 / mdp.actions);
    }
    std::mt19937_64 oracleRng(123);
    Vector exact = apps::estOracle(mdp, uniform, oracleRng);
    Vector viaLoads = apps::exactLoads(mdp, apps::occupancyFromPolicy(mdp, uniform));
    checks.add((exact - viaLoads).cwiseAbs().maxCoeff() <= 1e-12,
               "noise-free estimation oracle returns the exact loads");

    const int N = 200000;
    std::mt19937_64 mcRng(2718);
    Vector sum = Vector::Zero(mdp.d), sumSq = Vector::Zero(mdp.d);
    for (int s = 0; s < N; ++s) {
      Vector roll = apps::rolloutOnce(mdp, uniform, mcRng);
      sum += roll;
      sumSq += roll.cwiseProduct(roll);
    }
    Vector mean = sum / N;
    bool ok = true;
    double worstZ = 0;
    for (int i = 0; i < mdp.d; ++i) {
      double var = std::max(sumSq(i) / N - mean(i) * mean(i), 0.0);
      double half = 3.0 * std::sqrt(var / N) + 1e-12;
      double gap = std::abs(mean(i) - exact(i));
      worstZ = std::max(worstZ, half > 0 ? gap / half * 3.0 : 0.0);
      ok = ok && gap <= half;
    }
    checks.add(ok, "Monte-Carlo rollouts agree with exact loads within 3 sigma (worst " +
                       num(worstZ) + " sigma)");
  }

  return finish("bruteforce", 300.0, checks, start);
}

// ---------------------------------------------------------------------------
// complexity: the entropy path's per-round cost scales at most quadratically
// in K, while the explicit enumeration path refuses K^K materialization.
// ---------------------------------------------------------------------------
SuiteResult suiteComplexity() {
  auto start = Clock::now();
  Checks checks;

  auto perRound = [](int K) {
    std::vector<double> walls;
    for (int rep = 0; rep < 3; ++rep) {
      ExperimentConfig cfg;
      cfg.app = Application::Swap;
      cfg.K = K;
      cfg.T = 8192;
      cfg.algo = AlgoPath::PseudoMaxent;
      cfg.adversary = AdversaryKind::IidUniform;
      cfg.seed = 3;
      RunOutput out = runExperiment(cfg);
      walls.push_back(out.wallSeconds);
    }
    std::sort(walls.begin(), walls.end());
    return walls[1] / 8192.0;
  };

  double r8 = perRound(8);
  double r16 = perRound(16);
  double ratio = r16 / r8;
  checks.add(ratio <= 4.5, "per-round wall time grows " + num(ratio) +
                               "x from K=8 to K=16 (quadratic budget 4.5x)");

  bool rejected8 = false, rejected16 = false;
  try {
    apps::swapLinfProblem(8);
  } catch (const std::invalid_argument&) {
    rejected8 = true;
  }
  try {
    apps::swapLinfProblem(16);
  } catch (const std::invalid_argument&) {
    rejected16 = true;
  }
  checks.add(rejected8 && rejected16,
             "explicit enumeration path rejects K=8 and K=16 (K^K beyond the guard)");

  return finish("complexity", 0.0, checks, start);
}

}  // namespace

std::string SuiteResult::detail() const {
  std::ostringstream out;
  out << name << ": " << (pass ? "PASS" : "FAIL") << " (" << num(wallSeconds) << "s";
  if (wallBudgetSeconds > 0) out << " / budget " << num(wallBudgetSeconds) << "s";
  out << ")\n";
  for (const auto& line : checks) out << "  " << line << "\n";
  return out.str();
}

std::vector<std::string> allSuiteNames() {
  return {"duality", "dualset", "equivalence", "maxent",
          "rates",   "cmdp",    "bruteforce",  "complexity"};
}

SuiteResult runSuite(const std::string& name) {
  SuiteResult (*battery)() = nullptr;
  if (name == "duality") battery = suiteDuality;
  else if (name == "dualset") battery = suiteDualset;
  else if (name == "equivalence") battery = suiteEquivalence;
  else if (name == "maxent") battery = suiteMaxent;
  else if (name == "rates") battery = suiteRates;
  else if (name == "cmdp") battery = suiteCmdp;
  else if (name == "bruteforce") battery = suiteBruteforce;
  else if (name == "complexity") battery = suiteComplexity;
  if (!battery) throw std::invalid_argument("runSuite: unknown suite '" + name + "'");
  try {
    return battery();
  } catch (const std::exception& e) {
    SuiteResult result;
    result.name = name;
    result.pass = false;
    result.checks = {std::string("FAIL suite aborted: ") + e.what()};
    return result;
  }
}

}  // namespace pna::harness
