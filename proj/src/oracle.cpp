#include "pna/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace pna {

namespace {

constexpr double kZeroColumn = 1e-13;

struct ColumnFit {
  double beta = 0;      // scale with proj(beta·dir) closest
  Vector point;         // projection of beta·dir onto P
  double dist = 0;      // ‖beta·dir − point‖
  bool feasible = false;
};

// Minimize dist(β·dir, P) over β ∈ [0, hi] (convex in β), then push β to the
// right end of the feasible plateau so the reconstruction scale is as
// well-conditioned as possible.
ColumnFit fitColumn(const Vector& dir, const ConvexBody& body, double hi, double tol) {
  auto distAt = [&](double beta) {
    Vector x = beta * dir;
    return (x - body.project(x)).norm();
  };
  const double invPhi = 0.6180339887498949;
  double lo = 0.0, hiB = hi;
  double x1 = hiB - invPhi * (hiB - lo);
  double x2 = lo + invPhi * (hiB - lo);
  double f1 = distAt(x1), f2 = distAt(x2);
  for (int it = 0; it < 90 && (hiB - lo) > 1e-13 * hi; ++it) {
    if (f1 < f2) {
      hiB = x2;
      x2 = x1;
      f2 = f1;
      x1 = hiB - invPhi * (hiB - lo);
      f1 = distAt(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invPhi * (hiB - lo);
      f2 = distAt(x2);
    }
  }
  double beta = 0.5 * (lo + hiB);
  double best = distAt(beta);
  for (double cand : {lo, hiB, 0.0, hi}) {
    double v = distAt(cand);
    if (v < best) {
      best = v;
      beta = cand;
    }
  }

  ColumnFit fit;
  fit.feasible = best <= tol;
  if (fit.feasible) {
    // Rightmost β with dist ≤ tol (the feasible set in β is an interval).
    double l = beta, r = hi;
    if (distAt(r) <= tol) {
      l = r;
    } else {
      for (int it = 0; it < 90 && (r - l) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (l + r);
        (distAt(mid) <= tol ? l : r) = mid;
      }
    }
    beta = l;
    best = distAt(beta);
  }
  fit.beta = beta;
  fit.point = body.project(beta * dir);
  fit.dist = best;
  return fit;
}

double coneScaleBound(const ConvexBody& body) {
  return body.innerPoint.norm() + body.outerRadius + 1.0;
}

struct EarlyExitSignal {
  Vector witness;
  double value;
};

}  // namespace

std::optional<ConeDecomposition> coneMembershipZ(const PayoffMatrix& z,
                                                 const ConvexBody& actionBody,
                                                 const OrthantGenerators& generators,
                                                 double tol) {
  if (!actionBody.project) {
    throw std::invalid_argument("coneMembershipZ: action body needs an exact projection");
  }
  const int m = static_cast<int>(z.cols());
  if (generators.scales.size() != m) {
    throw std::invalid_argument("coneMembershipZ: generator count mismatch");
  }
  const double scale = std::max(1.0, z.norm());
  const double hi = coneScaleBound(actionBody);

  ConeDecomposition dec;
  dec.alpha = Vector::Zero(m);
  for (int k = 0; k < m; ++k) {
    Vector column = z.col(k);
    double norm = column.norm();
    if (norm <= kZeroColumn * scale) continue;
    ColumnFit fit = fitColumn(column / norm, actionBody, hi, tol);
    if (!fit.feasible || fit.beta <= 1e-12) return std::nullopt;
    double lambda = generators.scales(k);
    dec.alpha(k) = norm / (lambda * fit.beta);
    Vector loss = Vector::Zero(m);
    loss(k) = lambda;
    dec.plays.push_back({fit.point, loss});
    dec.columns.push_back(k);
  }

  PayoffMatrix recon = PayoffMatrix::Zero(z.rows(), m);
  for (std::size_t r = 0; r < dec.plays.size(); ++r) {
    int k = dec.columns[r];
    recon.col(k) += dec.alpha(k) * generators.scales(k) * dec.plays[r].p;
  }
  if ((recon - z).norm() > 1e-8 * scale) return std::nullopt;
  return dec;
}

double evalMaxOverZ(const OracleBundle& bundle, const PayoffMatrix& z, double tol) {
  auto dec = coneMembershipZ(z, bundle.actionBody, bundle.generators, tol);
  if (!dec) throw std::domain_error("evalMaxOverZ: point is outside the payoff cone");
  if (dec->plays.empty()) return 0.0;
  Vector alpha(static_cast<int>(dec->plays.size()));
  for (std::size_t r = 0; r < dec->plays.size(); ++r) {
    alpha(static_cast<int>(r)) = dec->alpha(dec->columns[r]);
  }
  return bundle.regretOracle(dec->plays, alpha);
}

DualMembershipReport extendedDualMembership(const OracleBundle& bundle,
                                            const PayoffMatrix& dualPoint,
                                            double tol, bool earlyExit, double solveTol) {
  const int nm = bundle.n * bundle.m;
  Vector theta = dualPoint.reshaped();
  const double hi = coneScaleBound(bundle.actionBody);

  // Lenient value of h(z) = max(sup_i⟨v_i,z⟩, 0) − ⟨θ̃,z⟩: every column is
  // replaced by its best cone fit, so probe points slightly outside Z still
  // evaluate continuously. Only verified-feasible points may certify h < 0.
  auto evalH = [&](const Vector& flat) {
    PayoffMatrix z = unflatten(flat, bundle.n, bundle.m);
    double scale = std::max(1.0, z.norm());
    std::vector<Play> plays;
    Vector alpha(bundle.m);
    alpha.setZero();
    std::vector<int> columns;
    bool allFeasible = flat.norm() <= 1.0 + 1e-7;
    for (int k = 0; k < bundle.m; ++k) {
      Vector column = z.col(k);
      double norm = column.norm();
      if (norm <= kZeroColumn * scale) continue;
      ColumnFit fit = fitColumn(column / norm, bundle.actionBody, hi, 1e-9);
      if (!fit.feasible || fit.beta <= 1e-12) allFeasible = false;
      double beta = std::max(fit.beta, 1e-9);
      double lambda = bundle.generators.scales(k);
      alpha(k) = norm / (lambda * beta);
      Vector loss = Vector::Zero(bundle.m);
      loss(k) = lambda;
      plays.push_back({fit.point, loss});
      columns.push_back(k);
    }
    double supValue = 0.0;
    if (!plays.empty()) {
      Vector compact(static_cast<int>(plays.size()));
      for (std::size_t r = 0; r < plays.size(); ++r) {
        compact(static_cast<int>(r)) = alpha(columns[r]);
      }
      supValue = bundle.regretOracle(plays, compact);
    }
    double h = std::max(supValue, 0.0) - theta.dot(flat);
    if (earlyExit && allFeasible && h < -3.0 * tol) {
      throw EarlyExitSignal{flat, h};
    }
    return h;
  };

  ConvexBody zBody = makeZBallBody(bundle);
  SolveOptions opts;
  opts.tol = solveTol;
  if (bundle.supGradient) {
    // The supporting value ⟨g, flat⟩ recovers sup_i⟨v_i, z⟩ by positive
    // homogeneity, so the max(·, 0) branch needs no extra oracle call.
    auto supGradient = bundle.supGradient;
    int n = bundle.n, m = bundle.m;
    opts.subgradient = [supGradient, theta, n, m](const Vector& flat) {
      PayoffMatrix g = supGradient(unflatten(flat, n, m));
      Vector gFlat = flatten(g);
      if (gFlat.dot(flat) > 0) return Vector(gFlat - theta);
      return Vector(-theta);
    };
  }
  DualMembershipReport report;
  try {
    SolveResult res = convexMinimize(zBody, evalH, opts);
    report.minH = res.value;
    report.witness = res.point;
  } catch (const EarlyExitSignal& signal) {
    report.minH = signal.value;
    report.witness = signal.witness;
  } catch (const SolverFailure& failure) {
    if (failure.incumbent.point.size() != nm) throw;
    report.minH = failure.incumbent.value;
    report.witness = failure.incumbent.point;
  }
  report.inside = report.minH >= -tol;
  return report;
}

ConvexBody makeZBallBody(const OracleBundle& bundle, double tol) {
  const int nm = bundle.n * bundle.m;
  if (bundle.zInteriorPoint.size() != nm || bundle.zInteriorRadius <= 0) {
    throw std::invalid_argument("makeZBallBody: bundle lacks interior geometry for Z");
  }
  ConvexBody body;
  body.ambientDim = nm;
  body.chart = Matrix::Identity(nm, nm);
  body.chartOrigin = Vector::Zero(nm);
  body.innerPoint = bundle.zInteriorPoint;
  body.innerRadius = bundle.zInteriorRadius;
  body.outerRadius = 1.0 + bundle.zInteriorPoint.norm();

  auto actionBody = bundle.actionBody;
  auto generators = bundle.generators;
  int n = bundle.n, m = bundle.m;
  body.contains = [actionBody, generators, n, m, tol](const Vector& flat) {
    if (flat.norm() > 1.0 + tol) return false;
    return coneMembershipZ(unflatten(flat, n, m), actionBody, generators, tol).has_value();
  };
  auto coneSeparator = bundle.coneSeparator;
  Vector zInterior = bundle.zInteriorPoint;
  body.separate = [actionBody, generators, coneSeparator, zInterior, n, m,
                   tol](const Vector& flat) -> std::optional<Vector> {
    double norm = flat.norm();
    if (norm > 1.0 + tol) return Vector(flat / norm);
    PayoffMatrix z = unflatten(flat, n, m);
    double scale = std::max(1.0, z.norm());
    double hi = coneScaleBound(actionBody);
    for (int k = 0; k < m; ++k) {
      Vector column = z.col(k);
      double colNorm = column.norm();
      if (colNorm <= kZeroColumn * scale) continue;
      ColumnFit fit = fitColumn(column / colNorm, actionBody, hi, tol);
      if (fit.feasible && fit.beta > 1e-12) continue;
      // Column k is outside cone(P): build a halfspace containing the cone.
      Vector x = fit.beta * (column / colNorm);
      Vector h = x - fit.point;
      Vector normal;
      if (h.norm() > 0 && h.dot(fit.point) <= 1e-12 * h.norm() * std::max(1.0, fit.point.norm())) {
        normal = h / h.norm();  // sup over P of ⟨h,·⟩ = ⟨h, proj⟩ ≤ 0 ⇒ valid for the cone
      } else if (coneSeparator) {
        auto hook = coneSeparator(column);
        if (hook && hook->norm() > 0) normal = *hook / hook->norm();
      }
      if (normal.size() > 0) {
        Vector lifted = Vector::Zero(static_cast<int>(flat.size()));
        lifted.segment(static_cast<Eigen::Index>(k) * n, n) = normal;
        return lifted;
      }
      // Last resort: cut along the segment toward the interior point. The
      // interior ball stays feasible, which is all the engine needs.
      Vector g = flat - zInterior;
      double gNorm = g.norm();
      if (gNorm > 0) return Vector(g / gNorm);
    }
    return std::nullopt;
  };
  return body;
}

ConvexBody makeExtendedDualBody(const OracleBundle& bundle, double membershipTol) {
  const int nm = bundle.n * bundle.m;
  if (bundle.dualInteriorPoint.size() != nm || bundle.dualInteriorRadius <= 0) {
    throw std::invalid_argument("makeExtendedDualBody: bundle lacks interior geometry");
  }
  ConvexBody body;
  body.ambientDim = nm;
  body.chart = Matrix::Identity(nm, nm);
  body.chartOrigin = Vector::Zero(nm);
  body.innerPoint = bundle.dualInteriorPoint;
  body.innerRadius = bundle.dualInteriorRadius;
  body.outerRadius = bundle.rho + bundle.dualInteriorPoint.norm();

  const OracleBundle bundleCopy = bundle;
  int n = bundle.n, m = bundle.m;
  double rho = bundle.rho;
  const double solveTol = std::max(1e-10, 0.1 * membershipTol);
  body.contains = [bundleCopy, n, m, rho, membershipTol, solveTol](const Vector& flat) {
    if (flat.norm() > rho + kMembershipTol) return false;
    return extendedDualMembership(bundleCopy, unflatten(flat, n, m), membershipTol,
                                  /*earlyExit=*/false, solveTol)
        .inside;
  };
  body.separate = [bundleCopy, n, m, rho, membershipTol,
                   solveTol](const Vector& flat) -> std::optional<Vector> {
    double norm = flat.norm();
    if (norm > rho + kMembershipTol) return Vector(flat / norm);
    auto report = extendedDualMembership(bundleCopy, unflatten(flat, n, m), membershipTol,
                                         /*earlyExit=*/true, solveTol);
    if (report.inside) return std::nullopt;
    double wNorm = report.witness.norm();
    if (wNorm <= 0) return std::nullopt;
    return Vector(report.witness / wNorm);
  };
  return body;
}

}  // namespace pna
