#include "pna/approach.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pna/geometry.hpp"

namespace pna {

namespace {

constexpr double kSeparabilitySlack = 1e-7;

double roundRegret(const RegretHook& hook, int t, const Vector& p, const Vector& l,
                   double distance) {
  if (hook) return hook(t, p, l);
  return static_cast<double>(t) * distance;
}

}  // namespace

ApproachRun linfRun(const LinfProblem& problem, const LossSource& losses, int horizon,
                    const RegretHook& regretHook) {
  if (problem.d < 1) throw std::invalid_argument("linfRun: payoff dimension must be positive");
  if (problem.d > problem.dMaterializeGuard) {
    throw std::invalid_argument("linfRun: payoff dimension exceeds the materialization guard");
  }
  if (horizon < 1) throw std::invalid_argument("linfRun: horizon must be positive");

  const double bound = problem.payoffBound;
  double eta = learningRate(RegularizerKind::Negentropy, horizon, 0.0, 1.0,
                            static_cast<double>(problem.d) + 1.0);
  PaddedHedge hedge(problem.d, bound, eta);

  ApproachRun run;
  run.cumulativePayoff = Vector::Zero(problem.d);
  run.trace.reserve(horizon);
  double realizedDual = 0;

  for (int t = 1; t <= horizon; ++t) {
    Vector thetaBar = hedge.subWeights();
    Vector p = problem.responder(thetaBar);

    DistanceProbe probe = [&](const Vector& candidate) {
      Vector u = problem.payoff(p, candidate);
      return std::max((run.cumulativePayoff + u).maxCoeff(), 0.0) / static_cast<double>(t);
    };
    Vector l = losses(t, p, probe);
    Vector u = problem.payoff(p, l);

    double pairing = thetaBar.dot(u);
    if (pairing > kSeparabilitySlack * std::max(1.0, bound)) {
      throw SeparabilityViolation("responder halfspace condition failed on the realized loss", t);
    }
    realizedDual += pairing;
    run.cumulativePayoff += u;
    hedge.observe(-u);

    RoundRecord row;
    row.t = t;
    row.distance = std::max(run.cumulativePayoff.maxCoeff(), 0.0) / static_cast<double>(t);
    row.dualNorm = thetaBar.norm();
    row.residual = problem.responderResidual ? problem.responderResidual(thetaBar, p) : pairing;
    row.regret = roundRegret(regretHook, t, p, l, row.distance);
    run.trace.push_back(row);
    run.plays.push_back(std::move(p));
    run.losses.push_back(std::move(l));
  }

  run.finalDistance = std::max(run.cumulativePayoff.maxCoeff(), 0.0) / horizon;
  run.finalRegret = horizon * run.finalDistance;
  run.oloRegret = std::max(run.cumulativePayoff.maxCoeff(), 0.0) - realizedDual;
  return run;
}

PseudonormSpec reduceToPseudonorm(const ExplicitPayoff& payoff) { return PseudonormSpec{payoff}; }

ApproachRun pseudonormRunExplicit(const ExplicitPseudoConfig& config, const LossSource& losses,
                                  int horizon, const RegretHook& regretHook) {
  int n = config.n, m = config.m;
  if (config.payoff) {
    n = config.payoff->n;
    m = config.payoff->m;
  }
  if (n < 1 || m < 1) throw std::invalid_argument("pseudonormRunExplicit: missing dimensions");
  if (!config.responder) throw std::invalid_argument("pseudonormRunExplicit: missing responder");
  if (horizon < 1) throw std::invalid_argument("pseudonormRunExplicit: horizon must be positive");

  std::function<double(const PayoffMatrix&)> supOracle = config.supOracle;
  if (!supOracle) {
    if (!config.payoff) {
      throw std::invalid_argument("pseudonormRunExplicit: need a payoff or a sup oracle");
    }
    const ExplicitPayoff& payoff = *config.payoff;
    supOracle = [&payoff](const PayoffMatrix& z) { return payoff.dualSup(z); };
  }

  std::optional<ConvexBody> dualBody = config.dualBody;
  Vector dualCenter = config.dualCenter;
  double eta = config.eta;
  if (!config.customStep) {
    if (!dualBody) {
      if (!config.payoff) {
        throw std::invalid_argument("pseudonormRunExplicit: need a dual body or a custom step");
      }
      dualBody = hullBody(config.payoff->stacked().transpose());
    }
    if (dualCenter.size() == 0) {
      if (config.payoff) {
        dualCenter = config.payoff->stacked().colwise().mean().transpose();
      } else {
        dualCenter = dualBody->innerPoint;
      }
    }
    if (eta <= 0) {
      double diamX = config.payoff ? hullDiameter(*config.payoff) : 2.0 * dualBody->outerRadius;
      eta = learningRate(RegularizerKind::Quadratic, horizon, std::max(diamX, 1e-12), 1.0);
    }
  }

  ApproachRun run;
  run.cumulativeBasis = PayoffMatrix::Zero(n, m);
  run.trace.reserve(horizon);
  Vector cumulativeLoss = Vector::Zero(n * m);
  double realizedDual = 0;

  for (int t = 1; t <= horizon; ++t) {
    Vector theta = config.customStep
                       ? config.customStep(cumulativeLoss)
                       : ftrlQuadraticStep(*dualBody, dualCenter, cumulativeLoss, eta);
    Vector p = config.responder(theta);
    if (p.size() != n) throw std::invalid_argument("pseudonormRunExplicit: responder dimension");

    DistanceProbe probe = [&](const Vector& candidate) {
      PayoffMatrix basis = basisMap(p, candidate);
      return std::max(supOracle(run.cumulativeBasis + basis), 0.0) / static_cast<double>(t);
    };
    Vector l = losses(t, p, probe);
    if (l.size() != m) throw std::invalid_argument("pseudonormRunExplicit: loss dimension");
    PayoffMatrix basis = basisMap(p, l);

    double pairing = theta.dot(basis.reshaped());
    double scale = std::max(1.0, theta.norm() * std::max(1.0, basis.norm()));
    if (pairing > kSeparabilitySlack * scale) {
      throw SeparabilityViolation("responder halfspace condition failed on the realized loss", t);
    }
    realizedDual += pairing;
    run.cumulativeBasis += basis;
    cumulativeLoss -= basis.reshaped();

    RoundRecord row;
    row.t = t;
    row.distance = std::max(supOracle(run.cumulativeBasis), 0.0) / static_cast<double>(t);
    row.dualNorm = theta.norm();
    row.residual = config.responderResidual ? config.responderResidual(theta, p) : pairing;
    row.regret = roundRegret(regretHook, t, p, l, row.distance);
    run.trace.push_back(row);
    run.plays.push_back(std::move(p));
    run.losses.push_back(std::move(l));
  }

  run.finalDistance = std::max(supOracle(run.cumulativeBasis), 0.0) / horizon;
  run.finalRegret = horizon * run.finalDistance;
  run.oloRegret = std::max(supOracle(run.cumulativeBasis), 0.0) - realizedDual;
  return run;
}

ApproachRun pseudonormRunOracle(const OraclePseudoConfig& config, const LossSource& losses,
                                int horizon, const RegretHook& regretHook) {
  const OracleBundle& bundle = config.bundle;
  const int n = bundle.n, m = bundle.m;
  if (horizon < 1) throw std::invalid_argument("pseudonormRunOracle: horizon must be positive");

  ConvexBody dualBody = makeExtendedDualBody(bundle, config.membershipTol);
  Vector dualCenter = config.dualCenter.size() ? config.dualCenter : bundle.dualInteriorPoint;
  double eta = config.eta;
  if (eta <= 0) {
    eta = learningRate(RegularizerKind::Quadratic, horizon, 2.0 * bundle.rho, 1.0);
  }
  SolveOptions stepOpts;
  stepOpts.tol = config.stepTol;

  ApproachRun run;
  run.cumulativeBasis = PayoffMatrix::Zero(n, m);
  run.trace.reserve(horizon);
  Vector cumulativeLoss = Vector::Zero(n * m);
  double realizedDual = 0;

  auto distanceOf = [&](const PayoffMatrix& z, int t) {
    return std::max(evalMaxOverZ(bundle, z), 0.0) / static_cast<double>(t);
  };

  // The dual iterate is only membership-accurate to config.membershipTol, so
  // the responder system and the realized-pairing check inherit that scale.
  const double responderTol = std::max(1e-8, config.membershipTol);
  const double pairingSlack = std::max(kSeparabilitySlack, 10.0 * config.membershipTol);

  for (int t = 1; t <= horizon; ++t) {
    Vector theta = ftrlQuadraticStep(dualBody, dualCenter, cumulativeLoss, eta, stepOpts);
    PayoffMatrix thetaMat = unflatten(theta, n, m);
    Vector p = genericResponder(thetaMat, bundle.actionBody, bundle.generators, responderTol);

    DistanceProbe probe = [&](const Vector& candidate) {
      return distanceOf(run.cumulativeBasis + basisMap(p, candidate), t);
    };
    Vector l = losses(t, p, probe);
    PayoffMatrix basis = basisMap(p, l);

    double pairing = theta.dot(basis.reshaped());
    double scale = std::max(1.0, theta.norm() * std::max(1.0, basis.norm()));
    if (pairing > pairingSlack * scale) {
      throw SeparabilityViolation("responder halfspace condition failed on the realized loss", t);
    }
    realizedDual += pairing;
    run.cumulativeBasis += basis;
    cumulativeLoss -= basis.reshaped();

    RoundRecord row;
    row.t = t;
    row.distance = distanceOf(run.cumulativeBasis, t);
    row.dualNorm = theta.norm();
    row.residual = config.responderResidual
                       ? config.responderResidual(theta, p)
                       : responderResidualGeneric(thetaMat, p, bundle.generators);
    row.regret = roundRegret(regretHook, t, p, l, row.distance);
    run.trace.push_back(row);
    run.plays.push_back(std::move(p));
    run.losses.push_back(std::move(l));
  }

  double supCum = evalMaxOverZ(bundle, run.cumulativeBasis);
  run.finalDistance = std::max(supCum, 0.0) / horizon;
  run.finalRegret = horizon * run.finalDistance;
  run.oloRegret = std::max(supCum, 0.0) - realizedDual;
  return run;
}

Vector genericResponder(const PayoffMatrix& dualPoint, const ConvexBody& actionBody,
                        const OrthantGenerators& generators, double tol) {
  const int m = static_cast<int>(dualPoint.cols());
  std::vector<Halfspace> constraints;
  constraints.reserve(m);
  for (int k = 0; k < m; ++k) {
    Vector normal = generators.scales(k) * dualPoint.col(k);
    if (normal.norm() <= 1e-14) continue;  // vacuous halfspace through the origin
    constraints.push_back({normal, 0.0});
  }
  auto p = lpFeasible(constraints, actionBody, tol);
  if (!p) {
    throw std::runtime_error("genericResponder: no action satisfies the dual halfspaces");
  }
  return *p;
}

double responderResidualGeneric(const PayoffMatrix& dualPoint, const Vector& p,
                                const OrthantGenerators& generators) {
  double worst = -std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(dualPoint.cols());
  for (int k = 0; k < m; ++k) {
    worst = std::max(worst, generators.scales(k) * dualPoint.col(k).dot(p));
  }
  return worst;
}

}  // namespace pna
