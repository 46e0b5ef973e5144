#include "pna/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pna/apps/bayes.hpp"
#include "pna/apps/cmdp.hpp"
#include "pna/apps/procrustes.hpp"
#include "pna/apps/swap.hpp"
#include "pna/geometry.hpp"
#include "pna/harness/mdp_io.hpp"

namespace pna::harness {

namespace {

std::string applicationName(Application app) {
  switch (app) {
    case Application::External: return "external";
    case Application::Swap: return "swap";
    case Application::Procrustes: return "procrustes";
    case Application::Bayes: return "bayes";
    case Application::Cmdp: return "cmdp";
  }
  return "?";
}

std::string algoName(AlgoPath algo) {
  switch (algo) {
    case AlgoPath::LinfNegentropy: return "linf";
    case AlgoPath::PseudoQuadratic: return "pseudo-quadratic";
    case AlgoPath::PseudoMaxent: return "pseudo-maxent";
  }
  return "?";
}

std::string adversaryName(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::IidUniform: return "iid";
    case AdversaryKind::FixedFile: return "fixed";
    case AdversaryKind::AdaptiveWorst: return "worst";
  }
  return "?";
}

// External regret: one payoff coordinate per fixed action, u_i = ⟨p,ℓ⟩ − ℓ_i,
// coefficient matrices v_i = I − 𝟙e_iᵀ.
ExplicitPayoff externalPayoff(int K) {
  std::vector<PayoffMatrix> coeffs;
  coeffs.reserve(K);
  for (int i = 0; i < K; ++i) {
    PayoffMatrix v = PayoffMatrix::Identity(K, K);
    v.col(i).array() -= 1.0;
    coeffs.push_back(std::move(v));
  }
  return ExplicitPayoff::fromCoeffs(std::move(coeffs));
}

Vector externalResponder(const Vector& flatDual, int K) {
  // θ̃ = Σ w_i v_i with w ∈ Δ_K gives column sums: (1/K)Σ_j θ̃_jk = 1/K − w_k.
  Matrix theta = unflatten(flatDual, K, K);
  Vector w(K);
  for (int k = 0; k < K; ++k) w(k) = 1.0 / K - theta.col(k).mean();
  return simplexProject(w);
}

RunOutput fromApproachRun(ApproachRun run, int horizon) {
  RunOutput out;
  out.trace = std::move(run.trace);
  out.finalRegret = run.finalRegret;
  out.finalDistance = run.finalDistance;
  out.rateConstant = run.finalRegret / std::sqrt(static_cast<double>(horizon));
  out.plays = std::move(run.plays);
  out.losses = std::move(run.losses);
  return out;
}

RunOutput runExternal(const ExperimentConfig& config, const LossSource& losses) {
  const int K = config.K;
  double playLoss = 0;
  Vector lossSums = Vector::Zero(K);
  RegretHook hook = [&playLoss, &lossSums](int, const Vector& p, const Vector& l) {
    playLoss += p.dot(l);
    lossSums += l;
    return playLoss - lossSums.minCoeff();
  };

  if (config.algo == AlgoPath::LinfNegentropy) {
    LinfProblem problem;
    problem.d = K;
    problem.payoffBound = 1.0;
    problem.payoff = [](const Vector& p, const Vector& l) {
      return Vector(Vector::Constant(l.size(), p.dot(l)) - l);
    };
    problem.responder = [K](const Vector& thetaBar) {
      double sum = thetaBar.sum();
      if (sum <= 0) return Vector(Vector::Constant(K, 1.0 / K));
      return Vector(thetaBar / sum);
    };
    problem.responderResidual = [](const Vector& thetaBar, const Vector& p) {
      // sup over ℓ ∈ [0,1]^K of Σ_i θ̄_i(⟨p,ℓ⟩ − ℓ_i) = Σ_k max(0, s·p_k − θ̄_k)
      double sum = thetaBar.sum();
      return (sum * p - thetaBar).cwiseMax(0.0).sum();
    };
    return fromApproachRun(linfRun(problem, losses, config.T, hook), config.T);
  }

  ExplicitPseudoConfig pseudo;
  pseudo.payoff = externalPayoff(K);
  pseudo.n = K;
  pseudo.m = K;
  pseudo.responder = [K](const Vector& dual) { return externalResponder(dual, K); };
  pseudo.responderResidual = [K](const Vector& dual, const Vector& p) {
    Matrix theta = unflatten(dual, K, K);
    return (theta.transpose() * p).cwiseMax(0.0).sum();
  };
  if (config.algo == AlgoPath::PseudoMaxent) {
    double eta = std::sqrt(std::log(static_cast<double>(K) + 1.0) / config.T);
    ExplicitPayoff payoff = externalPayoff(K);
    pseudo.customStep = [payoff, eta, K](const Vector& cumulativeLoss) {
      // Per-coordinate OLO loss Σ_t y_{t,i} = ⟨v_i, Σy⟩; entropy FTRL over the
      // hull weights is exponential weights on these scores.
      PayoffMatrix sumY = unflatten(cumulativeLoss, K, K);
      Vector scores(payoff.d);
      for (int i = 0; i < payoff.d; ++i) {
        scores(i) = (payoff.coeffs[i].array() * sumY.array()).sum();
      }
      Vector weights = ftrlNegentropyStep(scores, eta);
      return Vector(payoff.dualFromSimplex(weights).reshaped());
    };
  } else {
    pseudo.eta = learningRate(RegularizerKind::Quadratic, config.T,
                              hullDiameter(*pseudo.payoff), std::sqrt(static_cast<double>(K)));
  }
  return fromApproachRun(pseudonormRunExplicit(pseudo, losses, config.T, hook), config.T);
}

RunOutput runSwap(const ExperimentConfig& config, const LossSource& losses) {
  const int K = config.K;
  apps::SwapInstance instance(K);
  Matrix cross = Matrix::Zero(K, K);
  RegretHook hook = [&cross](int, const Vector& p, const Vector& l) {
    cross += p * l.transpose();
    return apps::swapRegretFromCross(cross);
  };

  if (config.algo == AlgoPath::LinfNegentropy) {
    LinfProblem problem = apps::swapLinfProblem(K);
    return fromApproachRun(linfRun(problem, losses, config.T, hook), config.T);
  }

  ExplicitPseudoConfig pseudo;
  pseudo.n = K;
  pseudo.m = K;
  pseudo.supOracle = [](const PayoffMatrix& z) {
    double total = 0;
    for (int i = 0; i < z.rows(); ++i) total += z(i, i) - z.row(i).minCoeff();
    return total;
  };
  pseudo.responder = [](const Vector& dual) {
    int K2 = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dual.size()))));
    return apps::swapResponder(apps::marginalsFromDual(unflatten(dual, K2, K2), 1e-6));
  };
  pseudo.responderResidual = [K](const Vector& dual, const Vector& p) {
    Matrix theta = unflatten(dual, K, K);
    return (theta.transpose() * p).maxCoeff();
  };
  pseudo.dualCenter = apps::swapUniformDual(K).reshaped();

  if (config.algo == AlgoPath::PseudoMaxent) {
    double etaPadded = std::sqrt(std::log(instance.payoffDim() + 1.0) / config.T);
    double eta = etaPadded / 2.0;
    pseudo.customStep = [K, eta](const Vector& cumulativeLoss) {
      Matrix w = unflatten(-cumulativeLoss, K, K);
      return Vector(apps::swapMaxentStep(w, eta).reshaped());
    };
  } else {
    pseudo.dualBody = apps::swapDualBody(K);
    pseudo.eta = learningRate(RegularizerKind::Quadratic, config.T,
                              2.0 * std::sqrt(2.0 * K), std::sqrt(static_cast<double>(K)));
  }
  return fromApproachRun(pseudonormRunExplicit(pseudo, losses, config.T, hook), config.T);
}

RunOutput runProcrustes(const ExperimentConfig& config, const LossSource& losses) {
  const int n = config.n;
  if (config.algo == AlgoPath::LinfNegentropy) {
    throw std::invalid_argument(
        "algo: the orthogonal deviation family is continuous; use pseudo-quadratic");
  }
  if (config.algo == AlgoPath::PseudoMaxent) {
    throw std::invalid_argument(
        "algo: entropy steps need a finite deviation family; use pseudo-quadratic");
  }
  double playLossSum = 0;
  Matrix cross = Matrix::Zero(n, n);
  RegretHook hook = [&playLossSum, &cross](int, const Vector& p, const Vector& l) {
    playLossSum += p.dot(l);
    cross += l * p.transpose();
    return apps::procrustesRegretFromCross(playLossSum, cross);
  };

  ExplicitPseudoConfig pseudo;
  pseudo.n = n;
  pseudo.m = n;
  pseudo.supOracle = [](const PayoffMatrix& z) {
    Eigen::JacobiSVD<Matrix> svd(z);
    return z.trace() + svd.singularValues().sum();
  };
  pseudo.dualBody = apps::procrustesDualBody(n);
  pseudo.dualCenter = Matrix::Identity(n, n).reshaped();
  pseudo.eta = learningRate(RegularizerKind::Quadratic, config.T,
                            2.0 * std::sqrt(static_cast<double>(n)),
                            std::sqrt(static_cast<double>(n)));
  pseudo.responder = [n](const Vector& dual) {
    return apps::procrustesResponder(unflatten(dual, n, n));
  };
  pseudo.responderResidual = [n](const Vector& dual, const Vector& p) {
    return apps::procrustesResponderResidual(unflatten(dual, n, n), p);
  };
  return fromApproachRun(pseudonormRunExplicit(pseudo, losses, config.T, hook), config.T);
}

RunOutput runBayes(const ExperimentConfig& config, const LossSource& losses) {
  apps::BayesInstance instance = apps::BayesInstance::uniformPrior(config.C, config.K);
  apps::BayesRegretAccumulator acc(instance);
  RegretHook hook = [&acc](int, const Vector& p, const Vector& l) {
    acc.observe(p, l);
    return acc.regret();
  };

  ExplicitPayoff payoff = instance.explicitPayoff();
  const int dim = instance.actionDim();

  if (config.algo == AlgoPath::LinfNegentropy) {
    LinfProblem problem;
    problem.d = payoff.d;
    // u = Σ_c μ_c (a_c − b_c) with a_c, b_c ∈ [0,1], so |u| ≤ 1.
    problem.payoffBound = 1.0;
    problem.payoff = [payoff](const Vector& p, const Vector& l) { return payoff.payoff(p, l); };
    problem.responder = [payoff, instance](const Vector& thetaBar) {
      PayoffMatrix dual = PayoffMatrix::Zero(payoff.n, payoff.m);
      for (int i = 0; i < payoff.d; ++i) dual += thetaBar(i) * payoff.coeffs[i];
      return apps::bayesResponder(dual, instance);
    };
    problem.responderResidual = [payoff](const Vector& thetaBar, const Vector& p) {
      PayoffMatrix dual = PayoffMatrix::Zero(payoff.n, payoff.m);
      for (int i = 0; i < payoff.d; ++i) dual += thetaBar(i) * payoff.coeffs[i];
      return (dual.transpose() * p).maxCoeff();
    };
    return fromApproachRun(linfRun(problem, losses, config.T, hook), config.T);
  }

  ExplicitPseudoConfig pseudo;
  pseudo.payoff = payoff;
  pseudo.n = dim;
  pseudo.m = dim;
  pseudo.responder = [instance](const Vector& dual) {
    int dim2 = instance.actionDim();
    return apps::bayesResponder(unflatten(dual, dim2, dim2), instance);
  };
  pseudo.responderResidual = [dim](const Vector& dual, const Vector& p) {
    return apps::bayesResponderResidual(unflatten(dual, dim, dim), p);
  };
  if (config.algo == AlgoPath::PseudoMaxent) {
    // Per-round score increments ⟨v_i, p_t ℓ_tᵀ⟩ lie in [−1, 1].
    double eta = std::sqrt(std::log(static_cast<double>(payoff.d) + 1.0) / config.T);
    pseudo.customStep = [payoff, eta](const Vector& cumulativeLoss) {
      PayoffMatrix sumY = unflatten(cumulativeLoss, payoff.n, payoff.m);
      Vector scores(payoff.d);
      for (int i = 0; i < payoff.d; ++i) {
        scores(i) = (payoff.coeffs[i].array() * sumY.array()).sum();
      }
      Vector weights = ftrlNegentropyStep(scores, eta);
      return Vector(payoff.dualFromSimplex(weights).reshaped());
    };
  } else {
    double diamY = instance.C * std::sqrt(static_cast<double>(instance.K));
    double eta = learningRate(RegularizerKind::Quadratic, config.T, hullDiameter(payoff), diamY);
    // Quadratic FTRL over the hull is the Euclidean projection of
    // center − (η/2)·ΣY onto conv{v_i}; warm-starting the hull weights across
    // rounds keeps the per-round projection cost near-constant even though
    // the vertex count is K^{KC}·C^C.
    Matrix vertices = payoff.stacked().transpose();
    Vector center = vertices.rowwise().mean();
    auto warm = std::make_shared<Vector>(Vector::Constant(payoff.d, 1.0 / payoff.d));
    pseudo.dualCenter = center;
    pseudo.customStep = [vertices, center, eta, warm](const Vector& cumulativeLoss) {
      Vector target = center - 0.5 * eta * cumulativeLoss;
      MinNormResult res = minNormToHull(vertices, target, warm.get());
      *warm = res.weights;
      return res.point;
    };
  }
  return fromApproachRun(pseudonormRunExplicit(pseudo, losses, config.T, hook), config.T);
}

RunOutput runCmdp(const ExperimentConfig& config) {
  apps::LayeredMdp mdp = loadMdp(config.mdpFile);
  if (config.eps0 > 0) mdp.eps0 = config.eps0;
  if (config.eps1 > 0) mdp.eps1 = config.eps1;
  apps::CmdpRunResult result = apps::cmdpFeasibilityRun(mdp, config.T, config.seed);

  RunOutput out;
  out.trace.reserve(config.T);
  for (int t = 1; t <= config.T; ++t) {
    RoundRecord row;
    row.t = t;
    row.distance = std::max(result.violationCurve[t - 1], 0.0);
    row.regret = t * row.distance;
    row.dualNorm = result.dualWeights[t - 1].norm();
    row.residual = result.dualWeights[t - 1].dot(result.noisyLoads[t - 1] - mdp.thresholds);
    out.trace.push_back(row);
    out.losses.push_back(result.noisyLoads[t - 1]);
    out.plays.push_back(result.trueLoads[t - 1]);
  }
  out.finalDistance = std::max(result.finalViolation, 0.0);
  out.finalRegret = config.T * out.finalDistance;
  out.rateConstant = out.finalRegret / std::sqrt(static_cast<double>(config.T));
  return out;
}

}  // namespace

Application parseApplication(const std::string& name) {
  if (name == "external") return Application::External;
  if (name == "swap") return Application::Swap;
  if (name == "procrustes") return Application::Procrustes;
  if (name == "bayes") return Application::Bayes;
  if (name == "cmdp") return Application::Cmdp;
  throw std::invalid_argument("unknown app '" + name +
                              "' (expected external|swap|procrustes|bayes|cmdp)");
}

AlgoPath parseAlgoPath(const std::string& name) {
  if (name == "linf") return AlgoPath::LinfNegentropy;
  if (name == "pseudo-quadratic") return AlgoPath::PseudoQuadratic;
  if (name == "pseudo-maxent") return AlgoPath::PseudoMaxent;
  throw std::invalid_argument("unknown algo '" + name +
                              "' (expected linf|pseudo-quadratic|pseudo-maxent)");
}

void ExperimentConfig::validate() const {
  if (T < 1) throw std::invalid_argument("t: horizon must be at least 1");
  if (eps0 < 0) throw std::invalid_argument("eps0: must be nonnegative");
  if (eps1 < 0) throw std::invalid_argument("eps1: must be nonnegative");
  switch (app) {
    case Application::External:
    case Application::Swap:
      if (K < 2) throw std::invalid_argument("k: need at least 2 actions");
      break;
    case Application::Bayes:
      if (K < 2) throw std::invalid_argument("k: need at least 2 actions");
      if (C < 2) throw std::invalid_argument("c: need at least 2 types");
      break;
    case Application::Procrustes:
      if (n < 1) throw std::invalid_argument("n: need dimension at least 1");
      break;
    case Application::Cmdp:
      if (mdpFile.empty()) throw std::invalid_argument("mdp-file: required for the cmdp app");
      break;
  }
  if (adversary == AdversaryKind::FixedFile && app != Application::Cmdp && lossFile.empty()) {
    throw std::invalid_argument("loss-file: required for the fixed adversary");
  }
}

RunOutput runExperiment(const ExperimentConfig& config) {
  config.validate();
  auto start = std::chrono::steady_clock::now();

  RunOutput out;
  if (config.app == Application::Cmdp) {
    out = runCmdp(config);
  } else {
    int lossDim = 0;
    double lo = 0.0, hi = 1.0;
    switch (config.app) {
      case Application::External:
      case Application::Swap:
        lossDim = config.K;
        break;
      case Application::Bayes:
        lossDim = config.C * config.K;
        break;
      case Application::Procrustes:
        lossDim = config.n;
        lo = -1.0;
        break;
      default:
        break;
    }
    Adversary adversary(config.adversary, lossDim, lo, hi, config.seed);
    if (config.adversary == AdversaryKind::FixedFile) {
      adversary.setReplay(loadLossFile(config.lossFile));
    }
    LossSource source = adversary.asLossSource();
    switch (config.app) {
      case Application::External: out = runExternal(config, source); break;
      case Application::Swap: out = runSwap(config, source); break;
      case Application::Procrustes: out = runProcrustes(config, source); break;
      case Application::Bayes: out = runBayes(config, source); break;
      default: break;
    }
  }

  out.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.tracePath.empty()) writeTraceCsv(config.tracePath, out.trace);
  if (!config.summaryPath.empty()) writeSummaryJson(config.summaryPath, config, out);
  return out;
}

void writeTraceCsv(const std::string& path, const std::vector<RoundRecord>& rows) {
  std::ofstream outFile(path);
  if (!outFile) throw std::runtime_error("cannot open trace file: " + path);
  outFile << "t,regret,distance,dual_norm,residual\n";
  char buffer[256];
  for (const auto& row : rows) {
    std::snprintf(buffer, sizeof(buffer), "%d,%.17g,%.17g,%.17g,%.17g\n", row.t, row.regret,
                  row.distance, row.dualNorm, row.residual);
    outFile << buffer;
  }
}

void writeSummaryJson(const std::string& path, const ExperimentConfig& config,
                      const RunOutput& output) {
  nlohmann::ordered_json j;
  j["app"] = applicationName(config.app);
  j["algo"] = algoName(config.algo);
  j["adversary"] = adversaryName(config.adversary);
  j["k"] = config.K;
  j["c"] = config.C;
  j["n"] = config.n;
  j["t"] = config.T;
  j["seed"] = config.seed;
  j["eps0"] = config.eps0;
  j["eps1"] = config.eps1;
  j["final_regret"] = output.finalRegret;
  j["final_distance"] = output.finalDistance;
  j["rate_constant"] = output.rateConstant;
  j["wall_seconds"] = output.wallSeconds;
  std::ofstream outFile(path);
  if (!outFile) throw std::runtime_error("cannot open summary file: " + path);
  outFile << j.dump(2) << "\n";
}

}  // namespace pna::harness
