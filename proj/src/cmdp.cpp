#include "pna/apps/cmdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pna/olo.hpp"

namespace pna::apps {

namespace {

// Deterministic uniform draw in [0,1): 53 mantissa bits straight from the
// engine, independent of standard-library distribution implementations.
double uniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniformUnit(rng);
}

}  // namespace

int LayeredMdp::states() const {
  int total = 0;
  for (int size : layerSizes) total += size;
  return total;
}

int LayeredMdp::layerOf(int state) const {
  int offset = 0;
  for (std::size_t layer = 0; layer < layerSizes.size(); ++layer) {
    offset += layerSizes[layer];
    if (state < offset) return static_cast<int>(layer);
  }
  throw std::out_of_range("LayeredMdp: state id out of range");
}

int LayeredMdp::layerStart(int layer) const {
  int offset = 0;
  for (int l = 0; l < layer; ++l) offset += layerSizes[l];
  return offset;
}

bool LayeredMdp::acting(int state) const { return layerOf(state) < horizon(); }

void LayeredMdp::validate() const {
  if (layerSizes.size() < 2) throw std::invalid_argument("LayeredMdp: need at least two layers");
  if (layerSizes.front() != 1 || layerSizes.back() != 1) {
    throw std::invalid_argument("LayeredMdp: first and last layers must be singletons");
  }
  for (int size : layerSizes) {
    if (size < 1) throw std::invalid_argument("LayeredMdp: empty layer");
  }
  if (actions < 1) throw std::invalid_argument("LayeredMdp: need at least one action");
  if (d < 1) throw std::invalid_argument("LayeredMdp: need at least one constraint");
  const int total = states();
  if (static_cast<int>(transition.size()) != total || static_cast<int>(loss.size()) != total) {
    throw std::invalid_argument("LayeredMdp: transition/loss tables must cover every state");
  }
  if (thresholds.size() != d) throw std::invalid_argument("LayeredMdp: threshold dimension");
  const int L = horizon();
  if (thresholds.minCoeff() < 0 || thresholds.maxCoeff() > L) {
    throw std::invalid_argument("LayeredMdp: thresholds must lie in [0, L]");
  }
  if (eps0 < 0 || eps1 < 0) throw std::invalid_argument("LayeredMdp: noise levels must be ≥ 0");
  for (int x = 0; x < total; ++x) {
    if (!acting(x)) continue;
    if (static_cast<int>(transition[x].size()) != actions ||
        static_cast<int>(loss[x].size()) != actions) {
      throw std::invalid_argument("LayeredMdp: per-action tables must have one entry per action");
    }
    const int layer = layerOf(x);
    const int nextStart = layerStart(layer + 1);
    const int nextEnd = nextStart + layerSizes[layer + 1];
    for (int a = 0; a < actions; ++a) {
      const Vector& row = transition[x][a];
      if (row.size() != total) throw std::invalid_argument("LayeredMdp: transition row dimension");
      if (row.minCoeff() < -1e-12 || std::abs(row.sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("LayeredMdp: transition row must be a distribution");
      }
      for (int xp = 0; xp < total; ++xp) {
        if (row(xp) > 1e-12 && (xp < nextStart || xp >= nextEnd)) {
          throw std::invalid_argument("LayeredMdp: transitions must target the next layer");
        }
      }
      if (loss[x][a].size() != d) throw std::invalid_argument("LayeredMdp: loss dimension");
      if (loss[x][a].minCoeff() < 0 || loss[x][a].maxCoeff() > 1) {
        throw std::invalid_argument("LayeredMdp: losses must lie in [0,1]");
      }
    }
  }
}

Vector OccupancyMeasure::flat(const LayeredMdp& mdp) const {
  int count = 0;
  for (int x = 0; x < mdp.states(); ++x) {
    if (mdp.acting(x)) count += mdp.actions;
  }
  Vector out(count);
  int at = 0;
  for (int x = 0; x < mdp.states(); ++x) {
    if (!mdp.acting(x)) continue;
    out.segment(at, mdp.actions) = q[x];
    at += mdp.actions;
  }
  return out;
}

OccupancyMeasure occupancyFromPolicy(const LayeredMdp& mdp, const Policy& policy) {
  const int total = mdp.states();
  Vector stateProb = Vector::Zero(total);
  stateProb(0) = 1.0;
  OccupancyMeasure occ;
  occ.q.assign(total, Vector());
  for (int x = 0; x < total; ++x) {
    if (!mdp.acting(x)) continue;
    occ.q[x] = stateProb(x) * policy[x];
    for (int a = 0; a < mdp.actions; ++a) {
      stateProb += occ.q[x](a) * mdp.transition[x][a];
    }
    stateProb(x) = 0.0;  // mass already pushed to the next layer
  }
  return occ;
}

Vector exactLoads(const LayeredMdp& mdp, const OccupancyMeasure& occupancy) {
  Vector loads = Vector::Zero(mdp.d);
  for (int x = 0; x < mdp.states(); ++x) {
    if (!mdp.acting(x)) continue;
    for (int a = 0; a < mdp.actions; ++a) {
      loads += occupancy.q[x](a) * mdp.loss[x][a];
    }
  }
  return loads;
}

Policy bestResponse(const LayeredMdp& mdp, const Vector& theta, std::mt19937_64& rng) {
  if (theta.size() != mdp.d) throw std::invalid_argument("bestResponse: weight dimension");
  const int total = mdp.states();
  const int L = mdp.horizon();
  Vector value = Vector::Zero(total);
  // Exact values first (terminal layer = 0), bottom-up.
  for (int layer = L - 1; layer >= 0; --layer) {
    for (int x = mdp.layerStart(layer); x < mdp.layerStart(layer) + mdp.layerSizes[layer]; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.actions; ++a) {
        double qv = mdp.loss[x][a].dot(theta) + mdp.transition[x][a].dot(value);
        if (qv < best) best = qv;
      }
      value(x) = best;
    }
  }
  Vector noisy = value;
  if (mdp.eps0 > 0) {
    double half = mdp.eps0 / (2.0 * L);
    for (int x = 0; x < total; ++x) noisy(x) = value(x) + uniformIn(rng, -half, half);
  }
  Policy policy(total);
  for (int layer = L - 1; layer >= 0; --layer) {
    for (int x = mdp.layerStart(layer); x < mdp.layerStart(layer) + mdp.layerSizes[layer]; ++x) {
      int bestAction = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.actions; ++a) {
        double qv = mdp.loss[x][a].dot(theta) + mdp.transition[x][a].dot(noisy);
        if (qv < best) {  // strict: ties keep the lowest action index
          best = qv;
          bestAction = a;
        }
      }
      Vector choice = Vector::Zero(mdp.actions);
      choice(bestAction) = 1.0;
      policy[x] = choice;
    }
  }
  return policy;
}

Vector estOracle(const LayeredMdp& mdp, const Policy& policy, std::mt19937_64& rng) {
  Vector loads = exactLoads(mdp, occupancyFromPolicy(mdp, policy));
  if (mdp.eps1 > 0) {
    for (int i = 0; i < loads.size(); ++i) {
      loads(i) += uniformIn(rng, -mdp.eps1, mdp.eps1);
    }
  }
  const double L = mdp.horizon();
  return loads.cwiseMax(0.0).cwiseMin(L);
}

CmdpRunResult cmdpFeasibilityRun(const LayeredMdp& mdp, int horizon, std::uint64_t seed) {
  mdp.validate();
  if (horizon < 1) throw std::invalid_argument("cmdpFeasibilityRun: horizon must be positive");
  const int d = mdp.d;
  const double L = mdp.horizon();
  double eta = learningRate(RegularizerKind::Negentropy, horizon, 0.0, 1.0, d + 1.0);
  PaddedHedge hedge(d, L, eta);
  std::mt19937_64 rng(seed);

  CmdpRunResult result;
  result.violationCurve.reserve(horizon);
  Vector cumTrue = Vector::Zero(d);
  Vector cumPayoff = Vector::Zero(d);
  double realizedDual = 0;

  for (int t = 1; t <= horizon; ++t) {
    Vector thetaBar = hedge.subWeights();
    Policy policy = bestResponse(mdp, thetaBar, rng);
    Vector noisy = estOracle(mdp, policy, rng);
    Vector truth = exactLoads(mdp, occupancyFromPolicy(mdp, policy));
    Vector payoff = noisy - mdp.thresholds;

    realizedDual += thetaBar.dot(payoff);
    cumPayoff += payoff;
    cumTrue += truth;
    hedge.observe(-payoff);

    result.dualWeights.push_back(thetaBar);
    result.noisyLoads.push_back(noisy);
    result.trueLoads.push_back(truth);
    result.violationCurve.push_back(
        ((cumTrue / t) - mdp.thresholds).maxCoeff());
  }

  result.averageLoads = cumTrue / horizon;
  result.finalViolation = result.violationCurve.back();
  result.oloRegret = std::max(cumPayoff.maxCoeff(), 0.0) - realizedDual;
  return result;
}

std::vector<Policy> enumerateDeterministicPolicies(const LayeredMdp& mdp) {
  std::vector<int> actingStates;
  for (int x = 0; x < mdp.states(); ++x) {
    if (mdp.acting(x)) actingStates.push_back(x);
  }
  double count = std::pow(static_cast<double>(mdp.actions),
                          static_cast<double>(actingStates.size()));
  if (count > 1e6) {
    throw std::invalid_argument("enumerateDeterministicPolicies: too many policies");
  }
  std::vector<Policy> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> choice(actingStates.size(), 0);
  for (long long idx = 0; idx < static_cast<long long>(count); ++idx) {
    Policy policy(mdp.states());
    for (std::size_t s = 0; s < actingStates.size(); ++s) {
      Vector v = Vector::Zero(mdp.actions);
      v(choice[s]) = 1.0;
      policy[actingStates[s]] = v;
    }
    out.push_back(std::move(policy));
    for (std::size_t pos = 0; pos < choice.size(); ++pos) {
      if (++choice[pos] < mdp.actions) break;
      choice[pos] = 0;
    }
  }
  return out;
}

Vector rolloutOnce(const LayeredMdp& mdp, const Policy& policy, std::mt19937_64& rng) {
  Vector total = Vector::Zero(mdp.d);
  int x = 0;
  for (int layer = 0; layer < mdp.horizon(); ++layer) {
    double u = uniformUnit(rng);
    int a = mdp.actions - 1;
    double acc = 0;
    for (int cand = 0; cand < mdp.actions; ++cand) {
      acc += policy[x](cand);
      if (u < acc) {
        a = cand;
        break;
      }
    }
    total += mdp.loss[x][a];
    u = uniformUnit(rng);
    const Vector& row = mdp.transition[x][a];
    acc = 0;
    int next = mdp.states() - 1;
    for (int xp = 0; xp < mdp.states(); ++xp) {
      acc += row(xp);
      if (row(xp) > 0 && u < acc) {
        next = xp;
        break;
      }
    }
    x = next;
  }
  return total;
}

}  // namespace pna::apps
