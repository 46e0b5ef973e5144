#include "pna/harness/selfplay.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pna::harness {

namespace {

double uniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Expected loss vector seen by `player` (stacked per own type, index
// c·K + a) when the opponent plays per-type mixtures `opponent[c2]`.
Vector expectedLoss(const BayesGame& game, int player, const std::vector<Vector>& opponent) {
  const apps::BayesInstance& self = player == 0 ? game.p1 : game.p2;
  const apps::BayesInstance& other = player == 0 ? game.p2 : game.p1;
  Vector out = Vector::Zero(self.C * self.K);
  for (int c1 = 0; c1 < self.C; ++c1) {
    for (int a1 = 0; a1 < self.K; ++a1) {
      double value = 0;
      for (int c2 = 0; c2 < other.C; ++c2) {
        const Matrix& table = game.loss[player][player == 0 ? c1 : c2][player == 0 ? c2 : c1];
        for (int a2 = 0; a2 < other.K; ++a2) {
          double cell = player == 0 ? table(a1, a2) : table(a2, a1);
          value += other.mu(c2) * opponent[c2](a2) * cell;
        }
      }
      out(c1 * self.K + a1) = value;
    }
  }
  return out;
}

std::vector<Vector> splitByType(const Vector& stacked, int C, int K) {
  std::vector<Vector> out(C);
  for (int c = 0; c < C; ++c) out[c] = stacked.segment(c * K, K);
  return out;
}

}  // namespace

BayesGame toyBayesGame(int C, int K, std::uint64_t seed) {
  BayesGame game{apps::BayesInstance::uniformPrior(C, K), apps::BayesInstance::uniformPrior(C, K),
                 {}};
  std::mt19937_64 rng(seed);
  game.loss.assign(2, std::vector<std::vector<Matrix>>(
                          C, std::vector<Matrix>(C, Matrix::Zero(K, K))));
  for (int player = 0; player < 2; ++player) {
    for (int c1 = 0; c1 < C; ++c1) {
      for (int c2 = 0; c2 < C; ++c2) {
        for (int a1 = 0; a1 < K; ++a1) {
          for (int a2 = 0; a2 < K; ++a2) {
            game.loss[player][c1][c2](a1, a2) = uniformUnit(rng);
          }
        }
      }
    }
  }
  return game;
}

BayesGame zeroBayesGame(int C, int K) {
  BayesGame game{apps::BayesInstance::uniformPrior(C, K), apps::BayesInstance::uniformPrior(C, K),
                 {}};
  game.loss.assign(2, std::vector<std::vector<Matrix>>(
                          C, std::vector<Matrix>(C, Matrix::Zero(K, K))));
  return game;
}

SelfPlayReport selfplayBce(const BayesGame& game, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("selfplayBce: horizon must be positive");
  const int C = game.p1.C, K = game.p1.K;
  if (game.p2.C != C || game.p2.K != K) {
    throw std::invalid_argument("selfplayBce: players must share C and K");
  }
  const int dim = C * K;
  (void)seed;  // dynamics are deterministic: expected losses, closed-form steps

  // Each player runs the Bayesian-swap reduction with the entropy step over
  // the explicit deviation family (guarded scale), fed expected losses.
  apps::BayesInstance instance = game.p1;
  ExplicitPayoff payoff = instance.explicitPayoff();
  double eta = std::sqrt(std::log(static_cast<double>(payoff.d) + 1.0) / horizon);

  std::vector<Vector> cumulative(2, Vector::Zero(dim * dim));
  std::vector<apps::BayesRegretAccumulator> acc{apps::BayesRegretAccumulator(instance),
                                                apps::BayesRegretAccumulator(instance)};

  auto stepOf = [&](const Vector& cumulativeLoss) {
    PayoffMatrix sumY = unflatten(cumulativeLoss, dim, dim);
    Vector scores(payoff.d);
    for (int i = 0; i < payoff.d; ++i) {
      scores(i) = (payoff.coeffs[i].array() * sumY.array()).sum();
    }
    Vector weights = ftrlNegentropyStep(scores, eta);
    return payoff.dualFromSimplex(weights);
  };

  for (int t = 1; t <= horizon; ++t) {
    PayoffMatrix dual0 = stepOf(cumulative[0]);
    PayoffMatrix dual1 = stepOf(cumulative[1]);
    Vector p0 = apps::bayesResponder(dual0, instance);
    Vector p1 = apps::bayesResponder(dual1, instance);

    Vector l0 = expectedLoss(game, 0, splitByType(p1, C, K));
    Vector l1 = expectedLoss(game, 1, splitByType(p0, C, K));

    acc[0].observe(p0, l0);
    acc[1].observe(p1, l1);
    cumulative[0] -= Vector((p0 * l0.transpose()).reshaped());
    cumulative[1] -= Vector((p1 * l1.transpose()).reshaped());
  }

  SelfPlayReport report;
  report.perPlayerGap = {acc[0].regret() / horizon, acc[1].regret() / horizon};
  report.maxGap = std::max(report.perPlayerGap[0], report.perPlayerGap[1]);
  return report;
}

}  // namespace pna::harness
