#pragma once

#include <cstdint>
#include <vector>

#include "pna/apps/bayes.hpp"

namespace pna::harness {

// Two-player Bayesian game with C types and K actions per player: losses in
// [0,1] indexed as loss[player](c1, c2, a1, a2), types drawn independently
// from each player's prior.
struct BayesGame {
  apps::BayesInstance p1;
  apps::BayesInstance p2;
  // loss[player][c1][c2](a1, a2)
  std::vector<std::vector<std::vector<Matrix>>> loss;
};

BayesGame toyBayesGame(int C, int K, std::uint64_t seed);  // random [0,1] tables
BayesGame zeroBayesGame(int C, int K);

struct SelfPlayReport {
  double maxGap = 0;                 // max over players of BSReg/T
  std::vector<double> perPlayerGap;
};

// Both players run the Bayesian-swap algorithm against the exact expected
// losses induced by the opponent's current per-type mixed strategy. The
// reported gap upper-bounds the best deviation gain of the time-averaged
// profile.
SelfPlayReport selfplayBce(const BayesGame& game, int horizon, std::uint64_t seed);

}  // namespace pna::harness
