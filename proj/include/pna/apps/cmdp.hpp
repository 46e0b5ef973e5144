#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pna/types.hpp"

namespace pna::apps {

// Episodic layered MDP: layers 0..L with single start and terminal states;
// actions available at layers 0..L−1; vector losses ℓ(x,a) ∈ [0,1]^d and
// thresholds c ∈ [0,L]^d define the feasibility problem  find π with
// ⟨q^π, ℓ^i⟩ ≤ c_i for all i.
struct LayeredMdp {
  std::vector<int> layerSizes;          // L+1 entries; first and last are 1
  int actions = 0;                      // A
  int d = 0;                            // number of constraints
  // transition[x][a][x'] over global state ids; rows sum to 1 for acting states
  std::vector<std::vector<Vector>> transition;
  std::vector<std::vector<Vector>> loss; // loss[x][a] ∈ [0,1]^d
  Vector thresholds;                     // c, dim d
  double eps0 = 0;                       // best-response oracle noise level
  double eps1 = 0;                       // estimation oracle noise level

  int horizon() const { return static_cast<int>(layerSizes.size()) - 1; }  // L
  int states() const;
  int layerOf(int state) const;
  int layerStart(int layer) const;
  bool acting(int state) const;          // has actions (not in the last layer)
  void validate() const;                 // throws std::invalid_argument
};

// Deterministic or stochastic policy: policy[x] ∈ Δ_A for acting states.
using Policy = std::vector<Vector>;

// State-action visitation probabilities q(x,a) from a forward pass.
struct OccupancyMeasure {
  std::vector<Vector> q;  // q[x] dim A for acting states; empty elsewhere

  Vector flat(const LayeredMdp& mdp) const;  // stacked over acting (x,a)
};

OccupancyMeasure occupancyFromPolicy(const LayeredMdp& mdp, const Policy& policy);

// ⟨q^π, ℓ^i⟩ per constraint — the exact expected cumulative loss vector.
Vector exactLoads(const LayeredMdp& mdp, const OccupancyMeasure& occupancy);

// Backward induction minimizing ⟨ℓ(·,·), θ′⟩; ties broken toward the lowest
// action index. With eps0 > 0 the state values are perturbed by seeded
// uniform noise in [−ε₀/(2L), ε₀/(2L)] before the greedy pass, keeping the
// value gap ≤ ε₀.
Policy bestResponse(const LayeredMdp& mdp, const Vector& theta, std::mt19937_64& rng);

// Exact loads plus optional seeded uniform noise in [−ε₁, ε₁], clipped to [0, L].
Vector estOracle(const LayeredMdp& mdp, const Policy& policy, std::mt19937_64& rng);

struct CmdpRunResult {
  std::vector<double> violationCurve;
  Vector averageLoads;
  double finalViolation = 0;
  std::vector<Vector> dualWeights;   // θ′_t (first d coordinates)
  std::vector<Vector> noisyLoads;    // ẑ_t
  std::vector<Vector> trueLoads;     // z_t of the played policy
  double oloRegret = 0;              // empirical hedge regret (padded domain)
};

// Approachability-driven feasibility: padded negentropy FTRL over Δ_{d+1}
// with payoff u_i = ẑ_i − c_i and losses y_t = −(ẑ_t − c); the responder is
// the best-response oracle on θ′_t.
CmdpRunResult cmdpFeasibilityRun(const LayeredMdp& mdp, int horizon, std::uint64_t seed);

// All A^{|acting states|} deterministic policies (test scale only).
std::vector<Policy> enumerateDeterministicPolicies(const LayeredMdp& mdp);

// Single-episode rollout of cumulative loss, for Monte-Carlo cross-checks.
Vector rolloutOnce(const LayeredMdp& mdp, const Policy& policy, std::mt19937_64& rng);

}  // namespace pna::apps
