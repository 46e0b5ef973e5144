#pragma once

#include <vector>

#include "pna/approach.hpp"
#include "pna/types.hpp"

namespace pna::apps {

// Swap-regret game: actions Δ_K, losses [0,1]^K, one payoff coordinate per
// relabeling function π : [K] → [K] with u_π(p,ℓ) = Σ_i p_i(ℓ_i − ℓ_{π(i)}).
struct SwapInstance {
  int K = 2;

  explicit SwapInstance(int k) : K(k) {}
  double payoffDim() const;  // K^K as a double (exact below 2⁵³, guard-safe above)

  // Explicit coefficient matrices v_π[i][j] = δ_ij − 1{j = π(i)}, one per
  // relabeling, enumerated in mixed-radix order (π(0) fastest). Only valid
  // when K^K ≤ 10⁴.
  ExplicitPayoff explicitPayoff() const;

  // All K^K relabelings as rows, same enumeration order.
  std::vector<std::vector<int>> enumerateMaps() const;
};

// Σ_i max_j Σ_t p_{ti}(ℓ_{ti} − ℓ_{tj}), never negative (j = i allowed).
double swapRegret(const std::vector<Vector>& plays, const std::vector<Vector>& losses);

// Same from the accumulated cross matrix B = Σ_t p_t ℓ_tᵀ.
double swapRegretFromCross(const Matrix& cross);

// Row-stochastic marginal matrix Q recovered from a dual point θ̃ via
// q_ij = −θ̃_ij (j ≠ i), q_ii = 1 − θ̃_ii.
Matrix marginalsFromDual(const Matrix& dualPoint, double tol = 1e-6);
Matrix dualFromMarginals(const Matrix& q);

// R̃(θ̃) = Σ_ij q_ij log q_ij with 0·log 0 = 0 (negative row entropies).
double swapMaxentRegularizer(const Matrix& dualPoint, double tol = 1e-6);

// Stationary distribution of a row-stochastic matrix: power iteration from
// the uniform vector, with a Cesàro-averaged doubling fallback for periodic
// chains. Residual ‖pᵀQ − pᵀ‖_∞ ≤ 1e-10 guaranteed (tighter in practice).
Vector stationaryFromUniform(const Matrix& rowStochastic);

// Responder: the stationary distribution of the marginal matrix.
Vector swapResponder(const Matrix& marginals);

// Closed-form maxent FTRL step: θ̃ = I − Q with rows
// q_{i,·} = softmax(−η · W_{i,·}) for W = Σ_t p_t ℓ_tᵀ.
Matrix swapMaxentStep(const Matrix& crossCumulative, double eta);

// The dual hull conv{v_π} = I − (row-stochastic matrices) as a ConvexBody
// over flattened K×K matrices, with exact per-row simplex projection.
ConvexBody swapDualBody(int K);

// Payoff-dimension bound D = 1 and the ℓ∞-path problem view (u enumerated
// over all K^K maps; guarded by the 10⁶ materialization limit).
LinfProblem swapLinfProblem(int K);

// Oracle bundle for the Theorem-9 path (regret oracle in O(K²), simplex
// action body, unit generators, ρ = 2·max‖v_π‖).
OracleBundle swapOracleBundle(int K);

// Vᵀ(uniform over relabelings) = I − (1/K)·𝟙𝟙ᵀ, the shared initialization.
Matrix swapUniformDual(int K);

}  // namespace pna::apps
