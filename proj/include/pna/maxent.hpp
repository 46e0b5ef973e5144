#pragma once

#include "pna/types.hpp"

namespace pna {

// Result of the entropy-maximization oracle
//   max { H(θ) : θ ∈ Δ_d, Vᵀθ = θ̃ }.
// The maximizer is a Gibbs distribution θ_i ∝ exp(⟨λ, v_i⟩); the dual value
// ⟨λ,θ̃⟩ − log Z(λ) at the optimum equals −H(θ*), so the regularizer value
// R̃(θ̃) = −H(θ*) is the optimal dual objective.
struct MaxentResult {
  double entropy = 0;        // H(θ*)
  double dualValue = 0;      // ⟨λ,θ̃⟩ − log Z(λ) at the returned λ
  Vector lambda;             // dual variables, dim n·m
  Vector gibbs;              // θ*, dim d
  double residual = 0;       // ‖Vᵀθ* − θ̃‖_∞
  int iterations = 0;
  bool converged = false;
};

// Damped-Newton ascent on the concave dual D(λ) = ⟨λ,θ̃⟩ − log Σ_i exp⟨λ,v_i⟩.
// Requires the explicit coefficient matrices (d ≤ 10⁴ guard). Convergence
// criterion: constraint residual ‖Vᵀθ − θ̃‖_∞ ≤ residualTol.
MaxentResult maxentOracleSmall(const ExplicitPayoff& payoff, const PayoffMatrix& dualPoint,
                               double residualTol = 1e-6, int maxIterations = 2000);

}  // namespace pna
