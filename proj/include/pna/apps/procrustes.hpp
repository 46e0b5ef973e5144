#pragma once

#include <vector>

#include "pna/approach.hpp"
#include "pna/types.hpp"

namespace pna::apps {

// Procrustean swap regret: actions in the unit ℓ2 ball of ℝ^n, losses in
// [−1,1]^n, deviations indexed by orthogonal matrices Q with
// u_Q(p,ℓ) = ⟨p,ℓ⟩ − ⟨Qp,ℓ⟩, i.e. coefficient matrices v_Q = I − Qᵀ.
struct ProcrustesInstance {
  int n = 1;
  explicit ProcrustesInstance(int dim) : n(dim) {}
};

// Σ_t ⟨p_t,ℓ_t⟩ + ‖Σ_t ℓ_t p_tᵀ‖_nuclear (the orthogonal-group maximum in
// closed form); never negative since Q = I is a feasible deviation.
double procrustesRegret(const std::vector<Vector>& plays, const std::vector<Vector>& losses);

// From the accumulated matrix A = Σ_t ℓ_t p_tᵀ and the play/loss inner products.
double procrustesRegretFromCross(double playLossSum, const Matrix& cross);

// The dual set {I − Mᵀ : σ_max(M) ≤ 1} over flattened n×n matrices, with
// exact projection by singular-value clipping.
ConvexBody procrustesDualBody(int n);

// Projection of the fixed preference vector (1, 1/2, …, 1/n) onto
// ker(I − M) (SVD cutoff 1e-8), scaled into the unit ball; M = (I − θ̃)ᵀ.
Vector procrustesResponder(const Matrix& dualPoint);

double procrustesResponderResidual(const Matrix& dualPoint, const Vector& p);

}  // namespace pna::apps
