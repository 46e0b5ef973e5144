#pragma once

#include <vector>

#include "pna/approach.hpp"
#include "pna/types.hpp"

namespace pna::apps {

// Bayesian swap regret: C types with prior μ, K actions per type. The action
// variable is the concatenation of per-type distributions (index (c,i) at
// c·K + i); losses are stacked per type the same way (ℓ_{i,c} at c·K + i).
// Deviations pair a type misreport κ : [C] → [C] with one action relabeling
// π_c : [K] → [K] per true type, giving payoff coordinates
//   u_{κ,π⃗}(p,ℓ) = Σ_c μ_c ( Σ_i p(c)_i ℓ_{i,c} − Σ_i p(κ(c))_i ℓ_{π_c(i),c} ).
struct BayesInstance {
  int C = 2;
  int K = 2;
  Vector mu;  // type distribution, dim C

  BayesInstance(int types, int actions, Vector prior);
  static BayesInstance uniformPrior(int types, int actions);

  int actionDim() const { return C * K; }
  double payoffDimLog() const;  // log(C^C · K^{KC})

  // Explicit coefficient matrices, one per (κ, π⃗), enumeration order: κ in
  // mixed radix (κ(0) fastest), then the π tuple in mixed radix. Guarded by
  // C^C·K^{KC} ≤ 10⁴.
  ExplicitPayoff explicitPayoff() const;
};

// Σ_c μ_c · max_{c'} Σ_i max_j Σ_t ( p_t(c)_i ℓ_t(i,c) − p_t(c')_i ℓ_t(j,c) ),
// clamped at 0; O(T·C²K²) via cross tensors.
double bayesSwapRegret(const BayesInstance& instance, const std::vector<Vector>& plays,
                       const std::vector<Vector>& losses);

// Incremental form: cross[c'][c] is the K×K matrix Σ_t p_t(c')·ℓ_t(·,c)ᵀ.
class BayesRegretAccumulator {
 public:
  explicit BayesRegretAccumulator(const BayesInstance& instance);
  void observe(const Vector& play, const Vector& loss);
  double regret() const;

 private:
  BayesInstance instance_;
  std::vector<std::vector<Matrix>> cross_;  // [c'][c], K×K over (i,j)
};

// Product-of-simplices action body Δ_K^C.
ConvexBody bayesActionBody(const BayesInstance& instance);

// Feasibility responder over the product simplex: p with
// ⟨θ̃, ũ(p, e_{(c,j)})⟩ ≤ 0 for all CK generators, residual ≤ 1e-8.
Vector bayesResponder(const Matrix& dualPoint, const BayesInstance& instance,
                      double tol = 1e-8);

double bayesResponderResidual(const Matrix& dualPoint, const Vector& p);

}  // namespace pna::apps
