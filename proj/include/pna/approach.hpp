#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pna/convex_body.hpp"
#include "pna/olo.hpp"
#include "pna/oracle.hpp"
#include "pna/types.hpp"

namespace pna {

// Per-round trace row shared by every run variant.
struct RoundRecord {
  int t = 0;
  double regret = 0;     // application regret of the prefix (filled by caller hooks)
  double distance = 0;   // clamped distance of the average payoff
  double dualNorm = 0;   // ‖θ_t‖ or ‖θ̃_t‖
  double residual = 0;   // responder halfspace residual max_k ⟨θ, u(p, λ_k e_k)⟩
};

struct ApproachRun {
  std::vector<Vector> plays;    // p_t
  std::vector<Vector> losses;   // ℓ_t
  std::vector<RoundRecord> trace;
  Vector cumulativePayoff;      // Σ u(p_t,ℓ_t) (payoff-dim) — explicit path
  PayoffMatrix cumulativeBasis; // Σ ũ(p_t,ℓ_t) — pseudonorm paths
  double finalDistance = 0;     // clamped, of the average
  double finalRegret = 0;       // T · finalDistance
  double oloRegret = 0;         // empirical regret of the internal OLO
};

class SeparabilityViolation : public std::runtime_error {
 public:
  SeparabilityViolation(const std::string& what, int round)
      : std::runtime_error(what), round(round) {}
  int round;
};

// Loss provider: receives the round index, the chosen action, and a probe
// that maps a candidate loss to the post-round clamped distance of the
// cumulative payoff (used by worst-case adversaries).
using DistanceProbe = std::function<double(const Vector& loss)>;
using LossSource = std::function<Vector(int t, const Vector& play, const DistanceProbe&)>;

// Hook invoked after each round with the play/loss, letting the harness
// compute application regret incrementally. Returns the regret of the prefix.
using RegretHook = std::function<double(int t, const Vector& p, const Vector& l)>;

// ---- ℓ∞ path -------------------------------------------------------------

// The d-dimensional payoff view consumed by the ℓ∞ algorithm.
struct LinfProblem {
  int d = 0;
  double payoffBound = 1.0;  // D with u(p,ℓ) ∈ [−D, D]^d
  std::function<Vector(const Vector& p, const Vector& l)> payoff;
  // Action choice from the subprobability dual weights θ̄ (first d hedge
  // coordinates); must satisfy ⟨θ̄, u(p, ℓ)⟩ ≤ tol for all ℓ in the loss set.
  std::function<Vector(const Vector& thetaBar)> responder;
  // Residual of the halfspace condition for the trace (max over generators).
  std::function<double(const Vector& thetaBar, const Vector& p)> responderResidual;
  int dMaterializeGuard = 1000000;  // refuse payoff dimensions above this
};

ApproachRun linfRun(const LinfProblem& problem, const LossSource& losses, int horizon,
                    const RegretHook& regretHook = nullptr);

// ---- pseudonorm reduction -------------------------------------------------

struct PseudonormSpec {
  ExplicitPayoff payoff;
  // f(x) and the cone C = {x : ⟨v_i, x⟩ ≤ 0 ∀i} are induced by the payoff.
  double eval(const PayoffMatrix& z) const { return pseudonormEval(payoff, z); }
  bool inCone(const PayoffMatrix& z, double tol = kMembershipTol) const {
    return pseudodistanceToCone(payoff, z) <= tol;
  }
};

// Round-trip identity u_i(p,ℓ) = ⟨v_i, basisMap(p,ℓ)⟩ holds by construction.
PseudonormSpec reduceToPseudonorm(const ExplicitPayoff& payoff);

// ---- pseudonorm path (explicit hull) ---------------------------------------

struct ExplicitPseudoConfig {
  int n = 0;  // action dimension
  int m = 0;  // loss dimension
  // Coefficient matrices, needed only when `supOracle` or `customStep` is
  // absent; large payoff families supply oracles instead and leave it empty.
  std::optional<ExplicitPayoff> payoff;
  // sup_i ⟨v_i, z⟩ (unclamped) for the trace/final distance; defaults to the
  // explicit dualSup when a payoff is present.
  std::function<double(const PayoffMatrix& z)> supOracle;
  // The OLO domain: conv{v_i} as a body with exact projection; when empty, a
  // hullBody over the coefficient matrices is built.
  std::optional<ConvexBody> dualBody;
  Vector dualCenter;    // θ̃₁ (flattened); default Vᵀ(uniform)
  double eta = 0;       // quadratic rate; 0 = derive from diameters
  // Responder from the dual iterate (flattened θ̃).
  std::function<Vector(const Vector& dualPoint)> responder;
  std::function<double(const Vector& dualPoint, const Vector& p)> responderResidual;
  // Optional closed-form FTRL override: maps Σy (flattened) to the iterate.
  std::function<Vector(const Vector& cumulativeLoss)> customStep;
};

ApproachRun pseudonormRunExplicit(const ExplicitPseudoConfig& config,
                                  const LossSource& losses, int horizon,
                                  const RegretHook& regretHook = nullptr);

// ---- pseudonorm path (oracle machinery, Theorem-9 style) -------------------

struct OraclePseudoConfig {
  OracleBundle bundle;
  Vector dualCenter;        // θ̃₁ (flattened)
  double eta = 0;
  double stepTol = 1e-6;          // FTRL solve accuracy over the extended dual set
  double membershipTol = 1e-5;    // extended-dual membership decision tolerance
  std::function<double(const Vector& dualPoint, const Vector& p)> responderResidual;
};

ApproachRun pseudonormRunOracle(const OraclePseudoConfig& config, const LossSource& losses,
                                int horizon, const RegretHook& regretHook = nullptr);

// Responder through the feasibility solver: a point p ∈ P with
// ⟨θ̃, ũ(p, λ_k e_k)⟩ ≤ 0 for every generator (Lemma-5 existence).
Vector genericResponder(const PayoffMatrix& dualPoint, const ConvexBody& actionBody,
                        const OrthantGenerators& generators, double tol = 1e-8);

// max_k ⟨θ̃, ũ(p, λ_k e_k)⟩ — the responder residual.
double responderResidualGeneric(const PayoffMatrix& dualPoint, const Vector& p,
                                const OrthantGenerators& generators);

}  // namespace pna
