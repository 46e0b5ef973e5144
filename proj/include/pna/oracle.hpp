#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pna/convex_body.hpp"
#include "pna/solve.hpp"
#include "pna/types.hpp"

namespace pna {

struct Play {
  Vector p;  // action, dim n
  Vector l;  // loss, dim m
};

// max_i Σ_r α_r u_i(p_r, ℓ_r) evaluated without enumerating the payoff
// dimension; must be positively homogeneous in α.
using RegretOracle = std::function<double(const std::vector<Play>&, const Vector& alpha)>;

// The computational interface of the oracle-based path: a regret oracle, the
// action set with its geometry, orthant generators for the loss set, and an
// upper bound ρ on the norm of any dual iterate. The cone
// Z = cone{ũ(p, λ_k e_k)} and the extended dual set X = {θ̃ : ⟨θ̃,z⟩ ≤ f(z)
// ∀z ∈ Z} ∩ ball(ρ) are realized as ConvexBody values built from these
// oracles (makeZBallBody / makeExtendedDualBody).
struct OracleBundle {
  int n = 0;
  int m = 0;
  ConvexBody actionBody;        // P, with an exact projection
  OrthantGenerators generators; // λ_k, k = 1..m
  RegretOracle regretOracle;
  double rho = 0;               // dual-norm bound

  // Cutting-plane geometry for the extended dual set: a point with
  // ball(dualInteriorPoint, dualInteriorRadius) ⊆ X. For action sets whose
  // cone contains the nonnegative orthant image, −ε·1 with radius ε works.
  Vector dualInteriorPoint;     // dim n*m (flattened column-major)
  double dualInteriorRadius = 0;

  // Interior geometry for Z ∩ unit-ball in flattened coordinates.
  Vector zInteriorPoint;
  double zInteriorRadius = 0;

  // Optional exact separator for cone(P) column tests: given a column y with
  // y ∉ cone(P), return h with ⟨h,y⟩ > 0 and ⟨h,x⟩ ≤ 0 on cone(P). When the
  // cone has simple structure (e.g. an orthant) this avoids the generic
  // projection-based cut, which is only valid after verification.
  std::function<std::optional<Vector>(const Vector&)> coneSeparator;

  // Optional supporting gradient of z ↦ sup_i ⟨v_i, z⟩ (a maximizing v_i),
  // valid on all of ℝ^{n×m} and computable in poly(n, m). Used to replace
  // finite-difference subgradients in the extended-dual membership solve;
  // the value itself always goes through the regret oracle. By positive
  // homogeneity the supporting value is recoverable as ⟨g, z⟩.
  std::function<PayoffMatrix(const PayoffMatrix&)> supGradient;
};

struct ConeDecomposition {
  Vector alpha;             // α_k ≥ 0 per generator (0 for skipped columns)
  std::vector<Play> plays;  // (p_k, λ_k e_k) for the active columns
  std::vector<int> columns; // which k each play belongs to
};

// Membership of z in Z = cone{ũ(p, λ_k e_k) : p ∈ P, k ∈ [m]} with explicit
// witness: each nonzero column z_k is tested against cone(P) by minimizing
// dist(β·z_k, P)² over the scale β (a one-dimensional convex program), and on
// success z = Σ_k α_k ũ(p_k, λ_k e_k) is returned with reconstruction error
// ≤ 1e-8. Returns nullopt when some column is outside cone(P).
std::optional<ConeDecomposition> coneMembershipZ(const PayoffMatrix& z,
                                                 const ConvexBody& actionBody,
                                                 const OrthantGenerators& generators,
                                                 double tol = 1e-9);

// max_i ⟨v_i, z⟩ for z ∈ Z, evaluated through the regret oracle applied to
// the cone decomposition. Throws std::domain_error when z ∉ Z.
double evalMaxOverZ(const OracleBundle& bundle, const PayoffMatrix& z, double tol = 1e-9);

struct DualMembershipReport {
  bool inside = false;
  double minH = 0;       // min over Z ∩ unit-ball of f(z) − ⟨θ̃,z⟩
  Vector witness;        // minimizer (flattened); a separating normal when outside
};

// Membership of θ̃ in the extended dual set {θ̃ : ⟨θ̃,z⟩ ≤ f(z) ∀z ∈ Z}:
// minimizes h(z) = f(z) − ⟨θ̃,z⟩ over Z ∩ unit-ball and accepts iff the
// minimum is ≥ −tol (h is positively homogeneous on the cone, so the sign on
// the unit-ball slice decides). With earlyExit, the search stops at the first
// certified-negative evaluation (enough for a separation cut).
DualMembershipReport extendedDualMembership(const OracleBundle& bundle,
                                            const PayoffMatrix& dualPoint,
                                            double tol = 1e-6, bool earlyExit = false,
                                            double solveTol = 1e-7);

// Z ∩ unit-ball as a ConvexBody (membership from coneMembershipZ, separation
// from column-projection normals and the ball gradient).
ConvexBody makeZBallBody(const OracleBundle& bundle, double tol = 1e-9);

// The extended dual set X = T*_f(Z) ∩ ball(ρ) as a ConvexBody; membership and
// separation both come from extendedDualMembership.
ConvexBody makeExtendedDualBody(const OracleBundle& bundle, double membershipTol = 1e-6);

}  // namespace pna
