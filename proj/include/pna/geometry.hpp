#pragma once

#include <vector>

#include "pna/convex_body.hpp"
#include "pna/solve.hpp"
#include "pna/types.hpp"

namespace pna {

// sup over θ̃ in conv{v_i} of ( <θ̃,z> − max over S-vertices of <θ̃,s> ),
// solved as a linear program over the convex-combination weights of the v_i
// via the cutting-plane engine with analytic subgradients.
// Equals min over conv(S) of f(z − s) clamped appropriately: the value may be
// negative; the primal distance is its clamp at 0 (the support function is
// positively homogeneous in θ̃, so a negative supremum certifies z − s inside
// the cone for some s).
double fenchelDualDistance(const ExplicitPayoff& payoff, const PayoffMatrix& z,
                           const std::vector<PayoffMatrix>& polytopeVertices,
                           double tol = 1e-10);

// Membership of a matrix point in conv{v_i}: distance from θ̃ to the hull is
// computed by the min-norm-point routine and compared against tol.
bool hullMembership(const ExplicitPayoff& payoff, const PayoffMatrix& point,
                    double tol = 1e-7);

// Same decision made by the cutting-plane engine instead: minimizes
// ||Σ w_i v_i − θ̃||_∞ over the weight simplex. Used to cross-check the
// min-norm path.
double hullDistanceLp(const ExplicitPayoff& payoff, const PayoffMatrix& point,
                      double tol = 1e-9);

// Euclidean projection of θ̃ onto conv{v_i} plus the achieving weights.
MinNormResult hullProject(const ExplicitPayoff& payoff, const PayoffMatrix& point,
                          const Vector* warmStart = nullptr);

// diam(conv{v_i}) computed exactly by pairwise vertex distances.
double hullDiameter(const ExplicitPayoff& payoff);

}  // namespace pna
