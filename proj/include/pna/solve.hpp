#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "pna/convex_body.hpp"
#include "pna/types.hpp"

namespace pna {

struct SolveOptions {
  double tol = 1e-9;        // target accuracy on the objective value
  int maxIterations = 0;    // 0 = use the dimension-based formula cap
  double fdStep = 1e-7;     // finite-difference step for subgradients
  // Optional analytic subgradient (ambient space). When absent, central
  // finite differences in chart coordinates are used.
  std::function<Vector(const Vector&)> subgradient;
};

struct SolveResult {
  Vector point;   // ambient
  double value = 0;
  int iterations = 0;
};

// Thrown when the iteration budget is exhausted before the accuracy
// guarantee; carries the best incumbent found.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, SolveResult incumbent)
      : std::runtime_error(what), incumbent(std::move(incumbent)) {}
  SolveResult incumbent;
};

// Minimizes a convex function over a ConvexBody to within opts.tol using a
// central-cut cutting-plane method in chart coordinates (interval bisection
// when the chart is one-dimensional). Feasibility cuts come from the body's
// separation oracle when available, otherwise from a boundary-probe of the
// membership oracle along the segment to the inner point.
SolveResult convexMinimize(const ConvexBody& body,
                           const std::function<double(const Vector&)>& eval,
                           const SolveOptions& opts = {});

// <normal, x> <= offset.
struct Halfspace {
  Vector normal;
  double offset = 0;
};

// Finds a point of `body` satisfying every halfspace within `tol`, by
// minimizing the maximum constraint violation with the same cutting-plane
// machinery (phase-1 form). Returns nullopt when the minimized violation
// stays above tol after the full iteration budget — the budget plays the
// role of a volume-collapse certificate.
std::optional<Vector> lpFeasible(const std::vector<Halfspace>& constraints,
                                 const ConvexBody& body, double tol = 1e-9);

// Reads the solver-tolerance override from the environment (variable
// APPROACH_SOLVER_TOL); returns fallback when unset or unparsable.
double solverTolOverride(double fallback);

}  // namespace pna
