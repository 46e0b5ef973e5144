#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pna/types.hpp"

namespace pna {

// A compact convex set described by oracles, together with an affine chart of
// its affine hull so that flat sets (simplices, hulls with linear equality
// structure) become full-dimensional in solver coordinates.
//
// Geometry contract: ball(innerPoint, innerRadius) ⊆ body ⊆
// ball(innerPoint, outerRadius), with both balls measured inside the chart.
struct ConvexBody {
  int ambientDim = 0;

  // Membership with absolute tolerance on the defining inequalities.
  std::function<bool(const Vector&)> contains;

  // Given x outside the body, returns an ambient normal h with
  // <h, x> > sup_{y in body} <h, y>. Optional: empty function means only
  // membership is available.
  std::function<std::optional<Vector>(const Vector&)> separate;

  // Exact (or high-accuracy) Euclidean projection onto the body. Optional.
  std::function<Vector(const Vector&)> project;

  Vector innerPoint;        // ambient point with a chart-space ball inside
  double innerRadius = 0;   // r
  double outerRadius = 0;   // R

  Matrix chart;             // ambientDim x k, orthonormal columns
  Vector chartOrigin;       // ambient offset of the chart

  int chartDim() const { return static_cast<int>(chart.cols()); }
  Vector lift(const Vector& w) const { return chartOrigin + chart * w; }
  Vector drop(const Vector& x) const { return chart.transpose() * (x - chartOrigin); }
};

inline constexpr double kMembershipTol = 1e-9;

// Euclidean projection onto the probability simplex (sort-based, exact).
Vector simplexProject(const Vector& x);

// Factories. All satisfy the ConvexBody geometry contract exactly.
ConvexBody simplexBody(int k);
ConvexBody boxBody(const Vector& lo, const Vector& hi);
ConvexBody ballBody(const Vector& center, double radius);
ConvexBody productSimplexBody(int blocks, int k);
ConvexBody segmentBody(double lo, double hi);  // 1-D interval

// Convex hull of explicit points (columns of `vertices`), with chart from the
// affine hull. Membership/projection via min-norm point; no inner ball is
// provided (innerRadius = 0), so it must not be used as a cutting-plane
// domain — use project/contains/separate only.
ConvexBody hullBody(const Matrix& vertices);

// Minimum-norm-point machinery over conv(columns of V): returns weights w in
// the simplex minimizing ||V w - y||. Fully corrective Frank-Wolfe with away
// steps; warm-startable. Terminates when the Wolfe gap certifies
// ||V w - y||^2 within gapTol of optimal.
struct MinNormResult {
  Vector weights;
  Vector point;
  double distance = 0;
  double gap = 0;  // final duality gap on the squared objective
};
MinNormResult minNormToHull(const Matrix& vertices, const Vector& y,
                            const Vector* warmStart = nullptr,
                            double gapTol = 1e-14, int maxIter = 0);

}  // namespace pna
