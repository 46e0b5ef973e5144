#include "pna/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace pna {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int formulaCap(int k, double R, double r, double tol) {
  double ratio = R / std::max(r * tol, 1e-300);
  double cap = 10.0 * k * k * std::max(1.0, std::log(ratio));
  return static_cast<int>(std::min(cap, 5e7)) + 1;
}

// Boundary-probe feasibility cut for membership-only bodies: the direction
// from the inner point to the (infeasible) query.
Vector segmentCut(const ConvexBody& body, const Vector& c) {
  Vector w0 = body.drop(body.innerPoint);
  Vector g = c - w0;
  double n = g.norm();
  if (n <= 1e-15) g = Vector::Ones(c.size());
  else g /= n;
  return g;
}

SolveResult bisection1d(const ConvexBody& body, const std::function<double(const Vector&)>& eval,
                        const SolveOptions& opts) {
  const double R = body.outerRadius;
  Vector w0 = body.drop(body.innerPoint);
  double center = w0(0);

  auto feasible = [&](double w) {
    Vector ww(1);
    ww << w;
    return body.contains(body.lift(ww));
  };
  auto boundary = [&](double inside, double outside) {
    for (int i = 0; i < 80; ++i) {
      double mid = 0.5 * (inside + outside);
      (feasible(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  double lo = feasible(center - R) ? center - R : boundary(center, center - R);
  double hi = feasible(center + R) ? center + R : boundary(center, center + R);

  auto value = [&](double w) {
    Vector ww(1);
    ww << w;
    return eval(body.lift(ww));
  };
  // Golden-section search; convexity makes the objective unimodal.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = value(x1), f2 = value(x2);
  int iters = 0;
  const int cap = opts.maxIterations > 0 ? opts.maxIterations : 220;
  while (b - a > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)) && iters < cap) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = value(x2);
    }
    ++iters;
  }
  double wBest = f1 <= f2 ? x1 : x2;
  // Compare against the interval ends, which golden-section never probes.
  double fBest = std::min(f1, f2);
  for (double cand : {lo, hi}) {
    double fc = value(cand);
    if (fc < fBest) {
      fBest = fc;
      wBest = cand;
    }
  }
  Vector ww(1);
  ww << wBest;
  SolveResult out;
  out.point = body.lift(ww);
  out.value = fBest;
  out.iterations = iters;
  return out;
}

}  // namespace

SolveResult convexMinimize(const ConvexBody& body,
                           const std::function<double(const Vector&)>& eval,
                           const SolveOptions& opts) {
  const int k = body.chartDim();
  if (k == 0) {
    SolveResult out;
    out.point = body.lift(Vector::Zero(0));
    out.value = eval(out.point);
    out.iterations = 0;
    return out;
  }
  if (body.innerRadius <= 0 || body.outerRadius < body.innerRadius) {
    throw std::invalid_argument("convexMinimize: body lacks inner/outer ball geometry");
  }
  if (k == 1) return bisection1d(body, eval, opts);

  const double tol = opts.tol;
  const int cap = opts.maxIterations > 0 ? opts.maxIterations
                                         : formulaCap(k, body.outerRadius, body.innerRadius, tol);
  const bool fullBudget = opts.maxIterations == 0 ||
                          opts.maxIterations >= formulaCap(k, body.outerRadius, body.innerRadius, tol);

  // Localization ellipsoid {c + Lw : ‖w‖ ≤ 1} kept in factored form: the
  // central-cut update E' = δ(E − σbbᵀ) becomes L' = √δ·L(I − αuuᵀ) with
  // α = 1 − √(1 − σ), which stays positive semidefinite by construction no
  // matter how anisotropic the localization gets.
  Vector c = body.drop(body.innerPoint);
  Matrix L = Matrix::Identity(k, k) * body.outerRadius;
  const double deltaFactor = std::sqrt(double(k) * k / (double(k) * k - 1.0));
  const double sigma = 2.0 / (k + 1.0);
  const double alpha = 1.0 - std::sqrt(1.0 - sigma);

  SolveResult best;
  best.value = kInf;
  int iter = 0;
  for (; iter < cap; ++iter) {
    Vector x = body.lift(c);
    Vector g;  // chart-space cut, halfspace {⟨g, w − c⟩ > 0} removed

    bool feasiblePoint = false;
    std::optional<Vector> sep;
    if (body.separate) {
      sep = body.separate(x);
      feasiblePoint = !sep.has_value();
    } else {
      feasiblePoint = body.contains(x);
    }

    if (!feasiblePoint) {
      if (sep.has_value()) {
        g = body.chart.transpose() * (*sep);
        if (g.norm() <= 1e-15) g = segmentCut(body, c);
      } else {
        g = segmentCut(body, c);
      }
    } else {
      double value = eval(x);
      if (value < best.value) {
        best.value = value;
        best.point = x;
      }
      g = Vector::Zero(k);
      if (opts.subgradient) g = body.chart.transpose() * opts.subgradient(x);
      if (!opts.subgradient || g.norm() <= 1e-15) {
        // No callback, or the callback returned a chart-flat element. One
        // flat element of the subdifferential does not certify optimality of
        // a piecewise objective, so probe by central differences before
        // concluding the point is a minimizer.
        g = Vector(k);
        double h = opts.fdStep * std::max(1.0, c.norm());
        for (int i = 0; i < k; ++i) {
          Vector cp = c, cm = c;
          cp(i) += h;
          cm(i) -= h;
          g(i) = (eval(body.lift(cp)) - eval(body.lift(cm))) / (2.0 * h);
        }
      }
      if (g.norm() <= 1e-15) {
        best.iterations = iter + 1;
        return best;  // flat objective at a feasible point: optimal
      }
    }

    Vector v = L.transpose() * g;
    double vn = v.norm();
    if (vn <= 1e-140 * std::max(1.0, g.norm())) break;  // localization exhausted
    Vector u = v / vn;
    Vector b = L * u;  // = Eg/√(gᵀEg)
    c -= b / (k + 1.0);
    L = deltaFactor * (L - alpha * b * u.transpose());
  }

  if (!std::isfinite(best.value)) {
    best.iterations = iter;
    throw SolverFailure("convexMinimize: no feasible point evaluated", best);
  }
  best.iterations = iter;
  if (!fullBudget && iter >= cap) {
    throw SolverFailure("convexMinimize: iteration budget below the accuracy cap", best);
  }
  return best;
}

std::optional<Vector> lpFeasible(const std::vector<Halfspace>& constraints,
                                 const ConvexBody& body, double tol) {
  auto violation = [&constraints](const Vector& x) {
    double worst = 0.0;
    for (const auto& hs : constraints) {
      worst = std::max(worst, hs.normal.dot(x) - hs.offset);
    }
    return worst;
  };
  if (constraints.empty()) return body.innerPoint;
  if (violation(body.innerPoint) <= 0) return body.innerPoint;

  SolveOptions opts;
  opts.tol = std::min(tol / 2, 1e-9);
  opts.subgradient = [constraints](const Vector& x) {
    double worst = -kInf;
    const Halfspace* active = nullptr;
    for (const auto& hs : constraints) {
      double v = hs.normal.dot(x) - hs.offset;
      if (v > worst) {
        worst = v;
        active = &hs;
      }
    }
    return active->normal;
  };
  SolveResult res;
  try {
    res = convexMinimize(body, violation, opts);
  } catch (const SolverFailure& failure) {
    res = failure.incumbent;
    if (!std::isfinite(res.value)) return std::nullopt;
  }
  if (res.value <= tol) return res.point;
  return std::nullopt;
}

double solverTolOverride(double fallback) {
  const char* raw = std::getenv("APPROACH_SOLVER_TOL");
  if (!raw) return fallback;
  char* end = nullptr;
  double parsed = std::strtod(raw, &end);
  if (end == raw || !(parsed > 0) || !std::isfinite(parsed)) return fallback;
  return parsed;
}

}  // namespace pna
