#pragma once

#include <functional>

#include "pna/convex_body.hpp"
#include "pna/solve.hpp"
#include "pna/types.hpp"

namespace pna {

enum class RegularizerKind { Quadratic, Negentropy };

// Fixed-horizon learning rates.
//   quadratic:  η = D_x / (D_y · √T)
//   negentropy: η = √(log(dim)/T) / D_y
// `dim` may be non-integral (it enters only through log), so it is a double.
double learningRate(RegularizerKind kind, int horizon, double diamX, double diamY,
                    double dim = 0.0);

// Deterministic generic tie-break vector (1, 1/2, 1/3, …) of a given size,
// used to resolve argmin ties in action selection.
Vector tieBreakVector(int dim);

// θ ∝ exp(−η·Σy) over the simplex, guarded by max-subtraction. `cumulative`
// has the simplex dimension (callers over the padded simplex pass d+1).
Vector ftrlNegentropyStep(const Vector& cumulativeLoss, double eta);

// argmin over X of ‖x−x₀‖² + η·⟨x, Σy⟩ — the projection of x₀ − (η/2)Σy onto
// X. Uses the body's exact projection when available, otherwise the
// cutting-plane engine.
Vector ftrlQuadraticStep(const ConvexBody& domain, const Vector& center,
                         const Vector& cumulativeLoss, double eta,
                         const SolveOptions& opts = {});

// argmin over X of R(x) + η·⟨x, Σy⟩ for a caller-supplied convex regularizer.
Vector ftrlCustomStep(const ConvexBody& domain,
                      const std::function<double(const Vector&)>& regularizer,
                      const Vector& cumulativeLoss, double eta,
                      const SolveOptions& opts = {});

// Exponential-weights learner over the simplex (dim coordinates) with losses
// observed as raw vectors; plays ftrlNegentropyStep of the accumulated loss.
class Hedge {
 public:
  Hedge(int dim, double eta);
  Vector step() const;               // current weights
  void observe(const Vector& loss);  // accumulate
  const Vector& cumulativeLoss() const { return cumulative_; }

 private:
  Vector cumulative_;
  double eta_;
};

// Negentropy FTRL over the padded simplex: payoff-driven losses y ∈ [−D,D]^d
// are mapped coordinatewise to (1 + y/D)/2 ∈ [0,1] with a fixed 0 appended
// (the padding coordinate), and exponential weights run over d+1 coordinates.
// subWeights() exposes the first d coordinates — a subprobability vector —
// which is what the responder condition consumes.
class PaddedHedge {
 public:
  PaddedHedge(int d, double lossBound, double eta);
  Vector fullWeights() const;  // Δ_{d+1}
  Vector subWeights() const;   // first d coordinates
  void observe(const Vector& rawLoss);  // y ∈ [−D, D]^d
  double eta() const { return eta_; }

 private:
  Hedge inner_;
  int d_;
  double bound_;
  double eta_;
};

// FTRL with quadratic regularizer over an arbitrary ConvexBody domain,
// maintaining Σy and the round index.
class QuadraticFtrl {
 public:
  QuadraticFtrl(ConvexBody domain, Vector center, double eta, SolveOptions opts = {});
  Vector step();  // current iterate
  void observe(const Vector& loss);
  const Vector& cumulativeLoss() const { return cumulative_; }

 private:
  ConvexBody domain_;
  Vector center_;
  Vector cumulative_;
  double eta_;
  SolveOptions opts_;
};

}  // namespace pna
