#include "pna/olo.hpp"

#include <cmath>
#include <stdexcept>

namespace pna {

double learningRate(RegularizerKind kind, int horizon, double diamX, double diamY,
                    double dim) {
  if (horizon < 1) throw std::invalid_argument("learningRate: horizon must be positive");
  if (diamY <= 0) throw std::invalid_argument("learningRate: loss diameter must be positive");
  double rootT = std::sqrt(static_cast<double>(horizon));
  switch (kind) {
    case RegularizerKind::Quadratic:
      if (diamX <= 0) throw std::invalid_argument("learningRate: domain diameter must be positive");
      return diamX / (diamY * rootT);
    case RegularizerKind::Negentropy:
      if (dim <= 1.0) throw std::invalid_argument("learningRate: negentropy needs dim > 1");
      return std::sqrt(std::log(dim) / static_cast<double>(horizon)) / diamY;
  }
  throw std::logic_error("learningRate: unknown regularizer");
}

Vector tieBreakVector(int dim) {
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out(i) = 1.0 / static_cast<double>(i + 1);
  return out;
}

Vector ftrlNegentropyStep(const Vector& cumulativeLoss, double eta) {
  Vector scaled = -eta * cumulativeLoss;
  Vector shifted = (scaled.array() - scaled.maxCoeff()).exp();
  return shifted / shifted.sum();
}

Vector ftrlQuadraticStep(const ConvexBody& domain, const Vector& center,
                         const Vector& cumulativeLoss, double eta,
                         const SolveOptions& opts) {
  Vector candidate = center - 0.5 * eta * cumulativeLoss;
  if (domain.project) return domain.project(candidate);
  auto objective = [&candidate](const Vector& x) {
    return (x - candidate).squaredNorm();
  };
  SolveOptions local = opts;
  local.subgradient = [&candidate](const Vector& x) {
    return Vector(2.0 * (x - candidate));
  };
  return convexMinimize(domain, objective, local).point;
}

Vector ftrlCustomStep(const ConvexBody& domain,
                      const std::function<double(const Vector&)>& regularizer,
                      const Vector& cumulativeLoss, double eta,
                      const SolveOptions& opts) {
  auto objective = [&](const Vector& x) {
    return regularizer(x) + eta * cumulativeLoss.dot(x);
  };
  return convexMinimize(domain, objective, opts).point;
}

Hedge::Hedge(int dim, double eta) : cumulative_(Vector::Zero(dim)), eta_(eta) {
  if (dim < 1) throw std::invalid_argument("Hedge: dimension must be positive");
  if (eta <= 0) throw std::invalid_argument("Hedge: learning rate must be positive");
}

Vector Hedge::step() const { return ftrlNegentropyStep(cumulative_, eta_); }

void Hedge::observe(const Vector& loss) {
  if (loss.size() != cumulative_.size()) throw std::invalid_argument("Hedge: loss dimension mismatch");
  cumulative_ += loss;
}

PaddedHedge::PaddedHedge(int d, double lossBound, double eta)
    : inner_(d + 1, eta), d_(d), bound_(lossBound), eta_(eta) {
  if (lossBound <= 0) throw std::invalid_argument("PaddedHedge: loss bound must be positive");
}

Vector PaddedHedge::fullWeights() const { return inner_.step(); }

Vector PaddedHedge::subWeights() const { return inner_.step().head(d_); }

void PaddedHedge::observe(const Vector& rawLoss) {
  if (rawLoss.size() != d_) throw std::invalid_argument("PaddedHedge: loss dimension mismatch");
  if (rawLoss.cwiseAbs().maxCoeff() > bound_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("PaddedHedge: loss exceeds declared bound");
  }
  Vector mapped(d_ + 1);
  mapped.head(d_) = (rawLoss / bound_).array() * 0.5 + 0.5;
  mapped(d_) = 0.0;
  inner_.observe(mapped);
}

QuadraticFtrl::QuadraticFtrl(ConvexBody domain, Vector center, double eta, SolveOptions opts)
    : domain_(std::move(domain)),
      center_(std::move(center)),
      cumulative_(Vector::Zero(center_.size())),
      eta_(eta),
      opts_(std::move(opts)) {
  if (eta <= 0) throw std::invalid_argument("QuadraticFtrl: learning rate must be positive");
  if (center_.size() != domain_.ambientDim) {
    throw std::invalid_argument("QuadraticFtrl: center dimension mismatch");
  }
}

Vector QuadraticFtrl::step() {
  return ftrlQuadraticStep(domain_, center_, cumulative_, eta_, opts_);
}

void QuadraticFtrl::observe(const Vector& loss) {
  if (loss.size() != cumulative_.size()) {
    throw std::invalid_argument("QuadraticFtrl: loss dimension mismatch");
  }
  cumulative_ += loss;
}

}  // namespace pna
