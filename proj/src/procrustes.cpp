#include "pna/apps/procrustes.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace pna::apps {

double procrustesRegret(const std::vector<Vector>& plays, const std::vector<Vector>& losses) {
  if (plays.empty()) return 0.0;
  if (plays.size() != losses.size()) {
    throw std::invalid_argument("procrustesRegret: length mismatch");
  }
  const int n = static_cast<int>(plays.front().size());
  double playLossSum = 0;
  Matrix cross = Matrix::Zero(n, n);
  for (std::size_t t = 0; t < plays.size(); ++t) {
    playLossSum += plays[t].dot(losses[t]);
    cross += losses[t] * plays[t].transpose();
  }
  return procrustesRegretFromCross(playLossSum, cross);
}

double procrustesRegretFromCross(double playLossSum, const Matrix& cross) {
  // max over orthogonal Q of −Σ⟨Qp_t, ℓ_t⟩ = max_Q −tr(Qᵀ·cross... ) equals
  // the nuclear norm of the accumulated matrix.
  Eigen::JacobiSVD<Matrix> svd(cross);
  return playLossSum + svd.singularValues().sum();
}

ConvexBody procrustesDualBody(int n) {
  const int nm = n * n;
  ConvexBody body;
  body.ambientDim = nm;
  body.chart = Matrix::Identity(nm, nm);
  body.chartOrigin = Vector::Zero(nm);
  // θ̃ = I − Mᵀ with σ_max(M) ≤ 1: an affine isometry of the spectral-norm
  // ball. M = 0 (θ̃ = I) is the deepest interior point: σ_max ≤ ‖·‖_F gives an
  // inscribed Frobenius ball of radius 1; ‖M‖_F ≤ √n·σ_max gives the √n cover.
  body.innerPoint = Matrix::Identity(n, n).reshaped();
  body.innerRadius = 1.0;
  body.outerRadius = std::sqrt(static_cast<double>(n));

  auto toM = [n](const Vector& flat) {
    Matrix theta = unflatten(flat, n, n);
    return Matrix((Matrix::Identity(n, n) - theta).transpose());
  };
  auto fromM = [n](const Matrix& m) {
    return Vector((Matrix::Identity(n, n) - m.transpose()).reshaped());
  };
  body.contains = [toM](const Vector& flat) {
    Matrix m = toM(flat);
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().maxCoeff() <= 1.0 + kMembershipTol;
  };
  body.project = [toM, fromM](const Vector& flat) {
    Matrix m = toM(flat);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vector clipped = svd.singularValues().cwiseMin(1.0);
    return fromM(svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose());
  };
  auto project = body.project;
  body.separate = [project](const Vector& flat) -> std::optional<Vector> {
    Vector proj = project(flat);
    Vector diff = flat - proj;
    double dist = diff.norm();
    if (dist <= kMembershipTol) return std::nullopt;
    return Vector(diff / dist);
  };
  return body;
}

Vector procrustesResponder(const Matrix& dualPoint) {
  const int n = static_cast<int>(dualPoint.rows());
  Matrix m = (Matrix::Identity(n, n) - dualPoint).transpose();
  // p must satisfy ⟨p,ℓ⟩ − ⟨Mᵀ... ⟩ ≤ 0 for all ℓ, i.e. (I − M)p = 0; project
  // the preference vector onto the kernel.
  Matrix gap = Matrix::Identity(n, n) - m;
  Eigen::JacobiSVD<Matrix> svd(gap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector pref(n);
  for (int i = 0; i < n; ++i) pref(i) = 1.0 / (i + 1.0);
  double cutoff = 1e-8 * std::max(1.0, svd.singularValues().maxCoeff());
  Vector projected = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (svd.singularValues()(i) <= cutoff) {
      Vector basis = svd.matrixV().col(i);
      projected += basis.dot(pref) * basis;
    }
  }
  double norm = projected.norm();
  if (norm > 1.0) projected /= norm;
  return projected;
}

double procrustesResponderResidual(const Matrix& dualPoint, const Vector& p) {
  // sup over ℓ ∈ [−1,1]^n of ⟨θ̃ᵀp, ℓ⟩ = ‖θ̃ᵀ p‖₁.
  return (dualPoint.transpose() * p).lpNorm<1>();
}

}  // namespace pna::apps
