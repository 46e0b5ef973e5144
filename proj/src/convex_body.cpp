#include "pna/convex_body.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pna {
namespace {

// Orthonormal basis of the hyperplane {x : Σx = 0} in R^k via the QR
// factorization of the all-ones vector.
Matrix zeroSumChart(int k) {
  if (k <= 1) return Matrix::Zero(k, 0);
  Vector ones = Vector::Ones(k);
  Eigen::HouseholderQR<Matrix> qr(ones);
  Matrix q = qr.householderQ();
  return q.rightCols(k - 1);
}

double simplexInradius(int k) { return 1.0 / std::sqrt(double(k) * (k - 1)); }
double simplexCircumradius(int k) { return std::sqrt(1.0 - 1.0 / k); }

std::optional<Vector> separateByProjection(const std::function<Vector(const Vector&)>& project,
                                           const Vector& x, double tol) {
  Vector p = project(x);
  Vector h = x - p;
  double dist = h.norm();
  if (dist <= tol) return std::nullopt;
  return Vector(h / dist);
}

}  // namespace

Vector simplexProject(const Vector& x) {
  const int k = static_cast<int>(x.size());
  if (k == 0) return x;
  std::vector<double> u(x.data(), x.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  int support = 0;
  for (int j = 0; j < k; ++j) {
    cumulative += u[j];
    double candidate = (cumulative - 1.0) / (j + 1);
    if (u[j] - candidate > 0) {
      support = j + 1;
      tau = candidate;
    }
  }
  (void)support;
  return (x.array() - tau).cwiseMax(0.0).matrix();
}

ConvexBody simplexBody(int k) {
  if (k < 1) throw std::invalid_argument("simplexBody: k must be >= 1");
  ConvexBody body;
  body.ambientDim = k;
  body.contains = [k](const Vector& x) {
    if (x.size() != k) return false;
    return x.minCoeff() >= -kMembershipTol && std::abs(x.sum() - 1.0) <= kMembershipTol;
  };
  body.project = [](const Vector& x) { return simplexProject(x); };
  body.separate = [body_project = body.project](const Vector& x) {
    return separateByProjection(body_project, x, 1e-12);
  };
  body.innerPoint = Vector::Constant(k, 1.0 / k);
  body.innerRadius = k == 1 ? 1.0 : simplexInradius(k);
  body.outerRadius = k == 1 ? 1.0 : simplexCircumradius(k);
  body.chart = zeroSumChart(k);
  body.chartOrigin = body.innerPoint;
  return body;
}

ConvexBody boxBody(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    throw std::invalid_argument("boxBody: bounds must have equal positive size");
  }
  if (((hi - lo).array() <= 0).any()) {
    throw std::invalid_argument("boxBody: hi must exceed lo in every coordinate");
  }
  const int k = static_cast<int>(lo.size());
  ConvexBody body;
  body.ambientDim = k;
  body.contains = [lo, hi](const Vector& x) {
    return (x.array() >= lo.array() - kMembershipTol).all() &&
           (x.array() <= hi.array() + kMembershipTol).all();
  };
  body.project = [lo, hi](const Vector& x) {
    return x.cwiseMax(lo).cwiseMin(hi);
  };
  body.separate = [project = body.project](const Vector& x) {
    return separateByProjection(project, x, 1e-12);
  };
  body.innerPoint = 0.5 * (lo + hi);
  body.innerRadius = 0.5 * (hi - lo).minCoeff();
  body.outerRadius = 0.5 * (hi - lo).norm();
  body.chart = Matrix::Identity(k, k);
  body.chartOrigin = Vector::Zero(k);
  return body;
}

ConvexBody ballBody(const Vector& center, double radius) {
  if (radius <= 0) throw std::invalid_argument("ballBody: radius must be positive");
  const int k = static_cast<int>(center.size());
  ConvexBody body;
  body.ambientDim = k;
  body.contains = [center, radius](const Vector& x) {
    return (x - center).norm() <= radius + kMembershipTol;
  };
  body.project = [center, radius](const Vector& x) {
    Vector delta = x - center;
    double norm = delta.norm();
    if (norm <= radius) return x;
    return Vector(center + delta * (radius / norm));
  };
  body.separate = [center, radius](const Vector& x) -> std::optional<Vector> {
    Vector delta = x - center;
    double norm = delta.norm();
    if (norm <= radius + 1e-12) return std::nullopt;
    return Vector(delta / norm);
  };
  body.innerPoint = center;
  body.innerRadius = radius;
  body.outerRadius = radius;
  body.chart = Matrix::Identity(k, k);
  body.chartOrigin = Vector::Zero(k);
  return body;
}

ConvexBody productSimplexBody(int blocks, int k) {
  if (blocks < 1 || k < 1) throw std::invalid_argument("productSimplexBody: bad shape");
  const int ambient = blocks * k;
  ConvexBody body;
  body.ambientDim = ambient;
  body.contains = [blocks, k](const Vector& x) {
    for (int b = 0; b < blocks; ++b) {
      auto seg = x.segment(b * k, k);
      if (seg.minCoeff() < -kMembershipTol || std::abs(seg.sum() - 1.0) > kMembershipTol) {
        return false;
      }
    }
    return true;
  };
  body.project = [blocks, k](const Vector& x) {
    Vector out(x.size());
    for (int b = 0; b < blocks; ++b) {
      out.segment(b * k, k) = simplexProject(x.segment(b * k, k));
    }
    return out;
  };
  body.separate = [project = body.project](const Vector& x) {
    return separateByProjection(project, x, 1e-12);
  };
  body.innerPoint = Vector::Constant(ambient, 1.0 / k);
  body.innerRadius = k == 1 ? 1.0 : simplexInradius(k);
  body.outerRadius = std::sqrt(double(blocks)) * (k == 1 ? 1.0 : simplexCircumradius(k));
  Matrix chart = Matrix::Zero(ambient, blocks * (k - 1));
  Matrix block = zeroSumChart(k);
  for (int b = 0; b < blocks; ++b) {
    chart.block(b * k, b * (k - 1), k, k - 1) = block;
  }
  body.chart = chart;
  body.chartOrigin = body.innerPoint;
  return body;
}

ConvexBody segmentBody(double lo, double hi) {
  if (hi <= lo) throw std::invalid_argument("segmentBody: hi must exceed lo");
  Vector l(1), h(1);
  l << lo;
  h << hi;
  return boxBody(l, h);
}

ConvexBody hullBody(const Matrix& vertices) {
  if (vertices.cols() < 1) throw std::invalid_argument("hullBody: no vertices");
  const int ambient = static_cast<int>(vertices.rows());
  Vector mean = vertices.rowwise().mean();
  Matrix centered = vertices.colwise() - mean;
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > std::max(1e-12, 1e-12 * top)) ++rank;
  }
  ConvexBody body;
  body.ambientDim = ambient;
  body.chart = rank > 0 ? Matrix(svd.matrixU().leftCols(rank)) : Matrix::Zero(ambient, 0);
  body.chartOrigin = mean;
  body.innerPoint = mean;
  body.innerRadius = 0.0;  // no inner-ball certificate: not a cutting-plane domain
  body.outerRadius = (centered.colwise().norm()).maxCoeff();
  body.contains = [vertices](const Vector& x) {
    return minNormToHull(vertices, x).distance <= 1e-7;
  };
  body.project = [vertices](const Vector& x) { return minNormToHull(vertices, x).point; };
  body.separate = [vertices](const Vector& x) -> std::optional<Vector> {
    MinNormResult res = minNormToHull(vertices, x);
    if (res.distance <= 1e-9) return std::nullopt;
    return Vector((x - res.point) / res.distance);
  };
  return body;
}

MinNormResult minNormToHull(const Matrix& vertices, const Vector& y, const Vector* warmStart,
                            double gapTol, int maxIter) {
  const int count = static_cast<int>(vertices.cols());
  if (count == 0) throw std::invalid_argument("minNormToHull: no vertices");
  if (maxIter <= 0) maxIter = 100 * count + 5000;

  Vector w;
  if (warmStart && warmStart->size() == count && warmStart->minCoeff() >= 0 &&
      std::abs(warmStart->sum() - 1.0) < 1e-9) {
    w = *warmStart;
  } else {
    int start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      double d = (vertices.col(i) - y).squaredNorm();
      if (d < best) {
        best = d;
        start = i;
      }
    }
    w = Vector::Zero(count);
    w(start) = 1.0;
  }

  Vector x = vertices * w;
  double gap = 0.0;
  int iter = 0;
  for (; iter < maxIter; ++iter) {
    Vector g = 2.0 * (x - y);
    Vector scores = vertices.transpose() * g;
    int fw = 0;
    scores.minCoeff(&fw);
    int away = -1;
    double awayScore = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      if (w(i) > 1e-16 && scores(i) > awayScore) {
        awayScore = scores(i);
        away = i;
      }
    }
    gap = g.dot(x) - scores(fw);
    if (gap <= gapTol) break;

    bool useAway = false;
    Vector dir;
    double gammaMax = 1.0;
    double fwImprove = g.dot(x) - scores(fw);           // ⟨−g, v_fw − x⟩
    double awayImprove = away >= 0 ? awayScore - g.dot(x) : -1.0;  // ⟨−g, x − v_a⟩
    if (away >= 0 && awayImprove > fwImprove && w(away) < 1.0 - 1e-16) {
      useAway = true;
      dir = x - vertices.col(away);
      gammaMax = w(away) / (1.0 - w(away));
    } else {
      dir = vertices.col(fw) - x;
      gammaMax = 1.0;
    }
    double denom = 2.0 * dir.squaredNorm();
    if (denom <= 1e-300) break;
    double gamma = std::clamp(-g.dot(dir) / denom, 0.0, gammaMax);
    if (gamma <= 0) break;
    if (useAway) {
      w *= (1.0 + gamma);
      w(away) -= gamma;
      if (w(away) < 1e-15) w(away) = 0.0;
    } else {
      w *= (1.0 - gamma);
      w(fw) += gamma;
    }
    x += gamma * dir;
    if ((iter & 63) == 63) {
      w = w.cwiseMax(0.0);
      w /= w.sum();
      x = vertices * w;  // refresh against drift
    }
  }
  w = w.cwiseMax(0.0);
  w /= w.sum();
  x = vertices * w;
  MinNormResult res;
  res.weights = w;
  res.point = x;
  res.distance = (x - y).norm();
  res.gap = gap;
  return res;
}

}  // namespace pna
