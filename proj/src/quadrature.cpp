#include "cutshape/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <mutex>

namespace cutshape {

double QuadratureRule::measure() const {
  double m = 0.0;
  for (double w : weights) m += w;
  return m;
}

void QuadratureRule::append(const QuadratureRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

const std::pair<Vector, Vector>& gauss_legendre(int n) {
  static std::map<int, std::pair<Vector, Vector>> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // Jacobi matrix of the Legendre recurrence.
  Matrix jacobi = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  Vector nodes = eig.eigenvalues();
  Vector weights = 2.0 * eig.eigenvectors().row(0).transpose().array().square();
  return cache.emplace(n, std::make_pair(nodes, weights)).first->second;
}

namespace {

struct ReferenceTriangleRule {
  std::vector<Vec2> points;  // on (0,0), (1,0), (0,1)
  std::vector<double> weights;  // sum to 1
};

const ReferenceTriangleRule& reference_triangle(int degree) {
  static std::map<int, ReferenceTriangleRule> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(degree); it != cache.end()) return it->second;

  // (u, v) -> (u, v (1 - u)) maps the unit square onto the triangle with
  // Jacobian (1 - u), which raises the degree in u by one.
  const int n = std::max(1, (degree + 3) / 2);
  const auto& [x, w] = gauss_legendre(n);
  ReferenceTriangleRule ref;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (x[j] + 1.0);
      ref.points.emplace_back(u, v * (1.0 - u));
      ref.weights.push_back(0.5 * w[i] * w[j] * (1.0 - u));
    }
  }
  return cache.emplace(degree, std::move(ref)).first->second;
}

}  // namespace

QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c,
                             int degree) {
  const auto& ref = reference_triangle(degree);
  const Vec2 e1 = b - a, e2 = c - a;
  const double area = 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  QuadratureRule rule;
  rule.points.reserve(ref.points.size());
  rule.weights.reserve(ref.points.size());
  for (std::size_t q = 0; q < ref.points.size(); ++q) {
    rule.points.push_back(a + ref.points[q].x() * e1 + ref.points[q].y() * e2);
    rule.weights.push_back(area * ref.weights[q]);
  }
  return rule;
}

QuadratureRule square_rule(const Vec2& lower, double size, int degree) {
  const int n = std::max(1, (degree + 2) / 2);
  const auto& [x, w] = gauss_legendre(n);
  QuadratureRule rule;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      rule.points.push_back(lower + 0.5 * size * Vec2(x[i] + 1.0, x[j] + 1.0));
      rule.weights.push_back(0.25 * size * size * w[i] * w[j]);
    }
  return rule;
}

double polygon_area(std::span<const Vec2> polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

QuadratureRule volume_rule(std::span<const Vec2> polygon, int degree,
                           double min_area) {
  QuadratureRule rule;
  if (polygon.size() < 3) return rule;
  const double area = polygon_area(polygon);
  if (!(area > min_area)) return rule;
  if (polygon.size() == 3) return triangle_rule(polygon[0], polygon[1], polygon[2], degree);

  Vec2 centroid = Vec2::Zero();
  for (const auto& p : polygon) centroid += p;
  centroid /= static_cast<double>(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % polygon.size()];
    const double sub = 0.5 * ((p - centroid).x() * (q - centroid).y() -
                              (p - centroid).y() * (q - centroid).x());
    if (sub <= 0.0) continue;
    rule.append(triangle_rule(centroid, p, q, degree));
  }
  return rule;
}

QuadratureRule line_rule(const Vec2& a, const Vec2& b, int degree) {
  QuadratureRule rule;
  const double length = (b - a).norm();
  if (!(length > 0.0)) return rule;
  const int n = std::max(1, (degree + 2) / 2);
  const auto& [x, w] = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(a + 0.5 * (x[i] + 1.0) * (b - a));
    rule.weights.push_back(0.5 * length * w[i]);
  }
  return rule;
}

QuadratureRule face_rule(const Mesh& mesh, int face, int degree) {
  const auto& f = mesh.interior_faces.at(face);
  return line_rule(mesh.vertices[f.vertices[0]], mesh.vertices[f.vertices[1]],
                   degree);
}

}  // namespace cutshape
