#pragma once

#include <span>
#include <vector>

#include "cutshape/common.hpp"
#include "cutshape/mesh.hpp"

namespace cutshape {

/// Points and weights in physical coordinates. Weights carry the measure of
/// the integration region (area for volume rules, length for line rules).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  double measure() const;
  void append(const QuadratureRule& other);

  template <class F>
  auto integrate(F&& f) const -> decltype(f(Vec2{})) {
    decltype(f(Vec2{})) sum = weights[0] * f(points[0]);
    for (std::size_t q = 1; q < size(); ++q) sum += weights[q] * f(points[q]);
    return sum;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
const std::pair<Vector, Vector>& gauss_legendre(int n);

/// Collapsed-coordinate Gauss rule on a triangle, exact for total degree
/// `degree`.
QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c,
                             int degree);

/// Tensor Gauss rule on an axis-aligned square, exact for degree `degree` in
/// each variable.
QuadratureRule square_rule(const Vec2& lower, double size, int degree);

/// Rule on a convex counter-clockwise polygon, fan-triangulated from the
/// vertex centroid. Returns an empty rule when the area is below `min_area`.
QuadratureRule volume_rule(std::span<const Vec2> polygon, int degree,
                           double min_area = 0.0);

QuadratureRule line_rule(const Vec2& a, const Vec2& b, int degree);

/// Line rule over the full interior face `face` of `mesh`.
QuadratureRule face_rule(const Mesh& mesh, int face, int degree);

/// Signed shoelace area.
double polygon_area(std::span<const Vec2> polygon);

}  // namespace cutshape
