#pragma once

#include <vector>

#include "cutshape/basis.hpp"
#include "cutshape/common.hpp"
#include "cutshape/mesh.hpp"
#include "cutshape/quadrature.hpp"

namespace cutshape {

/// Continuous piecewise linear (bilinear on quads) scalar space with one dof
/// per mesh vertex. Used on the refined mesh for the level set, the
/// velocity and the reinitialization. Keeps a reference to `mesh`.
class LinearSpace {
 public:
  explicit LinearSpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  int size() const { return mesh_->num_vertices(); }
  /// Vertex ids of element `e` in basis order.
  const std::vector<int>& nodes(int e) const { return nodes_[e]; }

  /// Rule over the whole element: total degree on triangles, degree per
  /// variable on quads.
  QuadratureRule element_rule(int e, int degree) const;

  Vector values(int e, const Vec2& x) const;
  /// Physical gradients, one row per local node.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(int e, const Vec2& x) const;
  double value(const Vector& f, int e, const Vec2& x) const;
  Vec2 gradient(const Vector& f, int e, const Vec2& x) const;

  SparseMatrix mass() const;
  SparseMatrix stiffness() const;

 private:
  Vec2 local(int e, const Vec2& x) const {
    return (x - mesh_->cell_corner(e)) / mesh_->h;
  }

  const Mesh* mesh_;
  BasisSet basis_;
  std::vector<std::vector<int>> nodes_;
};

}  // namespace cutshape
