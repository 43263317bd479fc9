#include "cutshape/linear_space.hpp"

namespace cutshape {

LinearSpace::LinearSpace(const Mesh& mesh)
    : mesh_(&mesh), basis_(1), nodes_(lattice_nodes(mesh, 1, mesh)) {}

QuadratureRule LinearSpace::element_rule(int e, int degree) const {
  const auto& v = mesh_->elements[e];
  if (mesh_->kind == ElementKind::quadrilateral)
    return square_rule(mesh_->cell_corner(e), mesh_->h, degree);
  return triangle_rule(mesh_->vertices[v[0]], mesh_->vertices[v[1]],
                       mesh_->vertices[v[2]], degree);
}

Vector LinearSpace::values(int e, const Vec2& x) const {
  return basis_[mesh_->shapes[e]].values(local(e, x));
}

Eigen::Matrix<double, Eigen::Dynamic, 2> LinearSpace::gradients(
    int e, const Vec2& x) const {
  return basis_[mesh_->shapes[e]].gradients(local(e, x)) / mesh_->h;
}

double LinearSpace::value(const Vector& f, int e, const Vec2& x) const {
  const Vector n = values(e, x);
  double s = 0.0;
  for (int i = 0; i < n.size(); ++i) s += n[i] * f[nodes_[e][i]];
  return s;
}

Vec2 LinearSpace::gradient(const Vector& f, int e, const Vec2& x) const {
  const auto g = gradients(e, x);
  Vec2 s = Vec2::Zero();
  for (int i = 0; i < g.rows(); ++i) s += f[nodes_[e][i]] * g.row(i).transpose();
  return s;
}

SparseMatrix LinearSpace::mass() const {
  Triplets t;
  for (int e = 0; e < mesh_->num_elements(); ++e) {
    const auto rule = element_rule(e, 2);
    const auto& n = nodes_[e];
    Matrix m = Matrix::Zero(n.size(), n.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vector v = values(e, rule.points[q]);
      m += rule.weights[q] * v * v.transpose();
    }
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = 0; j < n.size(); ++j) t.emplace_back(n[i], n[j], m(i, j));
  }
  SparseMatrix M(size(), size());
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

SparseMatrix LinearSpace::stiffness() const {
  Triplets t;
  for (int e = 0; e < mesh_->num_elements(); ++e) {
    const auto rule = element_rule(e, 2);
    const auto& n = nodes_[e];
    Matrix k = Matrix::Zero(n.size(), n.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto g = gradients(e, rule.points[q]);
      k += rule.weights[q] * g * g.transpose();
    }
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = 0; j < n.size(); ++j) t.emplace_back(n[i], n[j], k(i, j));
  }
  SparseMatrix K(size(), size());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

}  // namespace cutshape
