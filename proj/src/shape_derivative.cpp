#include <cmath>

#include "cutshape/shapeopt.hpp"

namespace cutshape {

NodalVectorField shape_derivative(const FESpace& space, const Vector& u,
                                  const ElasticMaterial& m, double kappa,
                                  const CutGeometry& cut) {
  const auto& mesh = space.mesh();
  const LinearSpace V(mesh.fine);
  const int degree = volume_degree(mesh.coarse.kind, mesh.k);
  NodalVectorField dJ = NodalVectorField::Zero(V.size(), 2);
  for (int e : space.active_elements())
    for (int fe : mesh.children[e]) {
      if (cut.cells[fe].area <= 0.0) continue;
      const auto rule = material_rule(mesh, cut, fe, degree);
      const auto& nodes = V.nodes(fe);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[q];
        const Mat2 Du = space.displacement_gradient(u, e, x);
        const Mat2 eps = strain(Du);
        const double tr = eps.trace();
        const double energy = kappa - m.mu * eps.cwiseProduct(eps).sum() -
                              0.5 * m.lambda * tr * tr;
        const auto G = V.gradients(fe, x);
        for (std::size_t i = 0; i < nodes.size(); ++i)
          for (int c = 0; c < 2; ++c) {
            // theta = psi_i e_c: (grad theta)_{ab} = delta_{ac} d_b psi_i.
            Mat2 Dtheta = Mat2::Zero();
            Dtheta.row(c) = G.row(i);
            const Mat2 prod = Du * Dtheta;
            const Mat2 eps_theta = 0.5 * (prod + prod.transpose());
            const double value = 2.0 * m.mu * eps_theta.cwiseProduct(eps).sum() +
                                 m.lambda * eps_theta.trace() * tr +
                                 G(i, c) * energy;
            dJ(nodes[i], c) += rule.weights[q] * value;
          }
      }
    }
  return dJ;
}

NodalVectorField interpolate(const Mesh& mesh, const VectorFunction& f) {
  NodalVectorField r(mesh.num_vertices(), 2);
  for (int v = 0; v < mesh.num_vertices(); ++v) r.row(v) = f(mesh.vertices[v]).transpose();
  return r;
}

VelocitySolver::VelocitySolver(const Mesh& fine, double c1) {
  if (!(c1 > 0.0)) throw InvalidInput("c1 must be positive");
  const LinearSpace V(fine);
  B_ = V.mass() + c1 * V.stiffness();
  const int n = V.size();
  fixed_ = Eigen::Matrix<char, Eigen::Dynamic, 2>::Zero(n, 2);
  for (const auto& bf : fine.boundary_faces) {
    const int c = std::abs(bf.normal.x()) > 0.5 ? 0 : 1;
    fixed_(bf.vertices[0], c) = fixed_(bf.vertices[1], c) = 1;
  }
  for (int c = 0; c < 2; ++c) {
    std::vector<int> index(n, -1);
    for (int v = 0; v < n; ++v)
      if (!fixed_(v, c)) {
        index[v] = static_cast<int>(free_[c].size());
        free_[c].push_back(v);
      }
    Triplets t;
    for (int k = 0; k < B_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(B_, k); it; ++it)
        if (index[it.row()] >= 0 && index[it.col()] >= 0)
          t.emplace_back(index[it.row()], index[it.col()], it.value());
    const int nf = static_cast<int>(free_[c].size());
    SparseMatrix Bc(nf, nf);
    Bc.setFromTriplets(t.begin(), t.end());
    solvers_[c] = std::make_unique<SymmetricSolver>(Bc);
  }
}

NodalVectorField VelocitySolver::solve_raw(const NodalVectorField& dJ) const {
  NodalVectorField beta = NodalVectorField::Zero(dJ.rows(), 2);
  for (int c = 0; c < 2; ++c) {
    const auto& free = free_[c];
    Vector rhs(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) rhs[i] = -dJ(free[i], c);
    const Vector x = solvers_[c]->solve(rhs);
    for (std::size_t i = 0; i < free.size(); ++i) beta(free[i], c) = x[i];
  }
  return beta;
}

double VelocitySolver::inner(const NodalVectorField& a, const NodalVectorField& b) const {
  double s = 0.0;
  for (int c = 0; c < 2; ++c) s += a.col(c).dot(B_ * b.col(c));
  return s;
}

Velocity VelocitySolver::solve(const NodalVectorField& dJ) const {
  Velocity v;
  v.beta = solve_raw(dJ);
  const double b = inner(v.beta, v.beta);
  if (!(b >= 1e-20)) {
    v.stationary = true;
    v.beta.setZero();
    return v;
  }
  v.b_norm = std::sqrt(b);
  v.beta /= v.b_norm;
  return v;
}

}  // namespace cutshape
