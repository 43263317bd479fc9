#include <Eigen/SparseLU>

#include <cmath>

#include "cutshape/shapeopt.hpp"

namespace cutshape {

Transport::Transport(const Mesh& fine, double c2) : V_(fine) {
  if (!(c2 >= 0.0)) throw InvalidInput("c2 must be non-negative");
  M_ = V_.mass();
  Triplets t;
  for (const auto& face : fine.interior_faces) {
    const auto& np = V_.nodes(face.plus);
    const auto& nm = V_.nodes(face.minus);
    const auto rule = line_rule(fine.vertices[face.vertices[0]],
                                fine.vertices[face.vertices[1]], 2);
    const double scale = c2 * face.length * face.length;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const Vector dp = V_.gradients(face.plus, x) * face.normal;
      const Vector dm = V_.gradients(face.minus, x) * face.normal;
      std::vector<std::pair<int, double>> jump;
      for (std::size_t i = 0; i < np.size(); ++i) jump.emplace_back(np[i], dp[i]);
      for (std::size_t i = 0; i < nm.size(); ++i) jump.emplace_back(nm[i], -dm[i]);
      for (const auto& [i, a] : jump)
        for (const auto& [j, b] : jump)
          t.emplace_back(i, j, scale * rule.weights[q] * a * b);
    }
  }
  S_.resize(V_.size(), V_.size());
  S_.setFromTriplets(t.begin(), t.end());
}

SparseMatrix Transport::convection(const NodalVectorField& beta) const {
  const Mesh& mesh = V_.mesh();
  const int degree = mesh.kind == ElementKind::triangle ? 2 : 3;
  Triplets t;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& nodes = V_.nodes(e);
    const auto rule = V_.element_rule(e, degree);
    const int m = static_cast<int>(nodes.size());
    Matrix C = Matrix::Zero(m, m);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vector N = V_.values(e, rule.points[q]);
      const auto G = V_.gradients(e, rule.points[q]);
      Vec2 b = Vec2::Zero();
      for (int i = 0; i < m; ++i) b += N[i] * beta.row(nodes[i]).transpose();
      C.noalias() += rule.weights[q] * N * (G * b).transpose();
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) t.emplace_back(nodes[i], nodes[j], C(i, j));
  }
  SparseMatrix C(V_.size(), V_.size());
  C.setFromTriplets(t.begin(), t.end());
  return C;
}

int Transport::substeps_for(const NodalVectorField& beta, double T) const {
  const double speed = beta.rows() ? beta.rowwise().norm().maxCoeff() : 0.0;
  return std::max(1, static_cast<int>(std::ceil(T * speed / V_.mesh().h - 1e-12)));
}

LevelSetField Transport::advance(const LevelSetField& phi, const NodalVectorField& beta,
                                 double T, int substeps) const {
  if (beta.rows() != phi.size())
    throw InvalidInput("velocity and level set sizes differ");
  if (beta.isZero(0.0)) return phi;
  if (substeps <= 0) substeps = substeps_for(beta, T);
  const double dt = T / substeps;
  const SparseMatrix L = convection(beta) + S_;
  SparseMatrix lhs = M_ + 0.5 * dt * L;
  const SparseMatrix rhs = M_ - 0.5 * dt * L;
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) throw SolverError("transport factorization failed");
  LevelSetField x = phi;
  for (int s = 0; s < substeps; ++s) {
    x = lu.solve(rhs * x);
    if (lu.info() != Eigen::Success) throw SolverError("transport solve failed");
  }
  return x;
}

}  // namespace cutshape
