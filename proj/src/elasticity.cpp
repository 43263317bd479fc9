#include "cutshape/elasticity.hpp"

#include <cmath>
#include <map>

#include "cutshape/linsolve.hpp"

namespace cutshape {

ElasticMaterial ElasticMaterial::from_young_poisson(double E, double nu) {
  if (!(E > 0.0)) throw InvalidInput("material.E must be positive");
  if (!(nu > 0.0 && nu < 0.5))
    throw InvalidInput("material.nu must lie in (0, 0.5)");
  ElasticMaterial m;
  m.E = E;
  m.nu = nu;
  m.mu = E / (2.0 * (1.0 + nu));
  m.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return m;
}

Stabilization Stabilization::defaults(const ElasticMaterial& material, int k) {
  Stabilization s;
  s.gamma_D = 10.0 * k * k * (material.mu + material.lambda);
  s.gamma.assign(k, 1e-7 * (material.mu + material.lambda));
  return s;
}

FESpace::FESpace(const RefinedMesh& mesh, const DomainClassification& cls)
    : mesh_(&mesh), basis_(mesh.k) {
  const int ne = mesh.coarse.num_elements();
  nodes_.assign(ne, {});
  vertex_node_.assign(mesh.fine.num_vertices(), -1);
  for (int e = 0; e < ne; ++e) {
    if (!cls.active[e]) continue;
    active_elements_.push_back(e);
    for (int v : mesh.element_nodes[e]) {
      if (vertex_node_[v] < 0) {
        vertex_node_[v] = static_cast<int>(node_vertex_.size());
        node_vertex_.push_back(v);
      }
      nodes_[e].push_back(vertex_node_[v]);
    }
  }
}

Vec2 FESpace::displacement(const Vector& u, int e, const Vec2& x) const {
  const Vector N = values(e, x);
  Vec2 r = Vec2::Zero();
  const auto& n = nodes_[e];
  for (std::size_t i = 0; i < n.size(); ++i)
    r += N[i] * Vec2(u[2 * n[i]], u[2 * n[i] + 1]);
  return r;
}

Mat2 FESpace::displacement_gradient(const Vector& u, int e, const Vec2& x) const {
  const auto G = gradients(e, x);
  Mat2 r = Mat2::Zero();
  const auto& n = nodes_[e];
  for (std::size_t i = 0; i < n.size(); ++i)
    r += Vec2(u[2 * n[i]], u[2 * n[i] + 1]) * G.row(i);
  return r;
}

std::vector<int> FESpace::element_dofs(int e) const {
  std::vector<int> d;
  d.reserve(2 * nodes_[e].size());
  for (int n : nodes_[e]) {
    d.push_back(2 * n);
    d.push_back(2 * n + 1);
  }
  return d;
}

int volume_degree(ElementKind kind, int k) {
  return kind == ElementKind::triangle ? 2 * k : 4 * k;
}

QuadratureRule material_rule(const RefinedMesh& mesh, const CutGeometry& cut,
                             int fine_element, int degree) {
  const auto& cell = cut.cells[fine_element];
  const Mesh& fine = mesh.fine;
  if (cell.status == CellStatus::inside) {
    const auto& v = fine.elements[fine_element];
    if (fine.kind == ElementKind::quadrilateral)
      return square_rule(fine.cell_corner(fine_element), fine.h, degree);
    return triangle_rule(fine.vertices[v[0]], fine.vertices[v[1]],
                         fine.vertices[v[2]], degree);
  }
  QuadratureRule rule;
  for (const auto& poly : cell.polygons) rule.append(volume_rule(poly, degree));
  return rule;
}

Mat2 strain(const Mat2& grad_u) { return 0.5 * (grad_u + grad_u.transpose()); }

Mat2 stress(const ElasticMaterial& m, const Mat2& grad_u) {
  const Mat2 eps = strain(grad_u);
  return 2.0 * m.mu * eps + m.lambda * eps.trace() * Mat2::Identity();
}

namespace {

void scatter(Triplets& t, const std::vector<int>& dofs, const Matrix& local) {
  for (std::size_t i = 0; i < dofs.size(); ++i)
    for (std::size_t j = 0; j < dofs.size(); ++j)
      if (local(i, j) != 0.0) t.emplace_back(dofs[i], dofs[j], local(i, j));
}

SparseMatrix from_triplets(int n, const Triplets& t) {
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

/// Strain-displacement matrix in Voigt notation (xx, yy, engineering xy).
Eigen::Matrix<double, 3, Eigen::Dynamic> strain_matrix(const PhysicalGradients& G) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> B =
      Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2 * G.rows());
  for (int i = 0; i < G.rows(); ++i) {
    B(0, 2 * i) = G(i, 0);
    B(1, 2 * i + 1) = G(i, 1);
    B(2, 2 * i) = G(i, 1);
    B(2, 2 * i + 1) = G(i, 0);
  }
  return B;
}

/// Trace operator N (2 x 2m) with column 2i+c = psi_i e_c.
Eigen::Matrix<double, 2, Eigen::Dynamic> trace_matrix(const Vector& N) {
  Eigen::Matrix<double, 2, Eigen::Dynamic> T =
      Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, 2 * N.size());
  for (int i = 0; i < N.size(); ++i) {
    T(0, 2 * i) = N[i];
    T(1, 2 * i + 1) = N[i];
  }
  return T;
}

int line_degree(ElementKind kind, int k) {
  return kind == ElementKind::triangle ? 2 * k + 1 : 4 * k + 1;
}

}  // namespace

SparseMatrix assemble_bulk(const FESpace& space, const ElasticMaterial& m,
                           const CutGeometry& cut) {
  const auto& mesh = space.mesh();
  const int degree = volume_degree(mesh.coarse.kind, mesh.k);
  Eigen::Matrix3d D;
  D << 2 * m.mu + m.lambda, m.lambda, 0, m.lambda, 2 * m.mu + m.lambda, 0, 0, 0, m.mu;
  Triplets t;
  for (int e : space.active_elements()) {
    const auto dofs = space.element_dofs(e);
    Matrix K = Matrix::Zero(dofs.size(), dofs.size());
    for (int fe : mesh.children[e]) {
      if (cut.cells[fe].area <= 0.0) continue;
      const auto rule = material_rule(mesh, cut, fe, degree);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto B = strain_matrix(space.gradients(e, rule.points[q]));
        K.noalias() += rule.weights[q] * B.transpose() * D * B;
      }
    }
    scatter(t, dofs, K);
  }
  return from_triplets(space.num_dofs(), t);
}

SparseMatrix assemble_ghost_penalty(const FESpace& space, std::span<const int> faces,
                                    std::span<const double> gamma, double scale) {
  const Mesh& coarse = space.mesh().coarse;
  const double h = space.h();
  const int k = static_cast<int>(gamma.size());
  Triplets t;
  for (int f : faces) {
    const auto& face = coarse.interior_faces[f];
    const int ep = face.plus, em = face.minus;
    // Union of the two elements' nodes.
    std::vector<int> nodes = space.nodes(ep);
    std::map<int, int> slot;
    for (std::size_t i = 0; i < nodes.size(); ++i) slot[nodes[i]] = static_cast<int>(i);
    std::vector<int> minus_slot;
    for (int n : space.nodes(em)) {
      auto [it, inserted] = slot.emplace(n, static_cast<int>(nodes.size()));
      if (inserted) nodes.push_back(n);
      minus_slot.push_back(it->second);
    }
    const int m = static_cast<int>(nodes.size());
    Matrix S = Matrix::Zero(m, m);
    const auto rule = face_rule(coarse, f, 2 * space.degree() + 1);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      for (int j = 1; j <= k; ++j) {
        if (gamma[j - 1] == 0.0) continue;
        const double hj = std::pow(h, j);
        const Vector dp = space.basis(ep).directional_derivative(space.local(ep, x), face.normal, j) / hj;
        const Vector dm = space.basis(em).directional_derivative(space.local(em, x), face.normal, j) / hj;
        Vector jump = Vector::Zero(m);
        jump.head(dp.size()) = dp;
        for (int i = 0; i < dm.size(); ++i) jump[minus_slot[i]] -= dm[i];
        S.noalias() += scale * gamma[j - 1] * std::pow(h, 2 * j - 1) * rule.weights[q] *
                       jump * jump.transpose();
      }
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (S(i, j) != 0.0)
          for (int c = 0; c < 2; ++c)
            t.emplace_back(2 * nodes[i] + c, 2 * nodes[j] + c, S(i, j));
  }
  return from_triplets(space.num_dofs(), t);
}

NitscheTerms assemble_nitsche(const FESpace& space, const ElasticMaterial& mat,
                              std::span<const BoundaryPiece> pieces, double gamma_D,
                              const VectorFunction& g_D) {
  const double h = space.h();
  const int degree = line_degree(space.mesh().coarse.kind, space.degree());
  Triplets t;
  NitscheTerms out;
  out.rhs = Vector::Zero(space.num_dofs());
  for (const auto& piece : pieces) {
    const int e = piece.element;
    const auto dofs = space.element_dofs(e);
    const int m = static_cast<int>(dofs.size());
    const Vec2& n = piece.normal;
    Matrix A = Matrix::Zero(m, m);
    Vector b = Vector::Zero(m);
    const auto rule = line_rule(piece.a, piece.b, degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const auto N = trace_matrix(space.values(e, x));
      const auto G = space.gradients(e, x);
      // Column 2i+c: sigma(psi_i e_c) n.
      Eigen::Matrix<double, 2, Eigen::Dynamic> S(2, m);
      for (int i = 0; i < G.rows(); ++i) {
        const Vec2 g = G.row(i).transpose();
        const double gn = g.dot(n);
        for (int c = 0; c < 2; ++c) {
          Vec2 col = mat.mu * n[c] * g + mat.lambda * g[c] * n;
          col[c] += mat.mu * gn;
          S.col(2 * i + c) = col;
        }
      }
      const Eigen::RowVectorXd Nn = n.transpose() * N;
      A.noalias() += w * (-N.transpose() * S - S.transpose() * N +
                          gamma_D / h * (2.0 * mat.mu * N.transpose() * N +
                                         mat.lambda * Nn.transpose() * Nn));
      if (g_D) {
        const Vec2 g = g_D(x);
        b.noalias() += w * (-S.transpose() * g +
                            gamma_D / h * (2.0 * mat.mu * N.transpose() * g +
                                           mat.lambda * n.dot(g) * Nn.transpose()));
      }
    }
    scatter(t, dofs, A);
    for (int i = 0; i < m; ++i) out.rhs[dofs[i]] += b[i];
  }
  out.matrix = from_triplets(space.num_dofs(), t);
  return out;
}

Vector assemble_load(const FESpace& space, std::span<const BoundaryPiece> pieces,
                     std::span<const TractionLoad> loads) {
  Vector b = Vector::Zero(space.num_dofs());
  const int degree = line_degree(space.mesh().coarse.kind, space.degree()) + 1;
  for (const auto& piece : pieces) {
    if (piece.load < 0) continue;
    const auto& traction = loads[piece.load].traction;
    if (!traction) continue;
    const auto dofs = space.element_dofs(piece.element);
    const auto rule = line_rule(piece.a, piece.b, degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vector N = space.values(piece.element, rule.points[q]);
      const Vec2 g = traction(rule.points[q]);
      for (int i = 0; i < N.size(); ++i)
        for (int c = 0; c < 2; ++c) b[dofs[2 * i + c]] += rule.weights[q] * N[i] * g[c];
    }
  }
  return b;
}

LinearSystem assemble_system(const FESpace& space, const ElasticMaterial& material,
                             const CutGeometry& cut, const DomainClassification& cls,
                             const BoundarySpec& boundary, const Stabilization& stab) {
  LinearSystem sys;
  sys.bulk = assemble_bulk(space, material, cut);
  const double h = space.h();
  const auto nitsche = assemble_nitsche(space, material, cls.dirichlet_pieces,
                                        stab.gamma_D, boundary.dirichlet_value);
  sys.A = sys.bulk + nitsche.matrix +
          assemble_ghost_penalty(space, cls.dirichlet_faces, stab.gamma, 1.0) +
          assemble_ghost_penalty(space, cls.neumann_faces, stab.gamma, h * h);
  sys.A.prune(0.0);
  sys.b = assemble_load(space, cls.load_pieces, boundary.loads) + nitsche.rhs;
  return sys;
}

Vector solve(const LinearSystem& system, double tolerance) {
  return SymmetricSolver(system.A, tolerance).solve(system.b);
}

ObjectiveValue objective(const FESpace& space, const Vector& u, const CutGeometry& cut,
                         const ElasticMaterial& material, double kappa) {
  const auto& mesh = space.mesh();
  const int degree = volume_degree(mesh.coarse.kind, mesh.k);
  ObjectiveValue r;
  r.volume = cut.volume();
  for (int e : space.active_elements())
    for (int fe : mesh.children[e]) {
      if (cut.cells[fe].area <= 0.0) continue;
      const auto rule = material_rule(mesh, cut, fe, degree);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Mat2 G = space.displacement_gradient(u, e, rule.points[q]);
        r.compliance += 0.5 * rule.weights[q] *
                        (stress(material, G).cwiseProduct(strain(G))).sum();
      }
    }
  r.J = r.compliance + kappa * r.volume;
  return r;
}

NodalVectorField nodal_displacement(const FESpace& space, const Vector& u) {
  NodalVectorField d = NodalVectorField::Zero(space.mesh().fine.num_vertices(), 2);
  for (int n = 0; n < space.num_nodes(); ++n)
    d.row(space.vertex(n)) << u[2 * n], u[2 * n + 1];
  return d;
}

Vector von_mises(const FESpace& space, const Vector& u, const CutGeometry& cut,
                 const ElasticMaterial& material) {
  const auto& mesh = space.mesh();
  Vector vm = Vector::Zero(mesh.fine.num_elements());
  for (int fe = 0; fe < mesh.fine.num_elements(); ++fe) {
    const int e = mesh.parent[fe];
    const auto& cell = cut.cells[fe];
    if (!space.active(e) || cell.area <= 0.0) continue;
    Vec2 c = Vec2::Zero();
    int count = 0;
    for (const auto& poly : cell.polygons)
      for (const auto& p : poly) {
        c += p;
        ++count;
      }
    c /= count;
    const Mat2 G = space.displacement_gradient(u, e, c);
    const Mat2 s = stress(material, G);
    const double szz = material.lambda * G.trace();
    const double sxx = s(0, 0), syy = s(1, 1), sxy = s(0, 1);
    vm[fe] = std::sqrt(0.5 * ((sxx - syy) * (sxx - syy) + (syy - szz) * (syy - szz) +
                              (szz - sxx) * (szz - sxx)) +
                       3.0 * sxy * sxy);
  }
  return vm;
}

}  // namespace cutshape
