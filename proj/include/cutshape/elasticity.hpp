#pragma once

#include <span>
#include <vector>

#include "cutshape/basis.hpp"
#include "cutshape/common.hpp"
#include "cutshape/levelset.hpp"
#include "cutshape/mesh.hpp"
#include "cutshape/quadrature.hpp"

namespace cutshape {

/// Isotropic material in plane strain.
struct ElasticMaterial {
  double E = 1e4;
  double nu = 0.3;
  double mu = 0.0;
  double lambda = 0.0;

  /// Throws InvalidInput unless E > 0 and 0 < nu < 0.5.
  static ElasticMaterial from_young_poisson(double E, double nu);
};

struct Stabilization {
  double gamma_D = 0.0;        // Nitsche penalty
  std::vector<double> gamma;   // ghost-penalty weights gamma_1..gamma_k

  /// gamma_D = 10 k^2 (mu + lambda), gamma_j = 1e-7 (mu + lambda).
  static Stabilization defaults(const ElasticMaterial& material, int k);
};

using PhysicalGradients = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Continuous vector-valued P_k (triangles) or Q_k (quads) space restricted
/// to the active coarse elements. Nodes are the fine vertices touched by an
/// active element, numbered compactly; dof 2 * node + c holds component c.
/// Keeps references to `mesh`.
class FESpace {
 public:
  FESpace(const RefinedMesh& mesh, const DomainClassification& classification);

  const RefinedMesh& mesh() const { return *mesh_; }
  int degree() const { return mesh_->k; }
  double h() const { return mesh_->coarse.h; }
  int num_nodes() const { return static_cast<int>(node_vertex_.size()); }
  int num_dofs() const { return 2 * num_nodes(); }
  bool active(int e) const { return !nodes_[e].empty(); }
  const std::vector<int>& active_elements() const { return active_elements_; }

  /// Node ids of element `e` in basis order; empty for inactive elements.
  const std::vector<int>& nodes(int e) const { return nodes_[e]; }
  /// Node at a fine vertex, or -1.
  int node(int fine_vertex) const { return vertex_node_[fine_vertex]; }
  int vertex(int node) const { return node_vertex_[node]; }

  const LagrangeBasis& basis(int e) const { return basis_[mesh_->coarse.shapes[e]]; }
  Vec2 local(int e, const Vec2& x) const {
    return (x - mesh_->coarse.cell_corner(e)) / h();
  }
  Vector values(int e, const Vec2& x) const { return basis(e).values(local(e, x)); }
  PhysicalGradients gradients(int e, const Vec2& x) const {
    return basis(e).gradients(local(e, x)) / h();
  }

  Vec2 displacement(const Vector& u, int e, const Vec2& x) const;
  /// (grad u)_{cd} = d u_c / d x_d.
  Mat2 displacement_gradient(const Vector& u, int e, const Vec2& x) const;

  /// Global dof ids of element `e`: node-major, component-minor.
  std::vector<int> element_dofs(int e) const;

 private:
  const RefinedMesh* mesh_;
  BasisSet basis_;
  std::vector<std::vector<int>> nodes_;
  std::vector<int> vertex_node_;
  std::vector<int> node_vertex_;
  std::vector<int> active_elements_;
};

/// Total polynomial degree needed for products of two shape functions on a
/// cut region: 2k on triangles, 4k for the tensor-product space on quads.
int volume_degree(ElementKind kind, int k);

/// Quadrature over the material part of fine element `fine_element`.
QuadratureRule material_rule(const RefinedMesh& mesh, const CutGeometry& cut,
                             int fine_element, int degree);

Mat2 strain(const Mat2& grad_u);
Mat2 stress(const ElasticMaterial& material, const Mat2& grad_u);

/// 2 mu (eps(u), eps(v)) + lambda (div u, div v) over the material domain.
SparseMatrix assemble_bulk(const FESpace& space, const ElasticMaterial& material,
                           const CutGeometry& cut);

/// sum_F sum_j gamma_j h^(2j-1) ([d^j_n u], [d^j_n v])_F, times `scale`,
/// componentwise over the listed coarse interior faces.
SparseMatrix assemble_ghost_penalty(const FESpace& space, std::span<const int> faces,
                                    std::span<const double> gamma, double scale);

struct NitscheTerms {
  SparseMatrix matrix;
  Vector rhs;
};

/// Symmetric Nitsche terms for u = g_D on the Dirichlet pieces; an empty
/// `g_D` means homogeneous data.
NitscheTerms assemble_nitsche(const FESpace& space, const ElasticMaterial& material,
                              std::span<const BoundaryPiece> pieces, double gamma_D,
                              const VectorFunction& g_D = {});

/// (g, v) over the loaded boundary pieces.
Vector assemble_load(const FESpace& space, std::span<const BoundaryPiece> pieces,
                     std::span<const TractionLoad> loads);

struct LinearSystem {
  SparseMatrix A;
  Vector b;
  SparseMatrix bulk;  // unstabilized a(u, v)
};

/// A_h = a + s_h(F_D) + h^2 s_h(F_N) + Nitsche, L = load + Nitsche data.
LinearSystem assemble_system(const FESpace& space, const ElasticMaterial& material,
                             const CutGeometry& cut,
                             const DomainClassification& classification,
                             const BoundarySpec& boundary, const Stabilization& stab);

/// Direct solve; throws SolverError on singular systems or a residual above
/// tolerance ||b||.
Vector solve(const LinearSystem& system, double tolerance = 1e-9);

struct ObjectiveValue {
  double J = 0.0;
  double compliance = 0.0;
  double volume = 0.0;
};

/// J = 1/2 a(u, u) + kappa |Omega|.
ObjectiveValue objective(const FESpace& space, const Vector& u, const CutGeometry& cut,
                         const ElasticMaterial& material, double kappa);

/// Displacement at every fine vertex (zero away from the active mesh).
NodalVectorField nodal_displacement(const FESpace& space, const Vector& u);

/// Plane-strain von Mises stress at the centroid of each fine element's
/// material part (zero where there is no material).
Vector von_mises(const FESpace& space, const Vector& u, const CutGeometry& cut,
                 const ElasticMaterial& material);

}  // namespace cutshape
