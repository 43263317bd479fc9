#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cutshape/elasticity.hpp"
#include "cutshape/levelset.hpp"
#include "cutshape/linear_space.hpp"
#include "cutshape/linsolve.hpp"
#include "cutshape/mesh.hpp"

namespace cutshape {

/// Shape derivative as a linear functional on the fine P1 (Q1) vector space:
/// row v holds dJ(psi_v e_x), dJ(psi_v e_y).
NodalVectorField shape_derivative(const FESpace& space, const Vector& u,
                                  const ElasticMaterial& material, double kappa,
                                  const CutGeometry& cut);

/// dJ(theta) for a nodal velocity field theta.
inline double apply(const NodalVectorField& dJ, const NodalVectorField& theta) {
  return dJ.cwiseProduct(theta).sum();
}

/// Nodal interpolant of a vector function on the mesh vertices.
NodalVectorField interpolate(const Mesh& mesh, const VectorFunction& f);

struct Velocity {
  NodalVectorField beta;   // normalized, b(beta, beta) = 1
  double b_norm = 0.0;     // sqrt(b(beta', beta')) before normalization
  bool stationary = false;
};

/// Regularized descent direction: b(beta', theta) = -dJ(theta) with
/// b = L2 + c1 H1-seminorm on the design domain and beta' . n = 0 on the
/// design-domain boundary (both components at corners).
class VelocitySolver {
 public:
  VelocitySolver(const Mesh& fine, double c1);

  Velocity solve(const NodalVectorField& dJ) const;
  /// Unnormalized solution beta'.
  NodalVectorField solve_raw(const NodalVectorField& dJ) const;
  double inner(const NodalVectorField& a, const NodalVectorField& b) const;
  /// Mask of constrained components (1 = fixed to zero).
  const Eigen::Matrix<char, Eigen::Dynamic, 2>& constrained() const { return fixed_; }

 private:
  SparseMatrix B_;
  Eigen::Matrix<char, Eigen::Dynamic, 2> fixed_;
  std::array<std::vector<int>, 2> free_;
  std::array<std::unique_ptr<SymmetricSolver>, 2> solvers_;
};

/// Crank-Nicolson transport of the level set on the fine mesh,
/// d phi/dt + beta . grad phi = 0, with the jump stabilization
/// c2 sum_F h_F^2 ([d_n phi], [d_n v])_F over fine interior faces.
class Transport {
 public:
  Transport(const Mesh& fine, double c2);

  /// Advance over time T; substeps <= 0 selects the Courant-number bound
  /// T max|beta| / (h/k) per step <= 1.
  LevelSetField advance(const LevelSetField& phi, const NodalVectorField& beta,
                        double T, int substeps = 0) const;
  int substeps_for(const NodalVectorField& beta, double T) const;

  const SparseMatrix& mass() const { return M_; }
  const SparseMatrix& stabilization() const { return S_; }
  SparseMatrix convection(const NodalVectorField& beta) const;

 private:
  LinearSpace V_;
  SparseMatrix M_;
  SparseMatrix S_;
};

/// Number of connected material components: fine elements with material are
/// linked across faces whose material part has positive length.
int count_components(const Mesh& fine, const LevelSetField& phi, const CutGeometry& cut);

struct FilterResult {
  LevelSetField phi;
  int components = 0;  // before filtering
  int removed = 0;
};

/// Remove material components that do not touch the Dirichlet boundary by
/// setting phi = -|phi| on vertices outside the kept components. Throws
/// DegenerateDomain when no component is supported.
FilterResult filter_disconnected(const Mesh& fine, const LevelSetField& phi,
                                 const CutGeometry& cut, const BoundarySpec& boundary);

/// Variant following the stiffness-matrix connectivity instead of the
/// geometry: coarse elements with material are linked when they share a
/// Lagrange node, so pieces coupled through the discrete space are kept.
FilterResult filter_unsupported(const RefinedMesh& mesh, const LevelSetField& phi,
                                const CutGeometry& cut, const BoundarySpec& boundary);

enum class FilterMode { none, geometric, stiffness };
const char* to_string(FilterMode mode);

/// Keep material within `width` of the supports and the loaded segments:
/// phi = max(phi, width - dist) inside the strips, unchanged elsewhere.
LevelSetField apply_non_design(const Mesh& fine, const LevelSetField& phi,
                               const BoundarySpec& boundary, double width);

struct OptimizationConfig {
  DesignDomain domain;
  ElementKind kind = ElementKind::quadrilateral;
  int k = 1;
  double h = 0.05;
  ElasticMaterial material = ElasticMaterial::from_young_poisson(1e4, 0.3);
  double kappa = 35.0;
  BoundarySpec boundary;
  InitialDesign initial;
  Stabilization stabilization;
  double c1 = 0.0;
  double c2 = 0.1;
  double T0 = 0.0;
  int max_iterations = 50;
  ReinitOptions reinit;
  double non_design_width = -1.0;  // < 0: 2h/k; 0 disables the strips
  FilterMode filter = FilterMode::geometric;
  int transport_substeps = 0;     // 0 = automatic
  /// Relative residual accepted from elasticity solves. Nearly empty cut
  /// elements put the roundoff floor of ||Au - b|| / ||b|| near 1e-8.
  double solver_tolerance = 1e-6;
};

/// Fill unset parameters: c1 = 3 (h/k)^2, T0 = 0.05 diam, the default
/// stabilization, and strips of width 2h/k. Unset means zero (negative for
/// the strip width, empty for the ghost-penalty weights). A single weight
/// is repeated for every derivative order.
OptimizationConfig resolve_defaults(OptimizationConfig config);

/// Everything derived from one level set.
struct Evaluation {
  LevelSetField phi;
  CutGeometry cut;
  DomainClassification classification;
  std::shared_ptr<FESpace> space;
  Vector u;
  ObjectiveValue value;
  int components = 0;
};

struct IterationRecord {
  int iter = 0;
  double t = 0.0;
  double T = 0.0;
  double J = 0.0;
  double compliance = 0.0;
  double volume = 0.0;
  bool accepted = false;
  int components = 0;
};

enum class StopReason { max_iterations, stationary, step_underflow };
const char* to_string(StopReason reason);

struct OptimizationState {
  int iteration = 0;
  double t = 0.0;
  double T = 0.0;
  std::vector<IterationRecord> history;
  StopReason reason = StopReason::max_iterations;
};

struct OptimizationCallbacks {
  /// Every evaluated trial (and the initial state).
  std::function<void(const IterationRecord&)> on_record;
  /// The initial state and every accepted iterate.
  std::function<void(const IterationRecord&, const Evaluation&)> on_accept;
};

/// Level-set compliance minimization with the doubling/halving line search.
class Optimizer {
 public:
  explicit Optimizer(OptimizationConfig config);
  Optimizer(const Optimizer&) = delete;
  Optimizer& operator=(const Optimizer&) = delete;

  const OptimizationConfig& config() const { return config_; }
  const RefinedMesh& mesh() const { return mesh_; }
  const VelocitySolver& velocity() const { return velocity_; }
  const Transport& transport() const { return transport_; }

  /// Initial design with the non-design strips applied.
  LevelSetField initial_levelset() const;
  /// Non-design strips, disconnected-part filter and, optionally,
  /// reinitialization. `components` receives the component count before
  /// filtering. Throws DegenerateDomain when the loaded material is cut off
  /// from the supports.
  LevelSetField postprocess(const LevelSetField& phi, int* components = nullptr,
                            bool reinit = true) const;
  /// The configured disconnected-material filter.
  FilterResult filter(const LevelSetField& phi, const CutGeometry& cut) const;
  /// Geometry, elasticity solve and objective for `phi`.
  Evaluation evaluate(const LevelSetField& phi) const;
  NodalVectorField shape_derivative(const Evaluation& state) const;

  /// Run from the initial design. The last accepted evaluation is returned
  /// through `final_state` when given.
  OptimizationState run(const OptimizationCallbacks& callbacks = {},
                        Evaluation* final_state = nullptr) const;

 private:
  OptimizationConfig config_;
  RefinedMesh mesh_;
  VelocitySolver velocity_;
  Transport transport_;
};

}  // namespace cutshape
