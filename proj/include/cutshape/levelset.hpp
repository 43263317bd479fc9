#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cutshape/common.hpp"
#include "cutshape/mesh.hpp"

namespace cutshape {

/// Nodal values of the P1-iso-Pk level set, one per fine-mesh vertex.
/// The material domain is {phi > 0}; vertices with phi == 0 count as inside.
using LevelSetField = Vector;

using VectorFunction = std::function<Vec2(const Vec2&)>;

/// Straight piece of the design-domain boundary.
struct Segment {
  Vec2 a;
  Vec2 b;
};

struct TractionLoad {
  Segment segment;
  VectorFunction traction;  // N/m
};

/// Which parts of the boundary carry supports and loads. Dirichlet and loaded
/// segments lie on the design-domain boundary; the free cut boundary is
/// traction free unless `cut_boundary_dirichlet` is set.
struct BoundarySpec {
  std::vector<Segment> dirichlet;
  std::vector<TractionLoad> loads;
  VectorFunction dirichlet_value;  // empty means homogeneous
  bool cut_boundary_dirichlet = false;
};

struct Hole {
  Vec2 center;
  double radius;
};

/// Initial material layout: the design domain minus circular holes, or an
/// explicit signed-distance function (positive in material).
struct InitialDesign {
  std::vector<Hole> holes;
  std::function<double(const Vec2&)> custom;
};

enum class CellStatus : std::uint8_t { outside, cut, inside };

/// Piece of the zero level set inside one fine element; `normal` points out
/// of the material.
struct BoundarySegment {
  Vec2 a;
  Vec2 b;
  Vec2 normal;
};

/// Material part of one fine element: zero, one or (quad saddle) two convex
/// counter-clockwise polygons.
struct FineCut {
  CellStatus status = CellStatus::outside;
  std::vector<std::vector<Vec2>> polygons;
  std::vector<BoundarySegment> segments;
  double area = 0.0;
};

struct CutGeometry {
  std::vector<FineCut> cells;  // one per fine element
  double volume() const;
};

/// Piece of the design-domain boundary owned by a coarse element.
struct BoundaryPiece {
  int element;
  Vec2 a;
  Vec2 b;
  Vec2 normal;
  int load = -1;  // index into BoundarySpec::loads for loaded pieces
};

/// Element and face sets of the active mesh.
struct DomainClassification {
  std::vector<CellStatus> status;      // per coarse element
  std::vector<char> active;            // coarse element carries dofs
  std::vector<int> active_elements;
  std::vector<char> near_dirichlet;    // element touches the Dirichlet boundary
  std::vector<char> near_neumann;      // element touches the Neumann boundary
  std::vector<int> faces;              // interior faces between active elements
  std::vector<int> dirichlet_faces;    // faces touching near_dirichlet elements
  std::vector<int> neumann_faces;      // remaining faces touching near_neumann
  std::vector<BoundaryPiece> dirichlet_pieces;
  std::vector<BoundaryPiece> load_pieces;

  int num_inside() const;
  int num_cut() const;
  int num_outside() const;
};

/// Material polygons and zero-level segments of one element with vertices
/// `vertices` (counter-clockwise) and level-set values `values`. Quads use
/// linear interpolation between edge crossings; the saddle configuration is
/// resolved by the sign of the mean vertex value (ties count as material).
FineCut clip_element(std::span<const Vec2> vertices,
                     std::span<const double> values);

CutGeometry extract_geometry(const Mesh& fine, const LevelSetField& phi);

/// Classify coarse elements and build the stabilization face sets.
/// Throws DegenerateDomain when no element carries material.
DomainClassification classify(const RefinedMesh& mesh, const LevelSetField& phi,
                              const CutGeometry& cut,
                              const BoundarySpec& boundary);
DomainClassification classify(const RefinedMesh& mesh, const LevelSetField& phi,
                              const BoundarySpec& boundary);

LevelSetField init_levelset(const InitialDesign& design, const Mesh& fine,
                            const DesignDomain& domain);

struct ReinitOptions {
  int max_iterations = 50;
  double tolerance = 1e-3;  // relative to the fine mesh size
};

struct ReinitResult {
  LevelSetField phi;
  int iterations = 0;
  double last_update = 0.0;
  int clamped_gradients = 0;  // elements where |grad phi| < 1e-10
};

/// Two-step reinitialization towards a signed distance function: an L2
/// projection of phi / |grad phi| on the elements touching the zero level
/// set, then a fixed-point iteration for |grad phi| = 1 elsewhere with those
/// values held fixed.
ReinitResult reinitialize(const Mesh& fine, const LevelSetField& phi,
                          const ReinitOptions& options = {});

/// Parameter interval [lo, hi] within [0, 1] of the edge p + t (q - p) covered
/// by `s`; empty (hi <= lo) unless the two are collinear and overlap.
std::pair<double, double> edge_overlap(const Vec2& p, const Vec2& q, const Segment& s);

/// Parameter interval of an edge with end values fp, fq where the linear
/// interpolant is >= 0.
std::pair<double, double> material_interval(double fp, double fq);

/// Fine elements whose closure meets the zero level set.
std::vector<char> interface_elements(const Mesh& fine, const LevelSetField& phi);

}  // namespace cutshape
