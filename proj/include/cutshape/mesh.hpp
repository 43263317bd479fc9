#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cutshape/common.hpp"

namespace cutshape {

/// Axis-aligned design rectangle, optionally with one rectangular void
/// removed (the L-shape is a 2x2 square minus its top-right quarter).
struct DesignDomain {
  Vec2 lower{0.0, 0.0};
  Vec2 upper{1.0, 1.0};
  std::optional<std::array<Vec2, 2>> void_box;

  static DesignDomain rectangle(double width, double height);
  static DesignDomain lshape(double size, double notch);

  double area() const;
  double diameter() const;
  bool in_void(const Vec2& x) const;
};

/// Geometric shape of an element on the structured grid. Triangles come from
/// splitting each grid cell along its bottom-left to top-right diagonal.
enum class ElementShape : std::uint8_t { quad, lower_triangle, upper_triangle };

struct FaceRef {
  bool boundary = false;
  int id = -1;
};

struct InteriorFace {
  std::array<int, 2> vertices{};
  int plus = -1;   // lower element id
  int minus = -1;
  Vec2 normal;     // outward unit normal of `plus`
  double length = 0.0;
};

struct BoundaryFace {
  std::array<int, 2> vertices{};
  int element = -1;
  Vec2 normal;     // outward unit normal of the design domain
  double length = 0.0;
};

struct FaceOrientation {
  int plus;
  int minus;
  Vec2 normal;
};

/// Conforming structured mesh of a design domain. Vertices of each element
/// are stored counter-clockwise starting at the bottom-left corner of the
/// grid cell; edge i joins local vertices i and i+1.
struct Mesh {
  ElementKind kind = ElementKind::quadrilateral;
  double h = 0.0;
  Vec2 origin{0.0, 0.0};
  int nx = 0;
  int ny = 0;

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 4>> elements;
  std::vector<ElementShape> shapes;
  std::vector<int> element_cell;                // grid cell i + nx * j
  std::vector<std::array<int, 2>> cell_elements;  // -1 when absent
  std::vector<int> grid_vertex;                 // (nx+1)(ny+1) -> vertex or -1

  std::vector<InteriorFace> interior_faces;
  std::vector<BoundaryFace> boundary_faces;
  std::vector<std::array<FaceRef, 4>> element_faces;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int vertices_per_element() const {
    return kind == ElementKind::triangle ? 3 : 4;
  }
  /// Bottom-left corner of the grid cell holding element `e`.
  const Vec2& cell_corner(int e) const { return vertices[elements[e][0]]; }
  double element_area(int e) const;
  /// Element containing `x`, or -1 outside the mesh.
  int locate(const Vec2& x) const;
  /// Neighbor across local edge `edge` of element `e`, or -1 on the boundary.
  int neighbor(int e, int edge) const;
};

/// k-fold uniform refinement of a background mesh. The fine vertices are
/// exactly the Lagrange nodes of the degree-k elements on the coarse mesh.
struct RefinedMesh {
  Mesh coarse;
  Mesh fine;
  int k = 1;
  std::vector<int> parent;                 // fine element -> coarse element
  std::vector<std::vector<int>> children;  // coarse element -> fine elements
  /// coarse element -> fine vertex id of each local Lagrange node, in the
  /// order of LagrangeBasis::lattice() for the element's shape.
  std::vector<std::vector<int>> element_nodes;
};

Mesh build_background_mesh(const DesignDomain& domain, double h,
                           ElementKind kind);

RefinedMesh refine_uniform(const Mesh& mesh, int k);

/// Fine vertex id of every degree-k Lagrange node of each coarse element, in
/// lattice order. `fine` must be the k-fold refinement of `coarse` (or
/// `coarse` itself for k = 1).
std::vector<std::vector<int>> lattice_nodes(const Mesh& coarse, int k,
                                            const Mesh& fine);

/// K+/K- assignment of an interior face; the lower element id is K+.
FaceOrientation face_jump_orientation(const Mesh& mesh, FaceRef face);

/// Lattice offsets (a, b), 0 <= a, b <= k, of the degree-k Lagrange nodes of
/// an element shape, in local node order.
std::vector<std::array<int, 2>> lagrange_lattice(ElementShape shape, int k);

/// Legacy VTK unstructured grid of the mesh, for debugging.
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

}  // namespace cutshape
