#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "cutshape/basis.hpp"
#include "cutshape/mesh.hpp"

using namespace cutshape;

TEST_CASE("unit square quad grid") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.5, ElementKind::quadrilateral);
  CHECK(m.num_elements() == 4);
  CHECK(m.num_vertices() == 9);
  CHECK(m.interior_faces.size() == 4);
  CHECK(m.boundary_faces.size() == 8);
}

TEST_CASE("unit square triangle grid") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.5, ElementKind::triangle);
  CHECK(m.num_elements() == 8);
  CHECK(m.num_vertices() == 9);
  // Hand count: 4 diagonals + 4 interior grid edges; the 8 boundary edges
  // are not interior. (Euler: E = V + F - 1 = 9 + 8 - 1 = 16 edges total.)
  CHECK(m.interior_faces.size() == 8);
  CHECK(m.interior_faces.size() + m.boundary_faces.size() == 16);
  double area = 0;
  for (int e = 0; e < m.num_elements(); ++e) area += m.element_area(e);
  CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("cantilever-sized rectangle") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(2, 1), 0.25, ElementKind::quadrilateral);
  CHECK(m.nx == 8);
  CHECK(m.ny == 4);
  CHECK(m.num_elements() == 32);
}

TEST_CASE("L-shape removes the notch") {
  const DesignDomain d = DesignDomain::lshape(2, 1);
  CHECK(d.area() == doctest::Approx(3.0));
  const Mesh m = build_background_mesh(d, 0.5, ElementKind::quadrilateral);
  CHECK(m.num_elements() == 12);
  CHECK(m.locate({1.5, 1.5}) == -1);
  CHECK(m.locate({0.5, 1.5}) >= 0);
  double perimeter = 0;
  for (const auto& f : m.boundary_faces) perimeter += f.length;
  CHECK(perimeter == doctest::Approx(8.0));
}

TEST_CASE("h must divide the domain") {
  CHECK_THROWS_AS(build_background_mesh(DesignDomain::rectangle(1, 1), 0.3, ElementKind::quadrilateral),
                  InvalidInput);
}

TEST_CASE("k=1 refinement is the identity") {
  for (auto kind : {ElementKind::quadrilateral, ElementKind::triangle}) {
    const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.25, kind);
    const RefinedMesh r = refine_uniform(m, 1);
    CHECK(r.fine.num_elements() == m.num_elements());
    CHECK(r.fine.num_vertices() == m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) CHECK((r.fine.vertices[v] - m.vertices[v]).norm() == 0.0);
  }
}

TEST_CASE("fine vertices sit on the Lagrange nodes") {
  for (auto kind : {ElementKind::quadrilateral, ElementKind::triangle})
    for (int k : {2, 3}) {
      const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.5, kind);
      const RefinedMesh r = refine_uniform(m, k);
      for (int e = 0; e < m.num_elements(); ++e) {
        CHECK(static_cast<int>(r.children[e].size()) == k * k);
        const auto lattice = lagrange_lattice(m.shapes[e], k);
        REQUIRE(lattice.size() == r.element_nodes[e].size());
        for (std::size_t i = 0; i < lattice.size(); ++i) {
          const Vec2 expect = m.cell_corner(e) + m.h / k * Vec2(lattice[i][0], lattice[i][1]);
          CHECK((r.fine.vertices[r.element_nodes[e][i]] - expect).norm() < 1e-14);
        }
        for (int c : r.children[e]) CHECK(r.parent[c] == e);
      }
      CHECK(r.fine.h == doctest::Approx(m.h / k));
    }
}

TEST_CASE("k=3 quad refinement: 16 distinct nodes per coarse quad") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 1.0, ElementKind::quadrilateral);
  const RefinedMesh r = refine_uniform(m, 3);
  CHECK(r.fine.num_elements() == 9);
  CHECK(r.fine.num_vertices() == 16);
  std::set<int> ids(r.element_nodes[0].begin(), r.element_nodes[0].end());
  CHECK(ids.size() == 16);
}

TEST_CASE("triangle k=2 gives 4 children with a quarter of the area") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 1.0, ElementKind::triangle);
  const RefinedMesh r = refine_uniform(m, 2);
  for (int e = 0; e < 2; ++e) {
    CHECK(r.children[e].size() == 4);
    double a = 0;
    for (int c : r.children[e]) a += r.fine.element_area(c);
    CHECK(a == doctest::Approx(m.element_area(e)));
  }
}

TEST_CASE("face orientation") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(2, 1), 1.0, ElementKind::quadrilateral);
  REQUIRE(m.interior_faces.size() == 1);
  const auto o = face_jump_orientation(m, {false, 0});
  CHECK(o.plus < o.minus);
  // Left element is K+, so the normal points to +x.
  CHECK(m.cell_corner(o.plus).x() < m.cell_corner(o.minus).x());
  CHECK(o.normal.x() == doctest::Approx(1.0));
  CHECK(o.normal.y() == doctest::Approx(0.0));
  CHECK_THROWS_AS(face_jump_orientation(m, {true, 0}), InvalidInput);
}

TEST_CASE("jumps of a continuous field vanish; swapping sides keeps the product") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.5, ElementKind::triangle);
  const BasisSet basis(2);
  // u = x^2 + xy, v = y^2 as local polynomials on each element.
  for (std::size_t f = 0; f < m.interior_faces.size(); ++f) {
    const auto& face = m.interior_faces[f];
    const Vec2 x = 0.5 * (m.vertices[face.vertices[0]] + m.vertices[face.vertices[1]]);
    auto nodal = [&](int e, auto fn) {
      const auto& lat = basis[m.shapes[e]].lattice();
      Vector c(lat.size());
      for (std::size_t i = 0; i < lat.size(); ++i)
        c[i] = fn(m.cell_corner(e) + m.h / 2 * Vec2(lat[i][0], lat[i][1]));
      return c;
    };
    auto u = [](const Vec2& p) { return p.x() * p.x() + p.x() * p.y(); };
    auto const1 = [](const Vec2&) { return 3.0; };
    auto kink = [](const Vec2& p) { return std::abs(p.x() - 0.5) + p.y(); };
    auto eval = [&](int e, const Vector& c, const Vec2& n, int j) {
      const Vec2 s = (x - m.cell_corner(e)) / m.h;
      return basis[m.shapes[e]].directional_derivative(s, n, j).dot(c) / std::pow(m.h, j);
    };
    const Vec2 n = face.normal;
    for (int j = 0; j <= 2; ++j) {
      const double jc = eval(face.plus, nodal(face.plus, const1), n, j) -
                        eval(face.minus, nodal(face.minus, const1), n, j);
      const double ju = eval(face.plus, nodal(face.plus, u), n, j) -
                        eval(face.minus, nodal(face.minus, u), n, j);
      CHECK(std::abs(jc) < 1e-11);
      CHECK(std::abs(ju) < 1e-10);
    }
    // Swapped orientation: the jump of d_n flips twice (jump and normal).
    const double a = eval(face.plus, nodal(face.plus, kink), n, 1) -
                     eval(face.minus, nodal(face.minus, kink), n, 1);
    const double b = eval(face.minus, nodal(face.minus, kink), -n, 1) -
                     eval(face.plus, nodal(face.plus, kink), -n, 1);
    CHECK(a * a == doctest::Approx(b * b));
    CHECK(a == doctest::Approx(b));
  }
}
